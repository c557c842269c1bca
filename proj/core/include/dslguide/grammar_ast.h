/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/grammar_ast.h
 * \brief Loading and dumping grammars as JSON documents.
 *
 * Document schema: {"start": name, "rules": {name: node}} where node is one of
 *   {"t":"term","v":text}  {"t":"class","ranges":[[lo,hi]...],"excl":[scalar...]}
 *   {"t":"ref","name":n}   {"t":"seq","items":[node...]}  {"t":"choice","items":[node...]}
 *   {"t":"repeat","item":node,"min":m,"max":n}  {"t":"join","sep":node,"items":node}
 *   {"t":"empty"}
 * An optional "whitespace" key names the whitespace rule ("" disables it).
 */
#ifndef DSLGUIDE_GRAMMAR_AST_H_
#define DSLGUIDE_GRAMMAR_AST_H_

#include <string>
#include <string_view>

#include "dslguide/grammar.h"

namespace dslguide {

/*! \brief Parses a document. Throws GrammarError for malformed JSON, bad tags, a missing start or unresolved refs. */
Grammar LoadGrammarAst(std::string_view document);

/*! \brief Serializes the rules as written, in declaration order. */
std::string DumpGrammarAst(const Grammar& grammar, int indent = -1);

}  // namespace dslguide

#endif  // DSLGUIDE_GRAMMAR_AST_H_
