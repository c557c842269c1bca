/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/grammars.h
 * \brief Built-in grammars: bracket pairs, JSON, a Mermaid flowchart subset and call expressions.
 */
#ifndef DSLGUIDE_GRAMMARS_H_
#define DSLGUIDE_GRAMMARS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dslguide/grammar.h"

namespace dslguide {

/*! \brief top -> pairs; pairs -> pair | pair pairs; pair -> ['(' pairs ')']. */
Grammar BracketsGrammar();

/*! \brief JSON text with start rule "json" and whitespace rule "ws". */
Grammar JsonGrammar();

struct MermaidOptions {
  std::int64_t min_lines = 10;
  std::int64_t max_lines = 20;
};

/*! \brief "flowchart TD|LR" followed by indented "a --> b" lines joined by newlines. */
Grammar MermaidGrammar(MermaidOptions options = {});

/*! \brief ident '(' [arg (", " arg)*] ')' where each arg is a JSON value. */
Grammar FunctionCallGrammar();

/*! \brief Names accepted by BuiltinGrammar, in a stable order. */
std::vector<std::string> BuiltinGrammarNames();

/*! \brief Built-in grammar by name, or nullopt for an unknown name. */
std::optional<Grammar> BuiltinGrammar(const std::string& name);

}  // namespace dslguide

#endif  // DSLGUIDE_GRAMMARS_H_
