/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/analysis.h
 * \brief First sets and left-recursion checks over a built grammar.
 */
#ifndef DSLGUIDE_ANALYSIS_H_
#define DSLGUIDE_ANALYSIS_H_

#include <string>

#include "dslguide/charset.h"

namespace dslguide {

class Grammar;

struct FirstSet {
  CharSet chars;
  /*! \brief The rule derives the empty string. */
  bool nullable = false;
};

/*!
 * \brief First set of a rule. With `significant`, the whitespace rule is treated as transparent.
 * Throws GrammarError for unknown names and LeftRecursionError when the rule reaches a
 * left-recursive cycle through left positions.
 */
FirstSet FirstSetOf(const Grammar& grammar, const std::string& name, bool significant = false);

/*! \brief Throws LeftRecursionError if any rule reachable from the start rule is left-recursive. */
void CheckLeftRecursion(const Grammar& grammar);

}  // namespace dslguide

#endif  // DSLGUIDE_ANALYSIS_H_
