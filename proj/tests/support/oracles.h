/*!
 *  Copyright (c) 2026 by Contributors
 * \file oracles.h
 * \brief Independent checkers used by the tests. None of them touch the engine.
 */
#ifndef DSLGUIDE_TESTS_ORACLES_H_
#define DSLGUIDE_TESTS_ORACLES_H_

#include <cstddef>
#include <string>
#include <vector>

namespace dslguide {
namespace oracle {

struct Classification {
  bool prefix = false;
  bool member = false;
};

/*! \brief Running depth over '(' = +1, ')' = -1: prefix while never negative, member at zero. */
Classification BracketRunningSum(const std::string& text);
/*! \brief Push on '(', pop on ')': prefix if every pop finds an opener, member if the stack empties. */
Classification BracketStack(const std::string& text);
/*! \brief Every string over {'(', ')'} with length 1..max_length, shortest first. */
std::vector<std::string> AllBracketStrings(std::size_t max_length);

/*! \brief Header "flowchart TD|LR", then min..max lines "    d --> d" with d in 1-9. */
bool MermaidShape(const std::string& text, std::size_t min_lines, std::size_t max_lines);

/*!
 * \brief Identifier, '(' and ')' framing, and arguments that parse as a JSON array once wrapped
 * in brackets (checked with the harness reference parser, which accepts lone surrogate escapes). Necessary conditions for the function-call grammar.
 */
bool FunctionCallShape(const std::string& text);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/*! \brief Ordinary least squares of y on x. */
LinearFit FitLine(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
}  // namespace dslguide

#endif  // DSLGUIDE_TESTS_ORACLES_H_
