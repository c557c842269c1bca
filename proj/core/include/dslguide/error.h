/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/error.h
 * \brief Exception hierarchy and the internal invariant check.
 */
#ifndef DSLGUIDE_ERROR_H_
#define DSLGUIDE_ERROR_H_

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dslguide {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*! \brief Ill-formed symbol, rule, or grammar document. */
class GrammarError : public Error {
 public:
  using Error::Error;
};

/*!
 * \brief A nonterminal can derive a form that starts with itself and grows the derivation stack.
 * The cycle lists the nonterminal names in derivation order, e.g. {"A"} for A -> A 'a'.
 */
class LeftRecursionError : public GrammarError {
 public:
  explicit LeftRecursionError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

/*! \brief A chooser answered with a branch index or scalar that the request did not offer. */
class ChoiceError : public Error {
 public:
  using Error::Error;
};

/*! \brief Misuse of a session, e.g. feeding a session that already rejected input. */
class SessionError : public Error {
 public:
  using Error::Error;
};

/*! \brief The number of speculative derivation threads exceeded the configured cap. */
class ThreadLimitError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/*! \brief Generation ran out of character budget; `prefix()` is the valid prefix produced so far. */
class BudgetExhaustedError : public GenerationError {
 public:
  BudgetExhaustedError(std::string prefix, std::size_t budget);
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

class VocabError : public Error {
 public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void CheckFailed(const char* cond, const char* file, int line,
                                     const std::string& msg) {
  std::fprintf(stderr, "%s:%d: internal invariant violated: %s %s\n", file, line, cond,
               msg.c_str());
  std::abort();
}

}  // namespace detail
}  // namespace dslguide

/*! Aborts on a broken internal invariant. Never used for input validation. */
#define DSLGUIDE_ICHECK(cond, msg)                                                   \
  do {                                                                               \
    if (!(cond)) {                                                                   \
      std::ostringstream dslguide_icheck_os;                                         \
      dslguide_icheck_os << msg;                                                     \
      ::dslguide::detail::CheckFailed(#cond, __FILE__, __LINE__,                     \
                                      dslguide_icheck_os.str());                     \
    }                                                                                \
  } while (0)

#endif  // DSLGUIDE_ERROR_H_
