/*!
 *  Copyright (c) 2026 by Contributors
 * \file error.cc
 */
#include "dslguide/error.h"

namespace dslguide {

LeftRecursionError::LeftRecursionError(std::vector<std::string> cycle)
    : GrammarError([&] {
        std::string msg = "left recursion: ";
        for (const auto& name : cycle) msg += name + " -> ";
        msg += cycle.empty() ? std::string("?") : cycle.front();
        return msg;
      }()),
      cycle_(std::move(cycle)) {}

BudgetExhaustedError::BudgetExhaustedError(std::string prefix, std::size_t budget)
    : GenerationError("character budget of " + std::to_string(budget) +
                      " exhausted before the derivation completed"),
      prefix_(std::move(prefix)) {}

}  // namespace dslguide
