/*!
 *  Copyright (c) 2026 by Contributors
 * \file grammar.cc
 */
#include "dslguide/grammar.h"

#include <algorithm>

#include "dslguide/compiled_grammar.h"
#include "dslguide/error.h"

namespace dslguide {

const std::string& Grammar::start() const {
  return compiled_->rule(compiled_->start_rule()).name;
}

std::vector<std::string> Grammar::RuleNames() const {
  std::vector<std::string> names;
  for (const auto& [name, body] : compiled_->symbols()) names.push_back(name);
  return names;
}

bool Grammar::HasRule(const std::string& name) const {
  auto id = compiled_->FindRule(name);
  return id.has_value() && *id < compiled_->num_declared_rules();
}

const Symbol& Grammar::RuleBody(const std::string& name) const {
  for (const auto& [rule_name, body] : compiled_->symbols()) {
    if (rule_name == name) return body;
  }
  throw GrammarError("unknown rule '" + name + "'");
}

const std::optional<std::string>& Grammar::whitespace_rule() const {
  return compiled_->whitespace_name();
}

std::string Grammar::ToString() const {
  std::string out;
  for (const auto& [name, body] : compiled_->symbols()) {
    out += name + " ::= " + body.ToString() + "\n";
  }
  return out;
}

GrammarBuilder& GrammarBuilder::Rule(std::string name, Symbol body) {
  if (name.empty()) throw GrammarError("rule name must be nonempty");
  if (HasRule(name)) throw GrammarError("duplicate rule '" + name + "'");
  rules_.emplace_back(std::move(name), std::move(body));
  return *this;
}

GrammarBuilder& GrammarBuilder::Whitespace(std::string name) {
  whitespace_ = std::move(name);
  return *this;
}

bool GrammarBuilder::HasRule(const std::string& name) const {
  return std::any_of(rules_.begin(), rules_.end(),
                     [&](const auto& rule) { return rule.first == name; });
}

Grammar GrammarBuilder::Build(const std::string& start) const {
  if (start.empty()) throw GrammarError("grammar has no start rule");
  if (!HasRule(start)) throw GrammarError("start rule '" + start + "' is not defined");
  std::optional<std::string> whitespace = whitespace_;
  if (!whitespace.has_value() && HasRule("ws")) whitespace = "ws";
  if (whitespace.has_value() && whitespace->empty()) whitespace.reset();
  if (whitespace.has_value() && !HasRule(*whitespace)) {
    throw GrammarError("whitespace rule '" + *whitespace + "' is not defined");
  }
  return Grammar(std::make_shared<const CompiledGrammar>(rules_, start, whitespace));
}

}  // namespace dslguide
