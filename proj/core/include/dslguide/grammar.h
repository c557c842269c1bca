/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/grammar.h
 * \brief Grammar: named rules plus a start rule, validated and compiled on construction.
 */
#ifndef DSLGUIDE_GRAMMAR_H_
#define DSLGUIDE_GRAMMAR_H_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dslguide/symbol.h"

namespace dslguide {

class CompiledGrammar;

class Grammar {
 public:
  const std::string& start() const;
  /*! \brief Rule names in declaration order. */
  std::vector<std::string> RuleNames() const;
  bool HasRule(const std::string& name) const;
  /*! \brief Body of a rule as written. Throws GrammarError for unknown names. */
  const Symbol& RuleBody(const std::string& name) const;
  /*! \brief Rule whose characters are skipped by significant-only queries, if any. */
  const std::optional<std::string>& whitespace_rule() const;

  const CompiledGrammar& compiled() const { return *compiled_; }
  std::shared_ptr<const CompiledGrammar> compiled_ptr() const { return compiled_; }

  /*! \brief One line per rule: `name ::= body`. */
  std::string ToString() const;

 private:
  friend class GrammarBuilder;
  explicit Grammar(std::shared_ptr<const CompiledGrammar> compiled)
      : compiled_(std::move(compiled)) {}

  std::shared_ptr<const CompiledGrammar> compiled_;
};

class GrammarBuilder {
 public:
  /*! \brief Adds a rule. Throws GrammarError on a duplicate name. */
  GrammarBuilder& Rule(std::string name, Symbol body);
  /*!
   * \brief Names the whitespace rule. When unset, a rule called "ws" is used if present.
   * An empty name disables whitespace skipping.
   */
  GrammarBuilder& Whitespace(std::string name);
  bool HasRule(const std::string& name) const;

  /*! \brief Validates references and compiles. Throws GrammarError if `start` or a reference is unknown. */
  Grammar Build(const std::string& start) const;

 private:
  std::vector<std::pair<std::string, Symbol>> rules_;
  std::optional<std::string> whitespace_;
};

}  // namespace dslguide

#endif  // DSLGUIDE_GRAMMAR_H_
