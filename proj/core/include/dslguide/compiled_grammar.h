/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/compiled_grammar.h
 * \brief Node arena shared by the flattener and the prefix engine, plus static analysis results.
 *
 * Every rule is lowered twice. The generation form keeps the rule as written, so choice branch
 * indices match declaration order. The parse form is left-factored: alternatives sharing a
 * leading item are merged, which keeps the number of speculative threads small.
 */
#ifndef DSLGUIDE_COMPILED_GRAMMAR_H_
#define DSLGUIDE_COMPILED_GRAMMAR_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dslguide/charset.h"
#include "dslguide/symbol.h"

namespace dslguide {

enum class NodeKind : std::uint8_t { kEmpty, kLiteral, kClass, kRef, kSeq, kChoice, kRepeat };

struct GrammarNode {
  NodeKind kind = NodeKind::kEmpty;
  std::u32string text;
  CharSet set;
  std::int32_t rule = -1;
  /*! \brief Sequence items, choice branches, or {item} / {item, separator} for repeat. */
  std::vector<std::int32_t> children;
  std::int64_t min_count = 0;
  std::int64_t max_count = 0;
  /*! \brief Rule whose body contains this node. */
  std::int32_t owner = -1;
};

struct RuleInfo {
  std::string name;
  std::int32_t gen_body = -1;
  std::int32_t parse_body = -1;
  /*! \brief Created by lowering a join over a rule reference; shares the referenced rule's name. */
  bool synthetic = false;
};

/*! \brief Per-branch facts for one generation-form choice. */
struct BranchFacts {
  std::string label;
  CharSet first;
  bool nullable = false;
  bool productive = false;
  std::int32_t min_height = 0;
  /*! \brief Rules referenced by the branch without passing through another rule. */
  std::vector<std::int32_t> refs;
};

inline constexpr std::int32_t kInfiniteHeight = std::numeric_limits<std::int32_t>::max() / 4;

class CompiledGrammar {
 public:
  CompiledGrammar(const std::vector<std::pair<std::string, Symbol>>& rules,
                  const std::string& start, const std::optional<std::string>& whitespace);

  const GrammarNode& node(std::int32_t id) const { return nodes_[id]; }
  std::size_t num_nodes() const { return nodes_.size(); }
  const RuleInfo& rule(std::int32_t id) const { return rules_[id]; }
  std::int32_t num_rules() const { return static_cast<std::int32_t>(rules_.size()); }
  /*! \brief Number of rules declared by the user; synthetic rules follow them. */
  std::int32_t num_declared_rules() const { return num_declared_; }
  std::optional<std::int32_t> FindRule(const std::string& name) const;
  std::int32_t start_rule() const { return start_; }
  /*! \brief Whitespace rule id or -1. */
  std::int32_t whitespace_rule() const { return whitespace_; }
  const std::optional<std::string>& whitespace_name() const { return whitespace_name_; }

  const std::vector<std::pair<std::string, Symbol>>& symbols() const { return symbols_; }

  bool nullable(std::int32_t node) const { return nullable_[node]; }
  bool productive(std::int32_t node) const { return min_height_[node] < kInfiniteHeight; }
  std::int32_t min_height(std::int32_t node) const { return min_height_[node]; }
  /*! \brief First set of a node. With `significant`, references to the whitespace rule contribute nothing. */
  const CharSet& first(std::int32_t node, bool significant = false) const {
    return significant ? significant_first_[node] : first_[node];
  }
  /*! \brief One application of the First-set rules to `node` using the stored sets. */
  CharSet RecomputeFirst(std::int32_t node, bool significant) const;
  /*! \brief Facts for each branch of a generation-form choice node. */
  const std::vector<BranchFacts>& branch_facts(std::int32_t choice_node) const;

  /*! \brief Left-recursive cycles; each lists rule names in derivation order. */
  const std::vector<std::vector<std::string>>& left_recursion_cycles() const { return cycles_; }
  /*!
   * \brief Index into left_recursion_cycles() of a cycle reachable from `rule` through left
   * positions, or -1 when none is.
   */
  std::int32_t left_cycle_of(std::int32_t rule) const { return left_cycle_of_[rule]; }
  /*! \brief Index of any left-recursive cycle among rules reachable from `rule`, or -1. */
  std::int32_t reachable_cycle_of(std::int32_t rule) const;

  /*! \brief Display label of a node: rule name, quoted literal preview, or class. */
  std::string Label(std::int32_t node) const;
  /*! \brief True for nodes of the generation form. */
  bool is_generation_node(std::int32_t node) const { return node < num_gen_nodes_; }

 private:
  std::int32_t AddNode(GrammarNode node);
  std::int32_t Lower(const Symbol& symbol, std::int32_t owner);
  std::int32_t LowerJoin(const Symbol& separator, const Symbol& items, std::int32_t owner);
  std::int32_t JoinedRule(std::int32_t rule, const Symbol& separator);

  struct AltItem {
    std::int32_t node = -1;
    std::u32string literal;
    /*! \brief `node` is already a parse-form node. */
    bool parsed = false;
  };
  using Alt = std::vector<AltItem>;
  std::int32_t Intern(GrammarNode node);
  std::int32_t Factor(std::int32_t gen_node);
  std::int32_t FactorAlts(std::vector<Alt> alts, std::int32_t owner);
  std::int32_t FactorSeq(const Alt& alt, std::int32_t owner);
  void CollectAlts(std::int32_t gen_node, std::vector<Alt>* alts);
  void NormalizeHead(Alt* alt);
  std::string HeadKey(const AltItem& item) const;
  std::string InternKey(const GrammarNode& node) const;

  void Analyze();
  void AnalyzeLeftRecursion();
  void ComputeBranchFacts();

  std::vector<GrammarNode> nodes_;
  std::vector<RuleInfo> rules_;
  std::vector<std::pair<std::string, Symbol>> symbols_;
  std::unordered_map<std::string, std::int32_t> rule_index_;
  std::unordered_map<std::string, std::int32_t> joined_rules_;
  std::unordered_map<std::string, std::int32_t> interned_;
  std::int32_t num_declared_ = 0;
  std::int32_t num_gen_nodes_ = 0;
  std::int32_t start_ = -1;
  std::int32_t whitespace_ = -1;
  std::optional<std::string> whitespace_name_;

  std::vector<bool> nullable_;
  std::vector<bool> significant_nullable_;
  std::vector<std::int32_t> min_height_;
  std::vector<CharSet> first_;
  std::vector<CharSet> significant_first_;
  std::unordered_map<std::int32_t, std::vector<BranchFacts>> branch_facts_;
  std::vector<std::vector<std::string>> cycles_;
  std::vector<std::int32_t> left_cycle_of_;
  std::vector<std::int32_t> cycle_member_;
  std::vector<std::vector<std::int32_t>> rule_refs_;
};

}  // namespace dslguide

#endif  // DSLGUIDE_COMPILED_GRAMMAR_H_
