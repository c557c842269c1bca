/*!
 *  Copyright (c) 2026 by Contributors
 * \file compiled_grammar.cc
 * \brief Lowering of symbols into the node arena and left-factoring of the parse form.
 */
#include "dslguide/compiled_grammar.h"

#include <algorithm>
#include <functional>

#include "dslguide/error.h"
#include "dslguide/unicode.h"

namespace dslguide {

namespace {

void CheckReferences(const Symbol& symbol, const std::string& rule,
                     const std::unordered_map<std::string, std::int32_t>& index) {
  if (symbol.kind() == SymbolKind::kRef && index.count(symbol.name()) == 0) {
    throw GrammarError("undefined rule '" + symbol.name() + "' referenced from '" + rule + "'");
  }
  for (const auto& child : symbol.children()) CheckReferences(child, rule, index);
}

std::string Preview(const std::u32string& text) {
  constexpr std::size_t kMaxPreview = 16;
  std::string out = "\"";
  for (std::size_t i = 0; i < text.size() && i < kMaxPreview; ++i) {
    char32_t c = text[i];
    if (c == '\n') {
      out += "\\n";
    } else if (c == '"' || c == '\\') {
      out += '\\';
      out += static_cast<char>(c);
    } else if (c < 0x20) {
      out += DescribeScalar(c);
    } else {
      AppendUtf8(&out, c);
    }
  }
  if (text.size() > kMaxPreview) out += "...";
  return out + "\"";
}

}  // namespace

CompiledGrammar::CompiledGrammar(const std::vector<std::pair<std::string, Symbol>>& rules,
                                 const std::string& start,
                                 const std::optional<std::string>& whitespace)
    : symbols_(rules) {
  for (const auto& [name, body] : rules) {
    if (rule_index_.count(name)) throw GrammarError("duplicate rule '" + name + "'");
    rule_index_[name] = static_cast<std::int32_t>(rules_.size());
    rules_.push_back(RuleInfo{name, -1, -1, false});
  }
  num_declared_ = static_cast<std::int32_t>(rules_.size());
  for (const auto& [name, body] : rules) CheckReferences(body, name, rule_index_);
  auto start_it = rule_index_.find(start);
  if (start_it == rule_index_.end()) throw GrammarError("start rule '" + start + "' is not defined");
  start_ = start_it->second;
  if (whitespace.has_value()) {
    auto ws_it = rule_index_.find(*whitespace);
    if (ws_it == rule_index_.end()) {
      throw GrammarError("whitespace rule '" + *whitespace + "' is not defined");
    }
    whitespace_ = ws_it->second;
    whitespace_name_ = whitespace;
  }

  for (std::int32_t r = 0; r < num_declared_; ++r) {
    std::int32_t body = Lower(symbols_[r].second, r);
    rules_[r].gen_body = body;
  }
  num_gen_nodes_ = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t r = 0; r < static_cast<std::int32_t>(rules_.size()); ++r) {
    std::int32_t body = Factor(rules_[r].gen_body);
    rules_[r].parse_body = body;
  }
  Analyze();
  AnalyzeLeftRecursion();
  ComputeBranchFacts();
}

std::optional<std::int32_t> CompiledGrammar::FindRule(const std::string& name) const {
  auto it = rule_index_.find(name);
  if (it == rule_index_.end()) return std::nullopt;
  return it->second;
}

std::int32_t CompiledGrammar::AddNode(GrammarNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t CompiledGrammar::Lower(const Symbol& symbol, std::int32_t owner) {
  GrammarNode node;
  node.owner = owner;
  switch (symbol.kind()) {
    case SymbolKind::kEmpty:
      node.kind = NodeKind::kEmpty;
      break;
    case SymbolKind::kTerminal:
      node.kind = NodeKind::kLiteral;
      node.text = symbol.text();
      break;
    case SymbolKind::kCharClass:
      node.kind = NodeKind::kClass;
      node.set = symbol.charset();
      break;
    case SymbolKind::kRef:
      node.kind = NodeKind::kRef;
      node.rule = rule_index_.at(symbol.name());
      break;
    case SymbolKind::kSequence:
    case SymbolKind::kChoice:
      node.kind = symbol.kind() == SymbolKind::kSequence ? NodeKind::kSeq : NodeKind::kChoice;
      for (const auto& child : symbol.children()) node.children.push_back(Lower(child, owner));
      break;
    case SymbolKind::kRepeat:
      node.kind = NodeKind::kRepeat;
      node.children.push_back(Lower(symbol.children()[0], owner));
      node.min_count = symbol.min_count();
      node.max_count = symbol.max_count();
      break;
    case SymbolKind::kJoin:
      return LowerJoin(symbol.children()[0], symbol.children()[1], owner);
  }
  return AddNode(std::move(node));
}

std::int32_t CompiledGrammar::LowerJoin(const Symbol& separator, const Symbol& items,
                                        std::int32_t owner) {
  GrammarNode node;
  node.owner = owner;
  switch (items.kind()) {
    case SymbolKind::kEmpty:
      throw GrammarError("join needs at least one item");
    case SymbolKind::kSequence:
      node.kind = NodeKind::kSeq;
      for (std::size_t i = 0; i < items.children().size(); ++i) {
        if (i > 0) node.children.push_back(Lower(separator, owner));
        node.children.push_back(Lower(items.children()[i], owner));
      }
      return AddNode(std::move(node));
    case SymbolKind::kRepeat: {
      node.kind = NodeKind::kRepeat;
      std::int32_t item = Lower(items.children()[0], owner);
      std::int32_t sep = Lower(separator, owner);
      node.children = {item, sep};
      node.min_count = items.min_count();
      node.max_count = items.max_count();
      return AddNode(std::move(node));
    }
    case SymbolKind::kChoice:
      node.kind = NodeKind::kChoice;
      for (const auto& branch : items.children()) {
        node.children.push_back(LowerJoin(separator, branch, owner));
      }
      return AddNode(std::move(node));
    case SymbolKind::kRef:
      node.kind = NodeKind::kRef;
      node.rule = JoinedRule(rule_index_.at(items.name()), separator);
      return AddNode(std::move(node));
    default:
      return Lower(items, owner);
  }
}

std::int32_t CompiledGrammar::JoinedRule(std::int32_t rule, const Symbol& separator) {
  std::string key = std::to_string(rule) + '\x1f' + separator.ToString();
  auto it = joined_rules_.find(key);
  if (it != joined_rules_.end()) return it->second;
  auto id = static_cast<std::int32_t>(rules_.size());
  rules_.push_back(RuleInfo{rules_[rule].name, -1, -1, true});
  joined_rules_[key] = id;
  std::int32_t body = LowerJoin(separator, symbols_[rule].second, id);
  rules_[id].gen_body = body;
  return id;
}

std::string CompiledGrammar::InternKey(const GrammarNode& node) const {
  std::string key;
  key += static_cast<char>('0' + static_cast<int>(node.kind));
  key += '|' + std::to_string(node.owner) + '|' + std::to_string(node.rule) + '|' +
         std::to_string(node.min_count) + '|' + std::to_string(node.max_count) + '|';
  key += EncodeUtf8(node.text) + '|';
  for (const auto& r : node.set.ranges()) {
    key += std::to_string(r.lo) + '-' + std::to_string(r.hi) + ',';
  }
  key += '|';
  for (auto child : node.children) key += std::to_string(child) + ',';
  return key;
}

std::int32_t CompiledGrammar::Intern(GrammarNode node) {
  std::string key = InternKey(node);
  auto it = interned_.find(key);
  if (it != interned_.end()) return it->second;
  std::int32_t id = AddNode(std::move(node));
  interned_.emplace(std::move(key), id);
  return id;
}

std::int32_t CompiledGrammar::Factor(std::int32_t gen_node) {
  GrammarNode node = nodes_[gen_node];
  switch (node.kind) {
    case NodeKind::kEmpty:
    case NodeKind::kLiteral:
    case NodeKind::kClass:
    case NodeKind::kRef:
      return Intern(std::move(node));
    case NodeKind::kSeq: {
      Alt alt;
      for (auto child : node.children) alt.push_back(AltItem{child, {}, false});
      return FactorSeq(alt, node.owner);
    }
    case NodeKind::kChoice: {
      std::vector<Alt> alts;
      CollectAlts(gen_node, &alts);
      return FactorAlts(std::move(alts), node.owner);
    }
    case NodeKind::kRepeat: {
      if (node.max_count == 0) {
        GrammarNode empty;
        empty.owner = node.owner;
        return Intern(std::move(empty));
      }
      for (auto& child : node.children) child = Factor(child);
      return Intern(std::move(node));
    }
  }
  return -1;
}

void CompiledGrammar::CollectAlts(std::int32_t gen_node, std::vector<Alt>* alts) {
  const GrammarNode& node = nodes_[gen_node];
  if (node.kind == NodeKind::kChoice) {
    std::vector<std::int32_t> children = node.children;
    for (auto child : children) CollectAlts(child, alts);
    return;
  }
  alts->push_back(Alt{AltItem{gen_node, {}, false}});
}

void CompiledGrammar::NormalizeHead(Alt* alt) {
  while (!alt->empty()) {
    AltItem& head = alt->front();
    if (head.parsed || head.node < 0) break;
    const GrammarNode& node = nodes_[head.node];
    if (node.kind == NodeKind::kSeq) {
      std::vector<AltItem> spliced;
      for (auto child : node.children) spliced.push_back(AltItem{child, {}, false});
      alt->erase(alt->begin());
      alt->insert(alt->begin(), spliced.begin(), spliced.end());
    } else if (node.kind == NodeKind::kEmpty) {
      alt->erase(alt->begin());
    } else if (node.kind == NodeKind::kLiteral) {
      head = AltItem{-1, node.text, false};
      break;
    } else {
      break;
    }
  }
  if (!alt->empty() && alt->front().node < 0 && !alt->front().parsed &&
      alt->front().literal.size() > 1) {
    std::u32string rest = alt->front().literal.substr(1);
    alt->front().literal.resize(1);
    alt->insert(alt->begin() + 1, AltItem{-1, std::move(rest), false});
  }
}

std::string CompiledGrammar::HeadKey(const AltItem& item) const {
  if (item.parsed) return "P" + std::to_string(item.node);
  if (item.node < 0) return "L" + EncodeUtf8(item.literal);
  const GrammarNode& node = nodes_[item.node];
  switch (node.kind) {
    case NodeKind::kRef:
      return "R" + std::to_string(node.rule);
    case NodeKind::kClass: {
      std::string key = "C";
      for (const auto& r : node.set.ranges()) {
        key += std::to_string(r.lo) + '-' + std::to_string(r.hi) + ',';
      }
      return key;
    }
    default:
      return "N" + std::to_string(item.node);
  }
}

std::int32_t CompiledGrammar::FactorAlts(std::vector<Alt> alts, std::int32_t owner) {
  std::vector<std::pair<std::string, std::vector<Alt>>> groups;
  for (auto& alt : alts) {
    NormalizeHead(&alt);
    std::string key = alt.empty() ? std::string() : HeadKey(alt.front());
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& group) { return group.first == key; });
    if (it == groups.end()) {
      groups.emplace_back(key, std::vector<Alt>{});
      it = groups.end() - 1;
    }
    it->second.push_back(std::move(alt));
  }
  std::vector<std::int32_t> branches;
  for (auto& [key, members] : groups) {
    std::int32_t branch;
    if (key.empty()) {
      GrammarNode empty;
      empty.owner = owner;
      branch = Intern(std::move(empty));
    } else if (members.size() == 1) {
      branch = FactorSeq(members[0], owner);
    } else {
      AltItem head = members[0].front();
      std::vector<Alt> tails;
      for (auto& member : members) tails.emplace_back(member.begin() + 1, member.end());
      std::int32_t tail = FactorAlts(std::move(tails), owner);
      branch = FactorSeq(Alt{head, AltItem{tail, {}, true}}, owner);
    }
    if (std::find(branches.begin(), branches.end(), branch) == branches.end()) {
      branches.push_back(branch);
    }
  }
  if (branches.size() == 1) return branches[0];
  GrammarNode choice;
  choice.kind = NodeKind::kChoice;
  choice.owner = owner;
  choice.children = std::move(branches);
  return Intern(std::move(choice));
}

std::int32_t CompiledGrammar::FactorSeq(const Alt& alt, std::int32_t owner) {
  std::vector<std::int32_t> parsed;
  std::function<void(const AltItem&)> add = [&](const AltItem& item) {
    std::int32_t id;
    if (item.parsed) {
      id = item.node;
    } else if (item.node < 0) {
      GrammarNode literal;
      literal.kind = NodeKind::kLiteral;
      literal.text = item.literal;
      literal.owner = owner;
      id = Intern(std::move(literal));
    } else {
      const GrammarNode& node = nodes_[item.node];
      if (node.kind == NodeKind::kSeq) {
        std::vector<std::int32_t> children = node.children;
        for (auto child : children) add(AltItem{child, {}, false});
        return;
      }
      id = Factor(item.node);
    }
    const GrammarNode& result = nodes_[id];
    if (result.kind == NodeKind::kEmpty) return;
    if (result.kind == NodeKind::kSeq) {
      std::vector<std::int32_t> children = result.children;
      parsed.insert(parsed.end(), children.begin(), children.end());
      return;
    }
    parsed.push_back(id);
  };
  for (const auto& item : alt) add(item);

  std::vector<std::int32_t> merged;
  for (auto id : parsed) {
    if (!merged.empty() && nodes_[id].kind == NodeKind::kLiteral &&
        nodes_[merged.back()].kind == NodeKind::kLiteral) {
      GrammarNode literal;
      literal.kind = NodeKind::kLiteral;
      literal.text = nodes_[merged.back()].text + nodes_[id].text;
      literal.owner = owner;
      merged.back() = Intern(std::move(literal));
    } else {
      merged.push_back(id);
    }
  }
  if (merged.empty()) {
    GrammarNode empty;
    empty.owner = owner;
    return Intern(std::move(empty));
  }
  if (merged.size() == 1) return merged[0];
  GrammarNode seq;
  seq.kind = NodeKind::kSeq;
  seq.owner = owner;
  seq.children = std::move(merged);
  return Intern(std::move(seq));
}

std::string CompiledGrammar::Label(std::int32_t id) const {
  const GrammarNode& node = nodes_[id];
  switch (node.kind) {
    case NodeKind::kEmpty:
      return "\"\"";
    case NodeKind::kLiteral:
      return Preview(node.text);
    case NodeKind::kClass: {
      std::string text = node.set.ToString();
      return text.size() > 32 ? text.substr(0, 29) + "..." : text;
    }
    case NodeKind::kRef:
      return rules_[node.rule].name;
    case NodeKind::kSeq: {
      std::string out;
      for (std::size_t i = 0; i < node.children.size() && i < 3; ++i) {
        if (i) out += " ";
        out += Label(node.children[i]);
      }
      if (node.children.size() > 3) out += " ...";
      return out;
    }
    case NodeKind::kChoice:
      return "(" + std::to_string(node.children.size()) + " alternatives)";
    case NodeKind::kRepeat: {
      std::string out = Label(node.children[0]) + "{" + std::to_string(node.min_count);
      if (node.max_count != node.min_count) out += "," + std::to_string(node.max_count);
      return out + "}";
    }
  }
  return "?";
}

}  // namespace dslguide
