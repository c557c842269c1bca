/*!
 *  Copyright (c) 2026 by Contributors
 * \file analysis.cc
 * \brief Nullability, minimal derivation height, First sets and left-recursion detection.
 */
#include <algorithm>
#include <deque>
#include <functional>

#include "dslguide/analysis.h"
#include "dslguide/compiled_grammar.h"
#include "dslguide/error.h"
#include "dslguide/grammar.h"

namespace dslguide {

CharSet CompiledGrammar::RecomputeFirst(std::int32_t id, bool significant) const {
  const GrammarNode& node = nodes_[id];
  const auto& firsts = significant ? significant_first_ : first_;
  const auto& nullables = significant ? significant_nullable_ : nullable_;
  CharSet out;
  switch (node.kind) {
    case NodeKind::kEmpty:
      break;
    case NodeKind::kLiteral:
      out.Add(node.text[0]);
      break;
    case NodeKind::kClass:
      out = node.set;
      break;
    case NodeKind::kRef:
      if (!(significant && node.rule == whitespace_)) out = firsts[rules_[node.rule].gen_body];
      break;
    case NodeKind::kSeq:
      for (auto child : node.children) {
        out.Merge(firsts[child]);
        if (!nullables[child]) break;
      }
      break;
    case NodeKind::kChoice:
      for (auto child : node.children) out.Merge(firsts[child]);
      break;
    case NodeKind::kRepeat:
      if (node.max_count == 0) break;
      out = firsts[node.children[0]];
      if (node.max_count >= 2 && nullables[node.children[0]] && node.children.size() > 1) {
        out.Merge(firsts[node.children[1]]);
      }
      break;
  }
  return out;
}

void CompiledGrammar::Analyze() {
  const std::size_t n = nodes_.size();
  auto nullable_pass = [&](std::vector<bool>* values, bool significant) {
    values->assign(n, false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t id = 0; id < n; ++id) {
        if ((*values)[id]) continue;
        const GrammarNode& node = nodes_[id];
        bool v = false;
        switch (node.kind) {
          case NodeKind::kEmpty:
            v = true;
            break;
          case NodeKind::kLiteral:
          case NodeKind::kClass:
            v = false;
            break;
          case NodeKind::kRef:
            v = (significant && node.rule == whitespace_) || (*values)[rules_[node.rule].gen_body];
            break;
          case NodeKind::kSeq:
            v = std::all_of(node.children.begin(), node.children.end(),
                            [&](std::int32_t c) { return (*values)[c]; });
            break;
          case NodeKind::kChoice:
            v = std::any_of(node.children.begin(), node.children.end(),
                            [&](std::int32_t c) { return (*values)[c]; });
            break;
          case NodeKind::kRepeat:
            v = node.min_count == 0 ||
                ((*values)[node.children[0]] &&
                 (node.min_count < 2 || node.children.size() < 2 || (*values)[node.children[1]]));
            break;
        }
        if (v) {
          (*values)[id] = true;
          changed = true;
        }
      }
    }
  };
  nullable_pass(&nullable_, false);
  nullable_pass(&significant_nullable_, true);

  min_height_.assign(n, kInfiniteHeight);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t id = 0; id < n; ++id) {
      const GrammarNode& node = nodes_[id];
      std::int32_t h = kInfiniteHeight;
      switch (node.kind) {
        case NodeKind::kEmpty:
        case NodeKind::kLiteral:
        case NodeKind::kClass:
          h = 0;
          break;
        case NodeKind::kRef: {
          std::int32_t body = min_height_[rules_[node.rule].gen_body];
          h = body < kInfiniteHeight ? body + 1 : kInfiniteHeight;
          break;
        }
        case NodeKind::kSeq:
          h = 0;
          for (auto c : node.children) h = std::max(h, min_height_[c]);
          break;
        case NodeKind::kChoice:
          for (auto c : node.children) h = std::min(h, min_height_[c]);
          break;
        case NodeKind::kRepeat:
          if (node.min_count == 0) {
            h = 0;
          } else {
            h = min_height_[node.children[0]];
            if (node.min_count >= 2 && node.children.size() > 1) {
              h = std::max(h, min_height_[node.children[1]]);
            }
          }
          break;
      }
      if (h < min_height_[id]) {
        min_height_[id] = h;
        changed = true;
      }
    }
  }

  first_.assign(n, CharSet());
  significant_first_.assign(n, CharSet());
  for (bool significant : {false, true}) {
    auto& firsts = significant ? significant_first_ : first_;
    changed = true;
    while (changed) {
      changed = false;
      for (std::size_t id = 0; id < n; ++id) {
        CharSet next = RecomputeFirst(static_cast<std::int32_t>(id), significant);
        if (!(next == firsts[id])) {
          firsts[id] = std::move(next);
          changed = true;
        }
      }
    }
  }
}

void CompiledGrammar::AnalyzeLeftRecursion() {
  const auto num_rules = static_cast<std::int32_t>(rules_.size());
  std::vector<std::vector<std::pair<std::int32_t, bool>>> edges(num_rules);
  std::function<void(std::int32_t, bool, std::vector<std::pair<std::int32_t, bool>>*)> walk =
      [&](std::int32_t id, bool tail, std::vector<std::pair<std::int32_t, bool>>* out) {
        const GrammarNode& node = nodes_[id];
        switch (node.kind) {
          case NodeKind::kRef:
            out->emplace_back(node.rule, !tail);
            break;
          case NodeKind::kSeq:
            for (std::size_t i = 0; i < node.children.size(); ++i) {
              walk(node.children[i], tail && i + 1 == node.children.size(), out);
              if (!nullable_[node.children[i]]) break;
            }
            break;
          case NodeKind::kChoice:
            for (auto c : node.children) walk(c, tail, out);
            break;
          case NodeKind::kRepeat:
            walk(node.children[0], tail && node.max_count <= 1, out);
            if (node.max_count >= 2 && node.children.size() > 1 && nullable_[node.children[0]]) {
              walk(node.children[1], false, out);
            }
            break;
          default:
            break;
        }
      };
  for (std::int32_t r = 0; r < num_rules; ++r) walk(rules_[r].parse_body, true, &edges[r]);

  // Tarjan's strongly connected components over left-corner edges.
  std::vector<std::int32_t> index(num_rules, -1), low(num_rules, 0), component(num_rules, -1);
  std::vector<bool> on_stack(num_rules, false);
  std::vector<std::int32_t> stack;
  std::int32_t counter = 0, num_components = 0;
  std::function<void(std::int32_t)> connect = [&](std::int32_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& [w, growth] : edges[v]) {
      if (index[w] < 0) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::int32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component[w] = num_components;
      } while (w != v);
      ++num_components;
    }
  };
  for (std::int32_t r = 0; r < num_rules; ++r) {
    if (index[r] < 0) connect(r);
  }

  cycle_member_.assign(num_rules, -1);
  std::vector<bool> reported(num_components, false);
  for (std::int32_t u = 0; u < num_rules; ++u) {
    for (const auto& [v, growth] : edges[u]) {
      if (!growth || component[v] != component[u] || reported[component[u]]) continue;
      reported[component[u]] = true;
      // Shortest path v -> u inside the component closes the cycle through the growth edge.
      std::vector<std::int32_t> parent(num_rules, -2);
      std::deque<std::int32_t> queue{v};
      parent[v] = -1;
      while (!queue.empty() && parent[u] == -2) {
        std::int32_t x = queue.front();
        queue.pop_front();
        for (const auto& [y, g] : edges[x]) {
          if (component[y] == component[u] && parent[y] == -2) {
            parent[y] = x;
            queue.push_back(y);
          }
        }
      }
      std::vector<std::int32_t> path;
      if (u != v) {
        for (std::int32_t x = u; x != v; x = parent[x]) path.push_back(x);
        path.push_back(v);
        std::reverse(path.begin(), path.end());
        path.pop_back();
      }
      std::vector<std::string> names{rules_[u].name};
      for (auto x : path) names.push_back(rules_[x].name);
      auto cycle_index = static_cast<std::int32_t>(cycles_.size());
      cycles_.push_back(std::move(names));
      for (std::int32_t x = 0; x < num_rules; ++x) {
        if (component[x] == component[u]) cycle_member_[x] = cycle_index;
      }
    }
  }

  left_cycle_of_.assign(num_rules, -1);
  for (std::int32_t r = 0; r < num_rules; ++r) {
    std::vector<bool> seen(num_rules, false);
    std::deque<std::int32_t> queue{r};
    seen[r] = true;
    while (!queue.empty()) {
      std::int32_t x = queue.front();
      queue.pop_front();
      if (cycle_member_[x] >= 0) {
        left_cycle_of_[r] = cycle_member_[x];
        break;
      }
      for (const auto& [y, g] : edges[x]) {
        if (!seen[y]) {
          seen[y] = true;
          queue.push_back(y);
        }
      }
    }
  }

  rule_refs_.assign(num_rules, {});
  std::function<void(std::int32_t, std::vector<std::int32_t>*)> collect =
      [&](std::int32_t id, std::vector<std::int32_t>* out) {
        const GrammarNode& node = nodes_[id];
        if (node.kind == NodeKind::kRef &&
            std::find(out->begin(), out->end(), node.rule) == out->end()) {
          out->push_back(node.rule);
        }
        for (auto c : node.children) collect(c, out);
      };
  for (std::int32_t r = 0; r < num_rules; ++r) {
    collect(rules_[r].gen_body, &rule_refs_[r]);
    collect(rules_[r].parse_body, &rule_refs_[r]);
  }
}

std::int32_t CompiledGrammar::reachable_cycle_of(std::int32_t rule) const {
  std::vector<bool> seen(rules_.size(), false);
  std::deque<std::int32_t> queue{rule};
  seen[rule] = true;
  while (!queue.empty()) {
    std::int32_t x = queue.front();
    queue.pop_front();
    if (cycle_member_[x] >= 0) return cycle_member_[x];
    for (auto y : rule_refs_[x]) {
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  return -1;
}

void CompiledGrammar::ComputeBranchFacts() {
  std::function<void(std::int32_t, std::vector<std::int32_t>*)> collect =
      [&](std::int32_t id, std::vector<std::int32_t>* out) {
        const GrammarNode& node = nodes_[id];
        if (node.kind == NodeKind::kRef) {
          if (std::find(out->begin(), out->end(), node.rule) == out->end()) {
            out->push_back(node.rule);
          }
          return;
        }
        for (auto c : node.children) collect(c, out);
      };
  for (std::int32_t id = 0; id < num_gen_nodes_; ++id) {
    const GrammarNode& node = nodes_[id];
    if (node.kind != NodeKind::kChoice) continue;
    std::vector<BranchFacts> facts;
    for (auto child : node.children) {
      BranchFacts f;
      f.label = Label(child);
      f.first = first_[child];
      f.nullable = nullable_[child];
      f.min_height = min_height_[child];
      f.productive = f.min_height < kInfiniteHeight;
      collect(child, &f.refs);
      facts.push_back(std::move(f));
    }
    branch_facts_.emplace(id, std::move(facts));
  }
}

const std::vector<BranchFacts>& CompiledGrammar::branch_facts(std::int32_t choice_node) const {
  auto it = branch_facts_.find(choice_node);
  DSLGUIDE_ICHECK(it != branch_facts_.end(), "node " << choice_node << " is not a choice");
  return it->second;
}

FirstSet FirstSetOf(const Grammar& grammar, const std::string& name, bool significant) {
  const CompiledGrammar& g = grammar.compiled();
  auto rule = g.FindRule(name);
  if (!rule.has_value() || *rule >= g.num_declared_rules()) {
    throw GrammarError("unknown rule '" + name + "'");
  }
  std::int32_t cycle = g.left_cycle_of(*rule);
  if (cycle >= 0) throw LeftRecursionError(g.left_recursion_cycles()[cycle]);
  std::int32_t body = g.rule(*rule).gen_body;
  FirstSet out;
  out.chars = g.first(body, significant);
  out.nullable = g.nullable(body);
  return out;
}

void CheckLeftRecursion(const Grammar& grammar) {
  const CompiledGrammar& g = grammar.compiled();
  std::int32_t cycle = g.reachable_cycle_of(g.start_rule());
  if (cycle >= 0) throw LeftRecursionError(g.left_recursion_cycles()[cycle]);
}

}  // namespace dslguide
