/*!
 *  Copyright (c) 2026 by Contributors
 * \file symbol.cc
 */
#include "dslguide/symbol.h"

#include <algorithm>

#include "dslguide/error.h"
#include "dslguide/unicode.h"

namespace dslguide {

namespace {

constexpr std::int64_t kMaxRepeatSpan = 4096;

std::u32string TerminalText(std::string_view utf8) {
  std::u32string text = DecodeUtf8(utf8);
  if (text.empty()) throw GrammarError("terminal text must be nonempty; use Empty()");
  return text;
}

std::string QuoteTerminal(const std::u32string& text) {
  std::string out = "\"";
  for (char32_t c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          out += DescribeScalar(c);
        } else {
          AppendUtf8(&out, c);
        }
    }
  }
  return out + "\"";
}

}  // namespace

Symbol::Symbol(const char* text) : Symbol(std::string_view(text)) {}
Symbol::Symbol(const std::string& text) : Symbol(std::string_view(text)) {}

Symbol::Symbol(std::string_view text) {
  Node node;
  node.kind = SymbolKind::kTerminal;
  node.text = TerminalText(text);
  node_ = std::make_shared<const Node>(std::move(node));
}

Symbol::Symbol(std::u32string text) {
  if (text.empty()) throw GrammarError("terminal text must be nonempty; use Empty()");
  for (char32_t c : text) {
    if (!IsScalarValue(c)) throw GrammarError("terminal contains a non-scalar code point");
  }
  Node node;
  node.kind = SymbolKind::kTerminal;
  node.text = std::move(text);
  node_ = std::make_shared<const Node>(std::move(node));
}

Symbol Symbol::Make(Node node) { return Symbol(std::make_shared<const Node>(std::move(node))); }

Symbol Empty() {
  static const Symbol empty = Symbol::Make(Symbol::Node{});
  return empty;
}

Symbol Ref(std::string name) {
  if (name.empty()) throw GrammarError("rule reference needs a name");
  Symbol::Node node;
  node.kind = SymbolKind::kRef;
  node.name = std::move(name);
  return Symbol::Make(std::move(node));
}

Symbol SeqOf(std::vector<Symbol> items) {
  if (items.empty()) return Empty();
  if (items.size() == 1) return items[0];
  Symbol::Node node;
  node.kind = SymbolKind::kSequence;
  node.children = std::move(items);
  return Symbol::Make(std::move(node));
}

Symbol SelectOf(std::vector<Symbol> branches) {
  if (branches.size() < 2) {
    throw GrammarError("select needs at least 2 branches, got " +
                       std::to_string(branches.size()));
  }
  Symbol::Node node;
  node.kind = SymbolKind::kChoice;
  node.children = std::move(branches);
  return Symbol::Make(std::move(node));
}

Symbol Repeat(Symbol item, std::int64_t n) { return Repeat(std::move(item), n, n); }

Symbol Repeat(Symbol item, std::int64_t min_count, std::int64_t max_count) {
  if (min_count < 0) throw GrammarError("repeat count must be nonnegative");
  if (max_count < min_count) throw GrammarError("repeat range has max < min");
  if (max_count - min_count > kMaxRepeatSpan) {
    throw GrammarError("repeat range wider than " + std::to_string(kMaxRepeatSpan));
  }
  Symbol::Node node;
  node.kind = SymbolKind::kRepeat;
  node.children = {std::move(item)};
  node.min_count = min_count;
  node.max_count = max_count;
  return Symbol::Make(std::move(node));
}

Symbol Join(Symbol separator, Symbol items) {
  Symbol::Node node;
  node.kind = SymbolKind::kJoin;
  node.children = {std::move(separator), std::move(items)};
  return Symbol::Make(std::move(node));
}

Symbol Accept(std::vector<ScalarRange> ranges, std::vector<char32_t> excluded) {
  if (ranges.empty()) throw GrammarError("accept needs at least one range");
  CharSet set;
  for (const auto& r : ranges) {
    if (r.lo > r.hi) throw GrammarError("accept range has lo > hi");
    if (r.hi > kMaxScalar) throw GrammarError("accept range exceeds U+10FFFF");
    set.AddRange(r.lo, r.hi);
  }
  CharSet cut;
  for (char32_t c : excluded) {
    bool inside = std::any_of(ranges.begin(), ranges.end(),
                              [c](const ScalarRange& r) { return r.lo <= c && c <= r.hi; });
    if (!inside) {
      throw GrammarError("accept exclusion " + DescribeScalar(c) + " lies outside every range");
    }
    cut.Add(c);
  }
  set = set.Subtract(cut);
  if (set.empty()) throw GrammarError("accept describes an empty character set");
  Symbol::Node node;
  node.kind = SymbolKind::kCharClass;
  node.set = std::move(set);
  node.ranges = std::move(ranges);
  node.excluded = std::move(excluded);
  return Symbol::Make(std::move(node));
}

Symbol Accept(char32_t lo, char32_t hi) { return Accept({ScalarRange{lo, hi}}); }

bool Symbol::StructurallyEquals(const Symbol& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.text != b.text || a.name != b.name || a.min_count != b.min_count ||
      a.max_count != b.max_count || a.ranges != b.ranges || a.excluded != b.excluded ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!a.children[i].StructurallyEquals(b.children[i])) return false;
  }
  return true;
}

std::string Symbol::ToString() const {
  const Node& n = *node_;
  auto grouped = [](const Symbol& s) {
    std::string text = s.ToString();
    if (s.kind() == SymbolKind::kChoice || s.kind() == SymbolKind::kSequence) {
      return "(" + text + ")";
    }
    return text;
  };
  switch (n.kind) {
    case SymbolKind::kEmpty:
      return "\"\"";
    case SymbolKind::kTerminal:
      return QuoteTerminal(n.text);
    case SymbolKind::kCharClass: {
      std::string out = "[";
      for (const auto& r : n.ranges) {
        out += DescribeScalar(r.lo);
        if (r.hi != r.lo) out += "-" + DescribeScalar(r.hi);
      }
      if (!n.excluded.empty()) {
        out += " -";
        for (char32_t c : n.excluded) out += " " + DescribeScalar(c);
      }
      return out + "]";
    }
    case SymbolKind::kRef:
      return n.name;
    case SymbolKind::kSequence: {
      std::string out;
      for (const auto& child : n.children) {
        if (!out.empty()) out += " ";
        out += child.kind() == SymbolKind::kChoice ? "(" + child.ToString() + ")"
                                                   : child.ToString();
      }
      return out;
    }
    case SymbolKind::kChoice: {
      std::string out;
      for (const auto& child : n.children) {
        if (!out.empty()) out += " | ";
        out += child.ToString();
      }
      return out;
    }
    case SymbolKind::kRepeat: {
      std::string out = grouped(n.children[0]) + "{" + std::to_string(n.min_count);
      if (n.max_count != n.min_count) out += "," + std::to_string(n.max_count);
      return out + "}";
    }
    case SymbolKind::kJoin:
      return "join(" + n.children[0].ToString() + ", " + n.children[1].ToString() + ")";
  }
  return "?";
}

}  // namespace dslguide
