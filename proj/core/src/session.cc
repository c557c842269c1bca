/*!
 *  Copyright (c) 2026 by Contributors
 * \file session.cc
 * \brief Breadth-first derivation threads over the left-factored parse form.
 */
#include "dslguide/session.h"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "dslguide/analysis.h"
#include "dslguide/compiled_grammar.h"
#include "dslguide/error.h"
#include "dslguide/unicode.h"

namespace dslguide {

namespace {

constexpr std::uint64_t kMaxClosureSteps = 1u << 20;
constexpr std::uint64_t kMaxWhitespaceEnumeration = 64;
constexpr int kMaxWhitespaceRounds = 256;

std::size_t Mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

StackPtr Push(const StackPtr& parent, std::int32_t node, std::int32_t progress) {
  std::size_t h = Mix(parent ? parent->hash : 0x51ed27, static_cast<std::size_t>(node));
  h = Mix(h, static_cast<std::size_t>(progress));
  return std::make_shared<const StackNode>(
      StackNode{node, progress, parent, h, parent ? parent->depth + 1 : 1});
}

bool StackEquals(const StackNode* a, const StackNode* b) {
  while (a != b) {
    if (a == nullptr || b == nullptr) return false;
    if (a->hash != b->hash || a->depth != b->depth || a->node != b->node ||
        a->progress != b->progress) {
      return false;
    }
    a = a->parent.get();
    b = b->parent.get();
  }
  return true;
}

struct StackHash {
  std::size_t operator()(const StackPtr& s) const { return s->hash; }
};

struct StackEq {
  bool operator()(const StackPtr& a, const StackPtr& b) const {
    return StackEquals(a.get(), b.get());
  }
};

std::size_t Signature(const Frontier& frontier) {
  std::vector<std::size_t> hashes;
  hashes.reserve(frontier.threads.size());
  for (const auto& t : frontier.threads) hashes.push_back(t->hash);
  std::sort(hashes.begin(), hashes.end());
  std::size_t h = frontier.accepting ? 1 : 0;
  for (auto v : hashes) h = Mix(h, v);
  return h;
}

std::string JoinFrames(const std::vector<std::string>& frames) {
  std::string out;
  for (const auto& f : frames) {
    if (!out.empty()) out += " < ";
    out += f;
  }
  return out;
}

}  // namespace

std::vector<ExpectedRow> ExpectedRows(const CharSet& set) {
  std::vector<ExpectedRow> rows;
  for (const auto& r : set.ranges()) {
    if (r.lo == r.hi) {
      rows.push_back({ExpectedRow::Type::kChar, r.lo, r.hi, DescribeScalar(r.lo)});
    } else {
      rows.push_back({ExpectedRow::Type::kRange, r.lo, r.hi,
                      DescribeScalar(r.lo) + "-" + DescribeScalar(r.hi)});
    }
  }
  return rows;
}

std::string ErrorReport::ToTable() const {
  std::ostringstream os;
  os << std::left << std::setw(4) << "#" << std::setw(16) << "value"
     << "type\n";
  int row = 1;
  for (const auto& e : expected) {
    os << std::setw(4) << row++ << std::setw(16) << e.value
       << (e.type == ExpectedRow::Type::kChar ? "Char" : "Range") << "\n";
  }
  if (end_allowed) os << std::setw(4) << row << std::setw(16) << "<end>" << "End\n";
  return os.str();
}

Session::Session(Grammar grammar, SessionOptions options)
    : grammar_(std::move(grammar)), compiled_(&grammar_.compiled()), options_(options) {
  CheckLeftRecursion(grammar_);
  const RuleInfo& start = compiled_->rule(compiled_->start_rule());
  if (!compiled_->productive(start.gen_body)) {
    throw GrammarError("start rule '" + start.name + "' derives no finite string");
  }
  frontier_ = Closure({Push(nullptr, start.parse_body, 0)}, &work_);
}

Frontier Session::Closure(std::vector<StackPtr> seeds, std::uint64_t* work) const {
  Frontier out;
  std::deque<StackPtr> queue(seeds.begin(), seeds.end());
  std::unordered_set<StackPtr, StackHash, StackEq> visited;
  std::uint64_t steps = 0;
  while (!queue.empty()) {
    StackPtr s = std::move(queue.front());
    queue.pop_front();
    ++*work;
    if (++steps > kMaxClosureSteps) {
      throw ThreadLimitError("derivation expansion did not converge at position " +
                             std::to_string(consumed_.size() + 1));
    }
    if (!s) {
      out.accepting = true;
      continue;
    }
    if (!visited.insert(s).second) continue;
    const GrammarNode& node = compiled_->node(s->node);
    if (s->progress == 0 && !compiled_->productive(s->node)) continue;
    switch (node.kind) {
      case NodeKind::kLiteral:
      case NodeKind::kClass:
        out.threads.push_back(s);
        if (out.threads.size() > options_.thread_cap) {
          throw ThreadLimitError("more than " + std::to_string(options_.thread_cap) +
                                 " derivation threads at position " +
                                 std::to_string(consumed_.size() + 1) + " in " +
                                 JoinFrames(FramesOf(s)));
        }
        break;
      case NodeKind::kEmpty:
        queue.push_back(s->parent);
        break;
      case NodeKind::kRef:
        queue.push_back(Push(s->parent, compiled_->rule(node.rule).parse_body, 0));
        break;
      case NodeKind::kSeq: {
        auto p = s->progress;
        auto n = static_cast<std::int32_t>(node.children.size());
        StackPtr base = p + 1 == n ? s->parent : Push(s->parent, s->node, p + 1);
        queue.push_back(Push(base, node.children[p], 0));
        break;
      }
      case NodeKind::kChoice:
        for (auto branch : node.children) queue.push_back(Push(s->parent, branch, 0));
        break;
      case NodeKind::kRepeat: {
        std::int64_t p = s->progress;
        if (p >= node.min_count) queue.push_back(s->parent);
        if (p < node.max_count) {
          StackPtr base = p + 1 == node.max_count
                              ? s->parent
                              : Push(s->parent, s->node, static_cast<std::int32_t>(p + 1));
          StackPtr t = Push(base, node.children[0], 0);
          if (p > 0 && node.children.size() > 1) t = Push(t, node.children[1], 0);
          queue.push_back(std::move(t));
        }
        break;
      }
    }
  }
  return out;
}

Frontier Session::Advance(const Frontier& frontier, char32_t c, std::uint64_t* work) const {
  std::vector<StackPtr> seeds;
  for (const auto& t : frontier.threads) {
    ++*work;
    const GrammarNode& node = compiled_->node(t->node);
    if (node.kind == NodeKind::kLiteral) {
      if (node.text[t->progress] != c) continue;
      if (static_cast<std::size_t>(t->progress) + 1 < node.text.size()) {
        seeds.push_back(Push(t->parent, t->node, t->progress + 1));
      } else {
        seeds.push_back(t->parent);
      }
    } else if (node.set.Contains(c)) {
      seeds.push_back(t->parent);
    }
  }
  if (seeds.empty()) return Frontier{};
  return Closure(std::move(seeds), work);
}

bool Session::TryFeed(char32_t c) {
  if (!alive_) {
    throw SessionError("session rejected input at position " +
                       std::to_string(consumed_.size() + 1) + " and accepts no further input");
  }
  Frontier next = Advance(frontier_, c, &work_);
  if (!next.alive()) {
    alive_ = false;
    rejected_ = c;
    return false;
  }
  frontier_ = std::move(next);
  consumed_.push_back(c);
  return true;
}

Instruction Session::Feed(char32_t c) {
  TryFeed(c);
  return Current();
}

Instruction Session::FeedText(std::string_view utf8) { return FeedScalars(DecodeUtf8(utf8)); }

Instruction Session::FeedScalars(std::u32string_view text) {
  for (char32_t c : text) {
    if (!TryFeed(c)) break;
  }
  return Current();
}

Instruction Session::Current() const {
  Instruction ins;
  ins.frames = Frames();
  ins.accepting = frontier_.accepting;
  ins.position = consumed_.size();
  ins.expected = ExpectedOf(frontier_, false);
  if (!alive_) {
    ins.kind = InstructionKind::kError;
    ins.found = rejected_;
  } else if (frontier_.threads.empty()) {
    ins.kind = InstructionKind::kEof;
  } else {
    ins.kind = InstructionKind::kExpect;
  }
  return ins;
}

CharSet Session::ReadySet(const StackPtr& thread) const {
  const GrammarNode& node = compiled_->node(thread->node);
  if (node.kind == NodeKind::kLiteral) return CharSet::Single(node.text[thread->progress]);
  return node.set;
}

bool Session::IsWhitespaceThread(const StackPtr& thread) const {
  return compiled_->whitespace_rule() >= 0 &&
         compiled_->node(thread->node).owner == compiled_->whitespace_rule();
}

CharSet Session::ExpectedNext(bool significant_only) const {
  if (!alive_) throw SessionError("expected set requested from a session that rejected input");
  return ExpectedOf(frontier_, significant_only);
}

CharSet Session::ExpectedOf(const Frontier& frontier, bool significant_only) const {
  if (significant_only) return SignificantSet(frontier);
  CharSet out;
  for (const auto& t : frontier.threads) out.Merge(ReadySet(t));
  return out;
}

std::vector<CharSet> Session::ThreadSets() const {
  std::vector<CharSet> sets;
  for (const auto& t : frontier_.threads) sets.push_back(ReadySet(t));
  return sets;
}

CharSet Session::SignificantSet(const Frontier& frontier) const {
  CharSet out;
  std::deque<Frontier> queue{frontier};
  std::unordered_set<std::size_t> seen{Signature(frontier)};
  std::uint64_t scratch = 0;
  for (int round = 0; !queue.empty() && round < kMaxWhitespaceRounds; ++round) {
    Frontier current = std::move(queue.front());
    queue.pop_front();
    Frontier whitespace;
    CharSet ws_chars;
    for (const auto& t : current.threads) {
      if (IsWhitespaceThread(t)) {
        whitespace.threads.push_back(t);
        ws_chars.Merge(ReadySet(t));
      } else {
        out.Merge(ReadySet(t));
      }
    }
    if (ws_chars.empty()) continue;
    if (ws_chars.size() > kMaxWhitespaceEnumeration) {
      out.Merge(ws_chars);
      continue;
    }
    for (std::uint64_t k = 0; k < ws_chars.size(); ++k) {
      Frontier next = Advance(whitespace, ws_chars.Nth(k), &scratch);
      if (!next.threads.empty() && seen.insert(Signature(next)).second) {
        queue.push_back(std::move(next));
      }
    }
  }
  return out;
}

std::vector<std::string> Session::FramesOf(const StackPtr& thread) const {
  std::vector<std::string> frames;
  for (const StackNode* s = thread.get(); s != nullptr; s = s->parent.get()) {
    const std::string& name = compiled_->rule(compiled_->node(s->node).owner).name;
    if (frames.empty() || frames.back() != name) frames.push_back(name);
  }
  return frames;
}

std::vector<std::string> Session::Frames() const {
  if (frontier_.threads.empty()) return {};
  return FramesOf(frontier_.threads.front());
}

std::string Session::consumed_utf8() const { return EncodeUtf8(consumed_); }

ErrorReport Session::Report(bool significant_only) const {
  ErrorReport report;
  report.alive = alive_;
  report.position = consumed_.size() + 1;
  report.found = rejected_;
  report.expected = ExpectedRows(ExpectedOf(frontier_, significant_only));
  report.end_allowed = frontier_.accepting;
  report.frames = Frames();
  return report;
}

bool IsPrefix(const Grammar& grammar, std::u32string_view text) {
  Session session(grammar);
  for (char32_t c : text) {
    if (!session.TryFeed(c)) return false;
  }
  return true;
}

bool IsMember(const Grammar& grammar, std::u32string_view text) {
  Session session(grammar);
  for (char32_t c : text) {
    if (!session.TryFeed(c)) return false;
  }
  return session.accepting();
}

bool IsPrefix(const Grammar& grammar, std::string_view text) {
  std::u32string scalars;
  try {
    scalars = DecodeUtf8(text);
  } catch (const Error&) {
    return false;
  }
  return IsPrefix(grammar, std::u32string_view(scalars));
}

bool IsMember(const Grammar& grammar, std::string_view text) {
  std::u32string scalars;
  try {
    scalars = DecodeUtf8(text);
  } catch (const Error&) {
    return false;
  }
  return IsMember(grammar, std::u32string_view(scalars));
}

}  // namespace dslguide
