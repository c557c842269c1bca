/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/session.h
 * \brief Incremental derivation sessions: feed one scalar at a time, query the expected set.
 *
 * A session holds every derivation thread that is consistent with the consumed prefix. A thread
 * is a persistent stack of parse-form frames whose top is a terminal waiting for input. Feeding a
 * scalar advances the threads that accept it and expands their successors breadth-first, so the
 * consumed input is never scanned again.
 */
#ifndef DSLGUIDE_SESSION_H_
#define DSLGUIDE_SESSION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dslguide/charset.h"
#include "dslguide/grammar.h"

namespace dslguide {

struct StackNode;
using StackPtr = std::shared_ptr<const StackNode>;

/*! \brief One frame of a derivation thread: a parse-form node and the progress inside it. */
struct StackNode {
  std::int32_t node;
  std::int32_t progress;
  StackPtr parent;
  std::size_t hash;
  std::int32_t depth;
};

/*! \brief The live threads after some prefix; empty threads with `accepting` means end of input. */
struct Frontier {
  std::vector<StackPtr> threads;
  bool accepting = false;

  bool alive() const { return accepting || !threads.empty(); }
};

struct SessionOptions {
  /*! \brief Maximum number of live threads before feeding fails with ThreadLimitError. */
  std::size_t thread_cap = 64;
};

enum class InstructionKind : std::uint8_t { kExpect, kError, kEof };

struct Instruction {
  InstructionKind kind = InstructionKind::kExpect;
  /*! \brief Expect: the set of legal next scalars. Error: the set that was legal before the rejected scalar. */
  CharSet expected;
  /*! \brief Rule names of the first live thread, innermost first. */
  std::vector<std::string> frames;
  /*! \brief The consumed prefix is a complete member. */
  bool accepting = false;
  /*! \brief 0-based scalar offset: count consumed so far, or the offset of the rejected scalar. */
  std::size_t position = 0;
  std::optional<char32_t> found;
};

struct ExpectedRow {
  enum class Type : std::uint8_t { kChar, kRange };
  Type type;
  char32_t lo;
  char32_t hi;
  /*! \brief Display value: the character, or "lo-hi" for ranges. */
  std::string value;
};

struct ErrorReport {
  bool alive = true;
  /*! \brief 1-based position of the rejected scalar, or of the next scalar for live sessions. */
  std::size_t position = 1;
  std::optional<char32_t> found;
  std::vector<ExpectedRow> expected;
  /*! \brief Ending the input here would be accepted. */
  bool end_allowed = false;
  std::vector<std::string> frames;

  /*! \brief Two-column table of expected rows (value, type). */
  std::string ToTable() const;
};

std::vector<ExpectedRow> ExpectedRows(const CharSet& set);

class Session {
 public:
  /*!
   * \brief Seeds threads from the start rule. Throws LeftRecursionError for left-recursive
   * grammars and GrammarError when the start rule derives no finite string.
   */
  explicit Session(Grammar grammar, SessionOptions options = {});

  /*! \brief Feeds one scalar. A rejected scalar kills the session; later feeds throw SessionError. */
  Instruction Feed(char32_t c);
  /*! \brief Feed without building an instruction; returns false when `c` is rejected. */
  bool TryFeed(char32_t c);
  /*! \brief Feeds UTF-8 text, stopping at the first rejected scalar. */
  Instruction FeedText(std::string_view utf8);
  Instruction FeedScalars(std::u32string_view text);

  /*! \brief The instruction for the current state without feeding anything. */
  Instruction Current() const;

  /*!
   * \brief Legal next scalars. With `significant_only`, whitespace continuations are skipped.
   * Throws SessionError on a dead session.
   */
  CharSet ExpectedNext(bool significant_only = false) const;
  /*! \brief Ready scalars of each live thread, in thread order. */
  std::vector<CharSet> ThreadSets() const;

  bool alive() const { return alive_; }
  bool accepting() const { return alive_ && frontier_.accepting; }
  /*! \brief Nothing more can be consumed and the prefix is complete. */
  bool finished() const { return alive_ && frontier_.threads.empty(); }
  const std::u32string& consumed() const { return consumed_; }
  std::string consumed_utf8() const;
  std::size_t position() const { return consumed_.size(); }
  std::size_t num_threads() const { return frontier_.threads.size(); }
  /*! \brief Count of internal state transitions since construction; monotone. */
  std::uint64_t work() const { return work_; }
  std::vector<std::string> Frames() const;
  ErrorReport Report(bool significant_only = false) const;

  const Grammar& grammar() const { return grammar_; }
  const Frontier& frontier() const { return frontier_; }

  /*! \brief Independent copy; stacks are persistent so this is cheap. */
  Session Clone() const { return *this; }

  /*!
   * \brief Advances a frontier by one scalar without touching the session. Returns a frontier
   * that is not alive() when the scalar is rejected.
   */
  Frontier Advance(const Frontier& frontier, char32_t c, std::uint64_t* work) const;

 private:
  Frontier Closure(std::vector<StackPtr> seeds, std::uint64_t* work) const;
  std::vector<std::string> FramesOf(const StackPtr& thread) const;
  CharSet ReadySet(const StackPtr& thread) const;
  bool IsWhitespaceThread(const StackPtr& thread) const;
  CharSet SignificantSet(const Frontier& frontier) const;
  CharSet ExpectedOf(const Frontier& frontier, bool significant_only) const;

  Grammar grammar_;
  const CompiledGrammar* compiled_;
  SessionOptions options_;
  Frontier frontier_;
  std::u32string consumed_;
  std::uint64_t work_ = 0;
  bool alive_ = true;
  std::optional<char32_t> rejected_;
};

/*! \brief Feeding every scalar of `text` succeeds. */
bool IsPrefix(const Grammar& grammar, std::string_view text);
/*! \brief `text` is a prefix and the final state accepts. */
bool IsMember(const Grammar& grammar, std::string_view text);
bool IsPrefix(const Grammar& grammar, std::u32string_view text);
bool IsMember(const Grammar& grammar, std::u32string_view text);

}  // namespace dslguide

#endif  // DSLGUIDE_SESSION_H_
