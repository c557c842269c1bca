/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/flatten.h
 * \brief Turning a symbol into a resumable stream of characters and sampler requests.
 *
 * The Flattener walks the generation form of a grammar with an explicit stack. It suspends at
 * every choice, repetition range and character class and resumes once the decision is answered,
 * so a derivation can be driven step by step by a sampler or by a caller.
 */
#ifndef DSLGUIDE_FLATTEN_H_
#define DSLGUIDE_FLATTEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dslguide/charset.h"
#include "dslguide/grammar.h"

namespace dslguide {

struct CallFrame {
  std::int32_t rule;
  std::string name;
  /*! \brief Number of characters emitted before the rule was entered. */
  std::size_t entry_position;
};

/*! \brief Stack of active rule expansions, with per-rule counts and observed rule edges. */
class FrameTracker {
 public:
  void Push(std::int32_t rule, std::string name, std::size_t position);
  /*! \brief Pops the innermost frame; popping an empty tracker aborts. */
  void Pop();

  const std::vector<CallFrame>& frames() const { return frames_; }
  std::size_t depth() const { return frames_.size(); }
  std::size_t max_depth() const { return max_depth_; }
  /*! \brief Number of frames for `rule` currently on the stack. */
  std::int32_t Count(std::int32_t rule) const;
  std::vector<std::string> Names() const;
  /*! \brief Distinct "parent --> child" edges in first-seen order. */
  const std::vector<std::string>& edges() const { return edges_; }

 private:
  std::vector<CallFrame> frames_;
  std::vector<std::int32_t> counts_;
  std::vector<std::string> edges_;
  std::size_t max_depth_ = 0;
};

/*!
 * \brief Pushes a frame for the lifetime of the scope. If the scope unwinds because of an
 * exception the frame stays on the stack so that the error report can show it.
 */
class ScopedFrame {
 public:
  ScopedFrame(FrameTracker* tracker, std::int32_t rule, std::string name, std::size_t position);
  ~ScopedFrame();
  ScopedFrame(const ScopedFrame&) = delete;
  ScopedFrame& operator=(const ScopedFrame&) = delete;

 private:
  FrameTracker* tracker_;
  int exceptions_;
};

struct BranchOption {
  std::size_t index;
  std::string label;
  /*! \brief First set of the branch when it is known. */
  std::optional<CharSet> first;
  bool nullable = false;
  bool productive = true;
  std::int32_t min_height = 0;
  /*! \brief Rules the branch expands directly. */
  std::vector<std::int32_t> refs;
};

enum class RequestKind : std::uint8_t { kBranch, kCount, kScalar };

/*! \brief A suspended decision. kCount options are labeled counts; option i means min + i items. */
struct SamplerRequest {
  RequestKind kind = RequestKind::kBranch;
  /*! \brief Name of the rule whose body holds the decision. */
  std::string context;
  std::vector<BranchOption> options;
  std::int64_t min_count = 0;
  /*! \brief kScalar: the class to draw from. */
  CharSet scalars;
  const FrameTracker* frames = nullptr;
};

class BranchChooser {
 public:
  virtual ~BranchChooser() = default;
  /*! \brief Index into request.options for kBranch and kCount requests. */
  virtual std::size_t ChooseBranch(const SamplerRequest& request) = 0;
  /*! \brief A member of request.scalars for kScalar requests. */
  virtual char32_t ChooseScalar(const SamplerRequest& request) = 0;
};

/*! \brief Answers from fixed lists, in order; throws ChoiceError when a list runs out. */
class ScriptedChooser : public BranchChooser {
 public:
  ScriptedChooser(std::vector<std::size_t> branches, std::u32string scalars = {});
  std::size_t ChooseBranch(const SamplerRequest& request) override;
  char32_t ChooseScalar(const SamplerRequest& request) override;
  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::size_t> branches_;
  std::u32string scalars_;
  std::size_t next_branch_ = 0;
  std::size_t next_scalar_ = 0;
  std::size_t calls_ = 0;
};

enum class FlattenEventKind : std::uint8_t { kChar, kRequest, kComplete };

struct FlattenEvent {
  FlattenEventKind kind;
  char32_t ch = 0;
  /*! \brief Valid until the request is answered. */
  const SamplerRequest* request = nullptr;
};

class Flattener {
 public:
  /*! \brief Derives the grammar's start rule. */
  explicit Flattener(Grammar grammar);
  /*! \brief Derives `rule` of the grammar. */
  Flattener(Grammar grammar, const std::string& rule);

  /*!
   * \brief Runs until the next character, decision or completion. While a request is pending,
   * Next() returns the same request again.
   */
  FlattenEvent Next();
  /*! \brief Resumes a pending kBranch/kCount request. Throws ChoiceError for an invalid index. */
  void AnswerBranch(std::size_t index);
  /*! \brief Resumes a pending kScalar request. Throws ChoiceError if `c` is outside the class. */
  void AnswerScalar(char32_t c);

  /*! \brief Runs to the next character, answering requests with `chooser`; nullopt at completion. */
  std::optional<char32_t> NextChar(BranchChooser* chooser);

  bool done() const { return done_; }
  std::size_t position() const { return position_; }
  const FrameTracker& tracker() const { return tracker_; }
  const Grammar& grammar() const { return grammar_; }

 private:
  struct Frame {
    std::int32_t node;
    std::int64_t progress;
    std::int64_t target;
    /*! \brief Frame marks the end of a rule expansion rather than a node. */
    bool is_return;
  };

  void Prepare(const std::string& rule);

  Grammar grammar_;
  const CompiledGrammar* compiled_;
  std::vector<Frame> stack_;
  FrameTracker tracker_;
  std::optional<SamplerRequest> pending_;
  std::optional<char32_t> pending_scalar_;
  std::size_t position_ = 0;
  bool done_ = false;
};

struct FlattenResult {
  std::string text;
  std::size_t max_depth = 0;
  std::vector<std::string> edges;
};

/*! \brief Runs a complete derivation of the start rule (or `rule`) with `chooser`. */
FlattenResult Flatten(const Grammar& grammar, BranchChooser* chooser,
                      const std::string& rule = std::string());

/*!
 * \brief Derives a standalone symbol. References resolve against `context` when given;
 * without it the symbol may not contain references.
 */
FlattenResult FlattenSymbol(const Symbol& symbol, BranchChooser* chooser,
                            const Grammar* context = nullptr);

}  // namespace dslguide

#endif  // DSLGUIDE_FLATTEN_H_
