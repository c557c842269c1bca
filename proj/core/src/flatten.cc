/*!
 *  Copyright (c) 2026 by Contributors
 * \file flatten.cc
 */
#include "dslguide/flatten.h"

#include <algorithm>
#include <exception>

#include "dslguide/compiled_grammar.h"
#include "dslguide/error.h"
#include "dslguide/unicode.h"

namespace dslguide {

void FrameTracker::Push(std::int32_t rule, std::string name, std::size_t position) {
  if (!frames_.empty()) {
    std::string edge = frames_.back().name + " --> " + name;
    if (std::find(edges_.begin(), edges_.end(), edge) == edges_.end()) {
      edges_.push_back(std::move(edge));
    }
  }
  if (rule >= static_cast<std::int32_t>(counts_.size())) counts_.resize(rule + 1, 0);
  ++counts_[rule];
  frames_.push_back(CallFrame{rule, std::move(name), position});
  max_depth_ = std::max(max_depth_, frames_.size());
}

void FrameTracker::Pop() {
  DSLGUIDE_ICHECK(!frames_.empty(), "frame pop without a matching push");
  --counts_[frames_.back().rule];
  frames_.pop_back();
}

std::int32_t FrameTracker::Count(std::int32_t rule) const {
  return rule < static_cast<std::int32_t>(counts_.size()) ? counts_[rule] : 0;
}

std::vector<std::string> FrameTracker::Names() const {
  std::vector<std::string> names;
  for (const auto& f : frames_) names.push_back(f.name);
  return names;
}

ScopedFrame::ScopedFrame(FrameTracker* tracker, std::int32_t rule, std::string name,
                         std::size_t position)
    : tracker_(tracker), exceptions_(std::uncaught_exceptions()) {
  tracker_->Push(rule, std::move(name), position);
}

ScopedFrame::~ScopedFrame() {
  if (std::uncaught_exceptions() == exceptions_) tracker_->Pop();
}

ScriptedChooser::ScriptedChooser(std::vector<std::size_t> branches, std::u32string scalars)
    : branches_(std::move(branches)), scalars_(std::move(scalars)) {}

std::size_t ScriptedChooser::ChooseBranch(const SamplerRequest& request) {
  ++calls_;
  if (next_branch_ >= branches_.size()) {
    throw ChoiceError("scripted chooser has no answer left for a decision in '" +
                      request.context + "'");
  }
  return branches_[next_branch_++];
}

char32_t ScriptedChooser::ChooseScalar(const SamplerRequest& request) {
  ++calls_;
  if (next_scalar_ >= scalars_.size()) {
    throw ChoiceError("scripted chooser has no scalar left for a class in '" + request.context +
                      "'");
  }
  return scalars_[next_scalar_++];
}

Flattener::Flattener(Grammar grammar) : grammar_(std::move(grammar)) {
  compiled_ = &grammar_.compiled();
  Prepare(grammar_.start());
}

Flattener::Flattener(Grammar grammar, const std::string& rule) : grammar_(std::move(grammar)) {
  compiled_ = &grammar_.compiled();
  Prepare(rule.empty() ? grammar_.start() : rule);
}

void Flattener::Prepare(const std::string& rule) {
  auto id = compiled_->FindRule(rule);
  if (!id.has_value()) throw GrammarError("unknown rule '" + rule + "'");
  tracker_.Push(*id, compiled_->rule(*id).name, 0);
  stack_.push_back(Frame{-1, 0, 0, true});
  stack_.push_back(Frame{compiled_->rule(*id).gen_body, 0, -1, false});
}

FlattenEvent Flattener::Next() {
  if (pending_.has_value()) return FlattenEvent{FlattenEventKind::kRequest, 0, &*pending_};
  if (pending_scalar_.has_value()) {
    char32_t c = *pending_scalar_;
    pending_scalar_.reset();
    ++position_;
    return FlattenEvent{FlattenEventKind::kChar, c, nullptr};
  }
  while (true) {
    if (stack_.empty()) {
      done_ = true;
      return FlattenEvent{FlattenEventKind::kComplete};
    }
    Frame& top = stack_.back();
    if (top.is_return) {
      stack_.pop_back();
      tracker_.Pop();
      continue;
    }
    const GrammarNode& node = compiled_->node(top.node);
    switch (node.kind) {
      case NodeKind::kEmpty:
        stack_.pop_back();
        break;
      case NodeKind::kLiteral: {
        char32_t c = node.text[top.progress++];
        if (static_cast<std::size_t>(top.progress) == node.text.size()) stack_.pop_back();
        ++position_;
        return FlattenEvent{FlattenEventKind::kChar, c};
      }
      case NodeKind::kClass: {
        if (auto single = node.set.SingleScalar()) {
          stack_.pop_back();
          ++position_;
          return FlattenEvent{FlattenEventKind::kChar, *single};
        }
        SamplerRequest request;
        request.kind = RequestKind::kScalar;
        request.context = compiled_->rule(node.owner).name;
        request.scalars = node.set;
        request.frames = &tracker_;
        pending_ = std::move(request);
        return FlattenEvent{FlattenEventKind::kRequest, 0, &*pending_};
      }
      case NodeKind::kRef: {
        const RuleInfo& rule = compiled_->rule(node.rule);
        stack_.pop_back();
        tracker_.Push(node.rule, rule.name, position_);
        stack_.push_back(Frame{-1, 0, 0, true});
        stack_.push_back(Frame{rule.gen_body, 0, -1, false});
        break;
      }
      case NodeKind::kSeq: {
        if (static_cast<std::size_t>(top.progress) < node.children.size()) {
          std::int32_t child = node.children[top.progress++];
          stack_.push_back(Frame{child, 0, -1, false});
        } else {
          stack_.pop_back();
        }
        break;
      }
      case NodeKind::kChoice: {
        SamplerRequest request;
        request.kind = RequestKind::kBranch;
        request.context = compiled_->rule(node.owner).name;
        request.frames = &tracker_;
        const auto& facts = compiled_->branch_facts(top.node);
        for (std::size_t i = 0; i < facts.size(); ++i) {
          const BranchFacts& f = facts[i];
          request.options.push_back(BranchOption{i, f.label, f.first, f.nullable, f.productive,
                                                 f.min_height, f.refs});
        }
        pending_ = std::move(request);
        return FlattenEvent{FlattenEventKind::kRequest, 0, &*pending_};
      }
      case NodeKind::kRepeat: {
        if (top.target < 0) {
          if (node.min_count == node.max_count) {
            top.target = node.min_count;
          } else {
            SamplerRequest request;
            request.kind = RequestKind::kCount;
            request.context = compiled_->rule(node.owner).name;
            request.frames = &tracker_;
            request.min_count = node.min_count;
            std::int32_t item_height = compiled_->min_height(node.children[0]);
            for (std::int64_t k = node.min_count; k <= node.max_count; ++k) {
              BranchOption option;
              option.index = static_cast<std::size_t>(k - node.min_count);
              option.label = std::to_string(k) + " items";
              option.nullable = k == 0;
              option.productive = k == 0 || item_height < kInfiniteHeight;
              option.min_height = k == 0 ? 0 : item_height;
              request.options.push_back(std::move(option));
            }
            pending_ = std::move(request);
            return FlattenEvent{FlattenEventKind::kRequest, 0, &*pending_};
          }
        }
        if (top.progress < top.target) {
          std::int64_t done = top.progress++;
          std::int32_t item = node.children[0];
          bool separated = done > 0 && node.children.size() > 1;
          std::int32_t sep = separated ? node.children[1] : -1;
          stack_.push_back(Frame{item, 0, -1, false});
          if (separated) stack_.push_back(Frame{sep, 0, -1, false});
        } else {
          stack_.pop_back();
        }
        break;
      }
    }
  }
}

void Flattener::AnswerBranch(std::size_t index) {
  if (!pending_.has_value() || pending_->kind == RequestKind::kScalar) {
    throw ChoiceError("no branch decision is pending");
  }
  if (index >= pending_->options.size()) {
    throw ChoiceError("branch index " + std::to_string(index) + " out of range [0, " +
                      std::to_string(pending_->options.size()) + ") in '" + pending_->context +
                      "'");
  }
  Frame& top = stack_.back();
  if (pending_->kind == RequestKind::kCount) {
    top.target = pending_->min_count + static_cast<std::int64_t>(index);
  } else {
    std::int32_t child = compiled_->node(top.node).children[index];
    top = Frame{child, 0, -1, false};
  }
  pending_.reset();
}

void Flattener::AnswerScalar(char32_t c) {
  if (!pending_.has_value() || pending_->kind != RequestKind::kScalar) {
    throw ChoiceError("no character decision is pending");
  }
  if (!pending_->scalars.Contains(c)) {
    throw ChoiceError("scalar " + DescribeScalar(c) + " is not in " +
                      pending_->scalars.ToString());
  }
  // The class is replaced by a one-scalar literal so the next Next() emits it.
  pending_.reset();
  stack_.pop_back();
  pending_scalar_ = c;
}

std::optional<char32_t> Flattener::NextChar(BranchChooser* chooser) {
  while (true) {
    FlattenEvent event = Next();
    switch (event.kind) {
      case FlattenEventKind::kChar:
        return event.ch;
      case FlattenEventKind::kComplete:
        return std::nullopt;
      case FlattenEventKind::kRequest:
        if (event.request->kind == RequestKind::kScalar) {
          AnswerScalar(chooser->ChooseScalar(*event.request));
        } else {
          AnswerBranch(chooser->ChooseBranch(*event.request));
        }
        break;
    }
  }
}

FlattenResult Flatten(const Grammar& grammar, BranchChooser* chooser, const std::string& rule) {
  Flattener flattener(grammar, rule);
  FlattenResult result;
  while (auto c = flattener.NextChar(chooser)) AppendUtf8(&result.text, *c);
  result.max_depth = flattener.tracker().max_depth();
  result.edges = flattener.tracker().edges();
  return result;
}

FlattenResult FlattenSymbol(const Symbol& symbol, BranchChooser* chooser,
                            const Grammar* context) {
  GrammarBuilder builder;
  std::string root = "symbol";
  if (context != nullptr) {
    for (const auto& [name, body] : context->compiled().symbols()) builder.Rule(name, body);
    builder.Whitespace(context->whitespace_rule().value_or(""));
    while (builder.HasRule(root)) root += "_";
  }
  builder.Rule(root, symbol);
  return Flatten(builder.Build(root), chooser);
}

}  // namespace dslguide
