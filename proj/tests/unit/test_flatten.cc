/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_flatten.cc
 */
#include <algorithm>

#include <gtest/gtest.h>

#include "dslguide/error.h"
#include "dslguide/flatten.h"
#include "dslguide/grammars.h"
#include "dslguide/sampling.h"
#include "dslguide/session.h"

namespace dslguide {
namespace {

TEST(Flatten, RepeatAsksForACount) {
  Symbol sym = Repeat("x", 2, 4);
  GrammarBuilder b;
  b.Rule("s", sym);
  Flattener f(b.Build("s"));
  FlattenEvent ev = f.Next();
  ASSERT_EQ(ev.kind, FlattenEventKind::kRequest);
  ASSERT_EQ(ev.request->kind, RequestKind::kCount);
  EXPECT_EQ(ev.request->min_count, 2);
  ASSERT_EQ(ev.request->options.size(), 3u);
  EXPECT_EQ(ev.request->options[0].label, "2 items");
  f.AnswerBranch(1);
  std::string text;
  while (true) {
    ev = f.Next();
    if (ev.kind == FlattenEventKind::kComplete) break;
    ASSERT_EQ(ev.kind, FlattenEventKind::kChar);
    text.push_back(static_cast<char>(ev.ch));
  }
  EXPECT_EQ(text, "xxx");
  EXPECT_TRUE(f.done());
}

TEST(Flatten, PendingRequestRepeatsUntilAnswered) {
  GrammarBuilder b;
  b.Rule("s", Select("a", "b"));
  Flattener f(b.Build("s"));
  FlattenEvent first = f.Next();
  FlattenEvent again = f.Next();
  ASSERT_EQ(first.kind, FlattenEventKind::kRequest);
  ASSERT_EQ(again.kind, FlattenEventKind::kRequest);
  EXPECT_EQ(first.request->options.size(), 2u);
  EXPECT_THROW(f.AnswerBranch(2), ChoiceError);
  f.AnswerBranch(1);
  FlattenEvent c = f.Next();
  ASSERT_EQ(c.kind, FlattenEventKind::kChar);
  EXPECT_EQ(c.ch, U'b');
}

TEST(Flatten, ScalarRequestsValidateTheAnswer) {
  GrammarBuilder b;
  b.Rule("s", Seq("n=", Accept('0', '9')));
  Flattener f(b.Build("s"));
  EXPECT_EQ(f.Next().ch, U'n');
  EXPECT_EQ(f.Next().ch, U'=');
  FlattenEvent ev = f.Next();
  ASSERT_EQ(ev.kind, FlattenEventKind::kRequest);
  ASSERT_EQ(ev.request->kind, RequestKind::kScalar);
  EXPECT_EQ(ev.request->scalars, CharSet::Range('0', '9'));
  EXPECT_THROW(f.AnswerScalar('x'), ChoiceError);
  f.AnswerScalar('7');
  EXPECT_EQ(f.Next().ch, U'7');
  EXPECT_EQ(f.Next().kind, FlattenEventKind::kComplete);
}

TEST(Flatten, SingletonClassIsEmittedDirectly) {
  FlattenResult r = FlattenSymbol(Seq(Accept('q', 'q'), "!"), nullptr);
  EXPECT_EQ(r.text, "q!");
}

TEST(Flatten, ScriptedChooserRunsOut) {
  ScriptedChooser chooser({});
  GrammarBuilder b;
  b.Rule("s", Select("a", "b"));
  EXPECT_THROW(Flatten(b.Build("s"), &chooser), ChoiceError);
}

TEST(Flatten, ScriptedDerivation) {
  ScriptedChooser chooser({0, 1}, U"42");
  FlattenResult r = FlattenSymbol(
      Seq(Select("x", "y"), Select("-", "+"), Accept('0', '9'), Accept('0', '9')), &chooser);
  EXPECT_EQ(r.text, "x+42");
  EXPECT_EQ(chooser.calls(), 4u);
}

TEST(Flatten, SymbolWithReferenceNeedsContext) {
  ScriptedChooser chooser({});
  EXPECT_THROW(FlattenSymbol(Ref("pair"), &chooser), GrammarError);
  RandomChooser random(3);
  Grammar ctx = BracketsGrammar();
  FlattenResult r = FlattenSymbol(Seq("<", Ref("pair"), ">"), &random, &ctx);
  ASSERT_GE(r.text.size(), 2u);
  EXPECT_EQ(r.text.front(), '<');
  EXPECT_EQ(r.text.back(), '>');
  EXPECT_TRUE(IsMember(ctx, r.text.substr(1, r.text.size() - 2)));
}

TEST(Flatten, RandomDerivationsAreMembersAndDeterministic) {
  Grammar g = JsonGrammar();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomChooser a(seed);
    RandomChooser b(seed);
    FlattenResult ra = Flatten(g, &a);
    FlattenResult rb = Flatten(g, &b);
    EXPECT_EQ(ra.text, rb.text);
    EXPECT_TRUE(IsMember(g, ra.text)) << ra.text;
  }
}

TEST(Flatten, RuleEdgesFollowTheFrameStack) {
  Grammar g = JsonGrammar();
  bool saw_object = false;
  for (std::uint64_t seed = 0; seed < 500 && !saw_object; ++seed) {
    RandomChooser chooser(seed);
    FlattenResult r = Flatten(g, &chooser);
    if (r.text.find('{') == std::string::npos) continue;
    saw_object = true;
    EXPECT_NE(std::find(r.edges.begin(), r.edges.end(), "value --> object"), r.edges.end());
    EXPECT_GE(r.max_depth, 3u);
  }
  EXPECT_TRUE(saw_object);
}

TEST(FrameTracker, PushPopAndCounts) {
  FrameTracker t;
  t.Push(0, "a", 0);
  t.Push(1, "b", 1);
  t.Push(0, "a", 2);
  EXPECT_EQ(t.depth(), 3u);
  EXPECT_EQ(t.Count(0), 2);
  EXPECT_EQ(t.Count(1), 1);
  t.Pop();
  EXPECT_EQ(t.Count(0), 1);
  EXPECT_EQ(t.Names(), (std::vector<std::string>{"a", "b"}));
}

}  // namespace
}  // namespace dslguide
