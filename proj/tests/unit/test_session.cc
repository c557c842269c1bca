/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_session.cc
 */
#include <gtest/gtest.h>

#include "dslguide/error.h"
#include "dslguide/grammars.h"
#include "dslguide/session.h"
#include "oracles.h"

namespace dslguide {
namespace {

CharSet Chars(std::initializer_list<char32_t> cs) { return CharSet(cs); }

TEST(Session, BracketsAgreeWithOraclesUpToTen) {
  Grammar g = BracketsGrammar();
  for (const std::string& s : oracle::AllBracketStrings(10)) {
    auto sum = oracle::BracketRunningSum(s);
    auto stack = oracle::BracketStack(s);
    ASSERT_EQ(sum.prefix, stack.prefix) << s;
    ASSERT_EQ(sum.member, stack.member) << s;
    EXPECT_EQ(IsPrefix(g, s), sum.prefix) << s;
    EXPECT_EQ(IsMember(g, s), sum.member) << s;
  }
  EXPECT_TRUE(IsMember(g, ""));
}

TEST(Session, ExpectedSetsOnBrackets) {
  Session s(BracketsGrammar());
  EXPECT_EQ(s.ExpectedNext(), Chars({'('}));
  EXPECT_TRUE(s.accepting());
  s.Feed('(');
  EXPECT_EQ(s.ExpectedNext(), Chars({'(', ')'}));
  EXPECT_FALSE(s.accepting());
  s.Feed(')');
  EXPECT_TRUE(s.accepting());
}

TEST(Session, JsonSignificantExpectedAfterNumber) {
  Session s(JsonGrammar());
  Instruction ins = s.FeedText("{ \"key\": 0");
  EXPECT_EQ(ins.kind, InstructionKind::kExpect);
  EXPECT_EQ(s.ExpectedNext(true), Chars({'.', 'E', 'e', ',', '}'}));
  CharSet all = s.ExpectedNext(false);
  EXPECT_TRUE(all.Contains(' '));
  EXPECT_TRUE(all.Contains('}'));
}

TEST(Session, JsonColonAfterKey) {
  Session s(JsonGrammar());
  s.FeedText("{ \"key\"");
  EXPECT_EQ(s.ExpectedNext(true), Chars({':'}));
  EXPECT_TRUE(s.ExpectedNext(false).Contains(' '));
}

TEST(Session, JsonMembership) {
  Grammar g = JsonGrammar();
  for (const char* ok : {"{\"a\":1}", "[]", " [1, 2.5e-3, \"x\\u00e9\", true, null] ", "-0", "\"\""}) {
    EXPECT_TRUE(IsMember(g, std::string(ok))) << ok;
  }
  for (const char* bad : {"01", "[1,]", "{a:1}", "tru", "1.", "\"\\x\""}) {
    EXPECT_FALSE(IsMember(g, std::string(bad))) << bad;
  }
  EXPECT_TRUE(IsPrefix(g, std::string("{ \"key\": 0")));
  EXPECT_FALSE(IsPrefix(g, std::string("01")));
}

TEST(Session, RejectionReportsPositionAndExpected) {
  Session s(BracketsGrammar());
  s.Feed('(');
  s.Feed(')');
  Instruction ins = s.Feed(')');
  EXPECT_EQ(ins.kind, InstructionKind::kError);
  EXPECT_EQ(ins.position, 2u);
  ASSERT_TRUE(ins.found.has_value());
  EXPECT_EQ(*ins.found, U')');
  EXPECT_EQ(ins.expected, Chars({'('}));
  EXPECT_TRUE(ins.accepting);
  EXPECT_FALSE(s.alive());
  ErrorReport report = s.Report();
  EXPECT_FALSE(report.alive);
  EXPECT_EQ(report.position, 3u);
  EXPECT_TRUE(report.end_allowed);
  ASSERT_EQ(report.expected.size(), 1u);
  EXPECT_EQ(report.expected[0].value, "(");
}

TEST(Session, DeadSessionRefusesFeeds) {
  Session s(BracketsGrammar());
  EXPECT_FALSE(s.TryFeed(')'));
  EXPECT_THROW(s.Feed('('), SessionError);
  EXPECT_THROW(s.ExpectedNext(), SessionError);
}

TEST(Session, EofInstructionWhenNothingCanFollow) {
  GrammarBuilder b;
  b.Rule("s", "ab");
  Session s(b.Build("s"));
  EXPECT_EQ(s.Feed('a').kind, InstructionKind::kExpect);
  Instruction end = s.Feed('b');
  EXPECT_EQ(end.kind, InstructionKind::kEof);
  EXPECT_TRUE(end.accepting);
  EXPECT_TRUE(s.finished());
  EXPECT_TRUE(end.expected.empty());
}

TEST(Session, CloneIsIndependent) {
  Session a(BracketsGrammar());
  a.Feed('(');
  Session b = a.Clone();
  b.Feed(')');
  EXPECT_EQ(a.consumed(), U"(");
  EXPECT_EQ(b.consumed(), U"()");
  EXPECT_FALSE(a.accepting());
  EXPECT_TRUE(b.accepting());
}

TEST(Session, FramesNameInnermostFirst) {
  Session s(JsonGrammar());
  s.FeedText("{ \"key\"");
  std::vector<std::string> frames = s.Frames();
  ASSERT_FALSE(frames.empty());
  EXPECT_NE(std::find(frames.begin(), frames.end(), "object"), frames.end());
  auto object = std::find(frames.begin(), frames.end(), "object");
  auto member = std::find(frames.begin(), frames.end(), "member");
  EXPECT_LT(member - frames.begin(), object - frames.begin());
}

TEST(Session, ThreadCapIsEnforced) {
  GrammarBuilder b;
  b.Rule("s", Select(Seq(Ref("p1"), "1"), Seq(Ref("p2"), "2"), Seq(Ref("p3"), "3"),
                     Seq(Ref("p4"), "4")));
  b.Rule("p1", Repeat("a", 0, 50));
  b.Rule("p2", Repeat("a", 0, 60));
  b.Rule("p3", Repeat("a", 0, 70));
  b.Rule("p4", Repeat("a", 0, 80));
  Grammar g = b.Build("s");
  Session wide(g);
  wide.FeedText("aaa");
  EXPECT_GE(wide.num_threads(), 4u);
  SessionOptions options;
  options.thread_cap = 2;
  EXPECT_THROW(
      {
        Session narrow(g, options);
        narrow.FeedText("aaa");
      },
      ThreadLimitError);
}

TEST(Session, WorkIsMonotone) {
  Session s(JsonGrammar());
  std::uint64_t last = s.work();
  for (char c : std::string("[1, {\"a\": [true]}]")) {
    s.Feed(static_cast<char32_t>(c));
    EXPECT_GE(s.work(), last);
    last = s.work();
  }
  EXPECT_TRUE(s.accepting());
}

TEST(Session, WorkGrowsLinearlyOnNestedBrackets) {
  auto work_for = [](std::size_t n) {
    Session s(BracketsGrammar());
    for (std::size_t i = 0; i < n; ++i) s.Feed('(');
    for (std::size_t i = 0; i < n; ++i) s.Feed(')');
    EXPECT_TRUE(s.accepting());
    return static_cast<double>(s.work());
  };
  std::vector<double> x, y;
  for (std::size_t n : {32, 64, 128, 256}) {
    x.push_back(static_cast<double>(2 * n));
    y.push_back(work_for(n));
  }
  auto fit = oracle::FitLine(x, y);
  EXPECT_GE(fit.r_squared, 0.99);
  EXPECT_LT(y.back() / y.front(), 8.0 * 1.2);
}

TEST(Session, ReportTableHasTwoColumns) {
  Session s(JsonGrammar());
  s.FeedText("{ \"key\": 0");
  std::string table = s.Report(true).ToTable();
  EXPECT_NE(table.find("Char"), std::string::npos);
  EXPECT_NE(table.find("value"), std::string::npos);
  Session digits(JsonGrammar());
  digits.FeedText("[");
  bool has_range = false;
  for (const auto& row : digits.Report(true).expected) {
    if (row.type == ExpectedRow::Type::kRange) has_range = true;
  }
  EXPECT_TRUE(has_range);
}

TEST(Session, FeedTextStopsAtFirstRejection) {
  Session s(BracketsGrammar());
  Instruction ins = s.FeedText("(()))(");
  EXPECT_EQ(ins.kind, InstructionKind::kError);
  EXPECT_EQ(ins.position, 4u);
  EXPECT_EQ(s.consumed(), U"(())");
}

}  // namespace
}  // namespace dslguide
