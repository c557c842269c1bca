/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_grammars.cc
 */
#include <gtest/gtest.h>

#include "dslguide/error.h"
#include "dslguide/grammar_ast.h"
#include "dslguide/grammars.h"
#include "dslguide/sampling.h"
#include "dslguide/session.h"
#include "oracles.h"

namespace dslguide {
namespace {

std::string MermaidLines(std::size_t n) {
  std::string text = "flowchart LR";
  for (std::size_t i = 0; i < n; ++i) {
    text += "\n    " + std::to_string(i % 9 + 1) + " --> " + std::to_string((i * 7) % 9 + 1);
  }
  return text;
}

TEST(Mermaid, SamplesMatchTheShape) {
  Grammar g = MermaidGrammar();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::string text = GenerateRandom(g, seed).text;
    EXPECT_TRUE(oracle::MermaidShape(text, 10, 20)) << text;
  }
}

TEST(Mermaid, LineCountBounds) {
  Grammar g = MermaidGrammar();
  EXPECT_FALSE(IsMember(g, MermaidLines(9)));
  EXPECT_TRUE(IsMember(g, MermaidLines(10)));
  EXPECT_TRUE(IsMember(g, MermaidLines(20)));
  EXPECT_FALSE(IsMember(g, MermaidLines(21)));
  EXPECT_TRUE(IsPrefix(g, MermaidLines(9)));
  EXPECT_FALSE(IsMember(g, MermaidLines(10) + "\n"));
}

TEST(Mermaid, RelaxedCountVariant) {
  MermaidOptions one;
  one.min_lines = 1;
  one.max_lines = 1;
  Grammar g = MermaidGrammar(one);
  EXPECT_TRUE(IsMember(g, std::string("flowchart TD\n    1 --> 2")));
  EXPECT_FALSE(IsMember(g, std::string("flowchart TD\n    1 --> 0")));
  EXPECT_FALSE(IsMember(g, std::string("flowchart BT\n    1 --> 2")));
  EXPECT_TRUE(oracle::MermaidShape("flowchart TD\n    1 --> 2", 1, 1));
}

TEST(FunctionCall, SamplesMatchTheShape) {
  Grammar g = FunctionCallGrammar();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::string text = GenerateRandom(g, seed).text;
    EXPECT_TRUE(oracle::FunctionCallShape(text)) << text;
  }
}

TEST(FunctionCall, Examples) {
  Grammar g = FunctionCallGrammar();
  for (const char* ok : {"f()", "get_weather(\"Paris\", 3)", "_x9({\"a\": [1, 2]})", "g(null, true)"}) {
    EXPECT_TRUE(IsMember(g, std::string(ok))) << ok;
    EXPECT_TRUE(oracle::FunctionCallShape(ok)) << ok;
  }
  for (const char* bad : {"9f()", "f(1,2)", "f( 1)", "f(1", "f(,)"}) {
    EXPECT_FALSE(IsMember(g, std::string(bad))) << bad;
  }
}

TEST(Builtins, NamesResolve) {
  for (const auto& name : BuiltinGrammarNames()) EXPECT_TRUE(BuiltinGrammar(name).has_value());
  EXPECT_FALSE(BuiltinGrammar("sql").has_value());
}

TEST(GrammarAst, DumpLoadRoundTrip) {
  for (const auto& name : BuiltinGrammarNames()) {
    Grammar g = *BuiltinGrammar(name);
    std::string doc = DumpGrammarAst(g);
    Grammar loaded = LoadGrammarAst(doc);
    EXPECT_EQ(DumpGrammarAst(loaded), doc) << name;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      std::string text = GenerateRandom(g, seed).text;
      EXPECT_TRUE(IsMember(loaded, text)) << name << ": " << text;
      EXPECT_EQ(GenerateRandom(loaded, seed).text, text) << name;
    }
  }
}

TEST(GrammarAst, HandWrittenDocument) {
  const char* doc = R"({
    "start": "list",
    "rules": {
      "list": {"t": "seq", "items": [{"t": "term", "v": "<"},
                                     {"t": "join", "sep": {"t": "term", "v": ","},
                                      "items": {"t": "ref", "name": "items"}},
                                     {"t": "term", "v": ">"}]},
      "items": {"t": "repeat", "item": {"t": "ref", "name": "item"}, "min": 1, "max": 3},
      "item": {"t": "choice", "items": [{"t": "class", "ranges": [["a", "c"]]},
                                        {"t": "class", "ranges": [[48, 57]], "excl": ["5"]}]}
    }
  })";
  Grammar g = LoadGrammarAst(doc);
  EXPECT_TRUE(IsMember(g, std::string("<a,9,b>")));
  EXPECT_TRUE(IsMember(g, std::string("<c>")));
  EXPECT_FALSE(IsMember(g, std::string("<5>")));
  EXPECT_FALSE(IsMember(g, std::string("<a,b,c,a>")));
  EXPECT_FALSE(IsMember(g, std::string("<>")));
}

TEST(GrammarAst, Errors) {
  EXPECT_THROW(LoadGrammarAst("{"), GrammarError);
  EXPECT_THROW(LoadGrammarAst(R"({"rules": {}})"), GrammarError);
  EXPECT_THROW(LoadGrammarAst(R"({"start": "a"})"), GrammarError);
  EXPECT_THROW(LoadGrammarAst(R"({"start": "a", "rules": {"a": {"t": "bogus"}}})"), GrammarError);
  EXPECT_THROW(LoadGrammarAst(R"({"start": "a", "rules": {"a": {"t": "ref", "name": "b"}}})"), GrammarError);
}

}  // namespace
}  // namespace dslguide
