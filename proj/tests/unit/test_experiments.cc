/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_experiments.cc
 */
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "dslguide/error.h"
#include "experiments.h"

namespace dslguide {
namespace harness {
namespace {

std::vector<double> Row(double open, double close) { return {open, close, -50.0, -50.0, -50.0}; }

TEST(BracketExperiment, ScriptedTableThresholds) {
  TokenVocabulary vocab = BracketVocabulary();
  std::vector<std::vector<double>> rows = {Row(1, 0), Row(1, 0), Row(0, 1), Row(0, 1),
                                           Row(0, 4), Row(0, 4), Row(0, 5)};
  ScriptedBackend backend(vocab.size(), rows);
  ExperimentReport r = RunBracketExperiment(&backend, vocab, {4, 8, 12, 16, 20, 24, 28});
  EXPECT_EQ(r.summary["first_n_over_50"], 12);
  EXPECT_EQ(r.summary["first_n_over_95"], 20);
  EXPECT_TRUE(r.summary["monotone"].get<bool>());
  ASSERT_EQ(r.points.size(), 7u);
  EXPECT_EQ(r.points[4]["length"], 40);
  EXPECT_NEAR(r.points[4]["error_rate"].get<double>(), 1.0 / (1.0 + std::exp(-4.0)), 1e-12);
}

TEST(BracketExperiment, UniformIsFlat) {
  TokenVocabulary vocab = BracketVocabulary();
  UniformBackend backend(vocab.size());
  ExperimentReport r = RunBracketExperiment(&backend, vocab, {1, 5, 10, 40});
  for (const auto& p : r.points) EXPECT_DOUBLE_EQ(p["error_rate"].get<double>(), 0.5);
  EXPECT_TRUE(r.summary["first_n_over_50"].is_null());
  EXPECT_TRUE(r.summary["first_n_over_95"].is_null());
}

TEST(BracketExperiment, BiasedCloserThresholdsFromClosedForm) {
  TokenVocabulary vocab = BracketVocabulary();
  MockOptions mock;
  mock.slope = 0.75;
  mock.midpoint = 6.0;
  auto backend = MakeMockBackend(MockKind::kBiasedCloser, vocab.Texts(), mock);
  std::vector<int> ns;
  for (int n = 1; n <= 30; ++n) ns.push_back(n);
  ExperimentReport r = RunBracketExperiment(backend.get(), vocab, ns);
  auto rate = [&](int n) { return 1.0 / (1.0 + std::exp(-2.0 * mock.slope * (n - mock.midpoint))); };
  int over_50 = 0, over_95 = 0;
  for (int n : ns) {
    if (!over_50 && rate(n) > 0.5) over_50 = n;
    if (!over_95 && rate(n) > 0.95) over_95 = n;
  }
  EXPECT_EQ(r.summary["first_n_over_50"], over_50);
  EXPECT_EQ(r.summary["first_n_over_95"], over_95);
  EXPECT_TRUE(r.summary["monotone"].get<bool>());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    EXPECT_NEAR(r.points[i]["error_rate"].get<double>(), rate(ns[i]), 1e-12);
  }
}

TEST(BracketExperiment, BackendFailureSkipsThePoint) {
  TokenVocabulary vocab = BracketVocabulary();
  ScriptedBackend backend(vocab.size(), {Row(0, 0)});
  ExperimentReport r = RunBracketExperiment(&backend, vocab, {1, 2, 3});
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_TRUE(r.points[0].contains("error_rate"));
  EXPECT_TRUE(r.points[1].contains("error"));
  EXPECT_FALSE(r.points[2].contains("error_rate"));
}

TEST(BracketExperiment, ContextShape) {
  for (auto lang : {PromptLanguage::kEnglish, PromptLanguage::kChinese}) {
    std::string ctx = BracketContext(lang, 3);
    EXPECT_EQ(ctx, BracketPrompt(lang) + "\n((()))");
  }
  EXPECT_NE(BracketPrompt(PromptLanguage::kEnglish), BracketPrompt(PromptLanguage::kChinese));
}

TEST(JsonFuzz, SmallCorpusParses) {
  FuzzOptions options;
  options.count = 2000;
  ExperimentReport r = RunJsonFuzz(options);
  EXPECT_TRUE(r.passed) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(r.summary["parsed"], 2000);
  EXPECT_DOUBLE_EQ(r.summary["success_rate"].get<double>(), 1.0);
  EXPECT_GT(r.summary["mean_length"].get<double>(), 1.0);
  EXPECT_EQ(r.summary["reference_mean_length"], 17.86);
  EXPECT_EQ(r.ToJson(), RunJsonFuzz(options).ToJson());
}

TEST(JsonFuzz, CountZeroIsRejected) {
  FuzzOptions options;
  options.count = 0;
  EXPECT_THROW(RunJsonFuzz(options), Error);
  EXPECT_THROW(RunSamplingRatio(0, 1), Error);
}

TEST(SamplingRatio, ShortcutCurves) {
  ExperimentReport r = RunSamplingRatio(400, 5);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.summary["shortcut_mismatches"], 0);
  EXPECT_EQ(r.summary["mean_ratio_no_shortcut"].get<double>(), 1.0);
  EXPECT_LT(r.summary["mean_ratio_shortcut"].get<double>(), 1.0);
  ASSERT_FALSE(r.points.empty());
  for (const auto& p : r.points) {
    EXPECT_EQ(p["ratio_no_shortcut"].get<double>(), 1.0);
    EXPECT_LT(p["ratio_shortcut"].get<double>(), 1.0) << p.dump();
  }
  ASSERT_GT(r.summary["literal_documents"].get<std::size_t>(), 0u);
  EXPECT_LE(r.summary["literal_mean_ratio_shortcut"].get<double>(), 0.25);
}

TEST(Corpus, DocumentSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 1000; ++i) seen.insert(DocumentSeed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(DocumentSeed(42, 7), DocumentSeed(42, 7));
  EXPECT_NE(DocumentSeed(42, 7), DocumentSeed(43, 7));
}

TEST(Vocabularies, Builtins) {
  TokenVocabulary ascii = AsciiVocabulary();
  EXPECT_EQ(ascii.size(), 3u + 95u + 1u);
  EXPECT_TRUE(ascii.is_eos(static_cast<std::int32_t>(ascii.size() - 1)));
  EXPECT_TRUE(BuiltinVocabulary("brackets").has_value());
  EXPECT_FALSE(BuiltinVocabulary("gpt2").has_value());
}

TEST(Report, TextAndJsonForms) {
  TokenVocabulary vocab = BracketVocabulary();
  UniformBackend backend(vocab.size());
  ExperimentReport r = RunBracketExperiment(&backend, vocab, {2});
  OrderedJson j = r.ToJson();
  EXPECT_EQ(j["experiment"], "brackets");
  EXPECT_TRUE(j.contains("parameters"));
  EXPECT_NE(r.ToText().find("PASSED"), std::string::npos);
}

}  // namespace
}  // namespace harness
}  // namespace dslguide
