/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_sampling.cc
 */
#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "dslguide/error.h"
#include "dslguide/grammars.h"
#include "dslguide/sampling.h"
#include "dslguide/session.h"
#include "dslguide/unicode.h"
#include "oracles.h"

namespace dslguide {
namespace {

std::vector<double> NaiveSoftmax(const std::vector<double>& z, double t) {
  std::vector<double> e(z.size());
  double sum = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    e[i] = std::exp(z[i] / t);
    sum += e[i];
  }
  for (double& v : e) v /= sum;
  return e;
}

std::size_t ArgMax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

const std::vector<std::vector<double>>& LogitFixtures() {
  static const std::vector<std::vector<double>> fixtures = {
      {1.0, 2.0, 3.0},
      {-4.0, 0.5, 0.25, 2.0, -1.0},
      {10.0, 9.5, -3.0, 0.0},
      {0.1},
      {-700.0, -699.0, -710.0},
  };
  return fixtures;
}

TEST(Temperature, SumsToOne) {
  for (const auto& z : LogitFixtures()) {
    for (double t : {0.0, 0.05, 0.5, 1.0, 2.0, 10.0}) {
      auto p = TemperatureScale(z, t);
      double sum = std::accumulate(p.begin(), p.end(), 0.0);
      EXPECT_NEAR(sum, 1.0, 1e-9);
      for (double v : p) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(Temperature, UnitTemperatureIsSoftmax) {
  for (const auto& z : LogitFixtures()) {
    if (z[0] < -100) continue;
    auto p = TemperatureScale(z, 1.0);
    auto q = NaiveSoftmax(z, 1.0);
    auto s = Softmax(z);
    for (std::size_t i = 0; i < z.size(); ++i) {
      EXPECT_NEAR(p[i], q[i], 1e-12);
      EXPECT_NEAR(s[i], q[i], 1e-12);
    }
  }
}

TEST(Temperature, ZeroIsOneHotArgmax) {
  for (const auto& z : LogitFixtures()) {
    auto p = TemperatureScale(z, 0.0);
    std::size_t k = ArgMax(z);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(p[i], i == k ? 1.0 : 0.0);
  }
  auto tie = TemperatureScale({2.0, 2.0, 1.0}, 0.0);
  EXPECT_EQ(tie, (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(Temperature, ArgmaxInvariant) {
  for (const auto& z : LogitFixtures()) {
    for (double t : {0.01, 0.3, 1.0, 3.0, 100.0}) EXPECT_EQ(ArgMax(TemperatureScale(z, t)), ArgMax(z));
  }
}

TEST(Temperature, HigherTemperatureFlattens) {
  std::vector<double> z = {0.0, 1.0, 4.0};
  EXPECT_GT(TemperatureScale(z, 0.5)[2], TemperatureScale(z, 1.0)[2]);
  EXPECT_GT(TemperatureScale(z, 1.0)[2], TemperatureScale(z, 5.0)[2]);
}

TEST(Temperature, RejectsBadInput) {
  EXPECT_THROW(TemperatureScale({}, 1.0), Error);
  EXPECT_THROW(TemperatureScale({1.0}, -0.5), Error);
  EXPECT_THROW(TemperatureScale({std::nan("")}, 1.0), Error);
  EXPECT_THROW(TemperatureScale({std::numeric_limits<double>::infinity()}, 1.0), Error);
}

TEST(SampleIndex, FollowsTheDistribution) {
  std::mt19937_64 rng(11);
  std::vector<double> probs = {0.1, 0.0, 0.6, 0.3};
  std::vector<int> counts(4, 0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[SampleIndex(probs, &rng)];
  EXPECT_EQ(counts[1], 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    EXPECT_NEAR(counts[i] / static_cast<double>(n), probs[i], 0.015);
  }
}

TEST(RandomChooser, RejectsBadPolicy) {
  EXPECT_THROW(RandomChooser(1, DecayPolicy{0.0, 8}), Error);
  EXPECT_THROW(RandomChooser(1, DecayPolicy{1.5, 8}), Error);
  EXPECT_THROW(RandomChooser(1, DecayPolicy{0.5, 0}), Error);
}

TEST(RandomChooser, DepthCapForcesShortBranches) {
  DecayPolicy policy{1.0, 2};
  Grammar g = JsonGrammar();
  std::uint64_t hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomChooser chooser(seed, policy);
    DerivationChooser derivation(g, &chooser);
    GenerateResult r = ConstrainedGenerate(g, &derivation);
    EXPECT_TRUE(IsMember(g, r.text));
    hits += chooser.depth_cap_hits();
  }
  EXPECT_GT(hits, 0u);
}

TEST(Generate, AllBuiltinsProduceMembers) {
  for (const auto& name : BuiltinGrammarNames()) {
    Grammar g = *BuiltinGrammar(name);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      GenerateResult r = GenerateRandom(g, seed);
      EXPECT_TRUE(IsMember(g, r.text)) << name << " seed " << seed << ": " << r.text;
      EXPECT_EQ(r.stats.chars_emitted, DecodeUtf8(r.text).size());
    }
  }
}

TEST(Generate, ShortcutDoesNotChangeOutput) {
  Grammar g = JsonGrammar();
  GenerateOptions off;
  off.forced_shortcut = false;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenerateResult on = GenerateRandom(g, seed);
    GenerateResult plain = GenerateRandom(g, seed, off);
    EXPECT_EQ(on.text, plain.text);
    EXPECT_EQ(plain.stats.forced_moves, 0u);
    EXPECT_EQ(plain.stats.sampler_calls, plain.stats.chars_emitted);
    EXPECT_EQ(on.stats.sampler_calls + on.stats.forced_moves, on.stats.chars_emitted);
  }
}

TEST(Generate, LiteralsAreMostlyForced) {
  GrammarBuilder b;
  b.Rule("s", Select("null", "true", "false"));
  Grammar g = b.Build("s");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenerateResult r = GenerateRandom(g, seed);
    EXPECT_EQ(r.stats.sampler_calls, 1u) << r.text;
    EXPECT_LE(SamplerCallRatio(r.stats), 0.25);
  }
}

TEST(Generate, BudgetExhaustionCarriesThePrefix) {
  Grammar g = *BuiltinGrammar("mermaid");
  GenerateOptions tight;
  tight.budget = 12;
  try {
    GenerateRandom(g, 1, tight);
    FAIL() << "no BudgetExhaustedError";
  } catch (const BudgetExhaustedError& e) {
    EXPECT_EQ(e.prefix().size(), 12u);
    EXPECT_EQ(e.prefix().rfind("flowchart ", 0), 0u);
    EXPECT_TRUE(IsPrefix(g, e.prefix()));
  }
}

TEST(Generate, AdversarialChooserStaysInside) {
  Grammar g = BracketsGrammar();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    AdversarialChooser chooser(seed);
    GenerateOptions options;
    options.budget = 10000;
    GenerateResult r = ConstrainedGenerate(g, &chooser, options);
    EXPECT_TRUE(oracle::BracketStack(r.text).member) << r.text;
  }
}

TEST(Generate, GroupedChooserStaysInside) {
  Grammar g = JsonGrammar();
  GenerateOptions options;
  options.budget = 100000;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GroupedRandomChooser chooser(seed);
    GenerateResult r = ConstrainedGenerate(g, &chooser, options);
    EXPECT_TRUE(IsMember(g, r.text)) << r.text;
  }
}

TEST(Generate, ChooserLeavingTheOptionsIsAnError) {
  class Rogue : public CharChooser {
   public:
    std::optional<char32_t> Choose(const CharOptions&) override { return U'x'; }
  };
  Rogue rogue;
  EXPECT_THROW(ConstrainedGenerate(BracketsGrammar(), &rogue), GenerationError);
}

TEST(Stats, RatioNeedsCharacters) {
  EXPECT_THROW(SamplerCallRatio(SamplerStats{}), Error);
  SamplerStats s{8, 2, 6};
  EXPECT_DOUBLE_EQ(SamplerCallRatio(s), 0.25);
  s += SamplerStats{2, 2, 0};
  EXPECT_EQ(s.chars_emitted, 10u);
  EXPECT_DOUBLE_EQ(SamplerCallRatio(s), 0.4);
}

}  // namespace
}  // namespace dslguide
