/*!
 *  Copyright (c) 2026 by Contributors
 * \file bench_main.cc
 * \brief Throughput of session feeds, token masks, random generation and the decode loop.
 */
#include <benchmark/benchmark.h>

#include "dslguide/backend.h"
#include "dslguide/grammars.h"
#include "dslguide/sampling.h"
#include "dslguide/session.h"
#include "dslguide/token.h"
#include "experiments.h"

namespace {

using namespace dslguide;

const std::string& JsonDocument() {
  static const std::string doc = R"({"name": "widget", "tags": ["a", "b", "c"], "size": {"w": 12.5,
  "h": -3e2}, "ok": true, "parts": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], "note": null})";
  return doc;
}

void BM_SessionFeedJson(benchmark::State& state) {
  Grammar g = JsonGrammar();
  for (auto _ : state) {
    Session s(g);
    s.FeedText(JsonDocument());
    benchmark::DoNotOptimize(s.accepting());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * JsonDocument().size()));
}
BENCHMARK(BM_SessionFeedJson);

void BM_SessionNestedBrackets(benchmark::State& state) {
  Grammar g = BracketsGrammar();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::string text = std::string(n, '(') + std::string(n, ')');
  for (auto _ : state) {
    Session s(g);
    s.FeedText(text);
    benchmark::DoNotOptimize(s.accepting());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SessionNestedBrackets)->RangeMultiplier(2)->Range(64, 2048)->Complexity();

void BM_ExpectedSet(benchmark::State& state) {
  Session s(JsonGrammar());
  s.FeedText("{ \"key\": [1, {\"a\": 0");
  for (auto _ : state) benchmark::DoNotOptimize(s.ExpectedNext(true));
}
BENCHMARK(BM_ExpectedSet);

void BM_TokenMaskAscii(benchmark::State& state) {
  Session s(JsonGrammar());
  s.FeedText("{ \"key\": [1, ");
  TokenVocabulary vocab = harness::AsciiVocabulary();
  for (auto _ : state) benchmark::DoNotOptimize(ComputeTokenMask(s, vocab).count());
}
BENCHMARK(BM_TokenMaskAscii);

void BM_GenerateRandomJson(benchmark::State& state) {
  Grammar g = JsonGrammar();
  std::uint64_t seed = 0;
  std::uint64_t chars = 0;
  for (auto _ : state) {
    GenerateResult r = GenerateRandom(g, seed++);
    chars += r.stats.chars_emitted;
  }
  state.counters["chars_per_doc"] =
      benchmark::Counter(static_cast<double>(chars), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_GenerateRandomJson);

void BM_DecodeBracketsMasked(benchmark::State& state) {
  Grammar g = BracketsGrammar();
  TokenVocabulary vocab = harness::BracketVocabulary();
  auto backend = MakeMockBackend(MockKind::kBiasedCloser, vocab.Texts());
  DecodeOptions options;
  for (auto _ : state) {
    DecodeResult r = DecodeLoop(g, vocab, backend.get(), options);
    benchmark::DoNotOptimize(r.member);
    ++options.seed;
  }
}
BENCHMARK(BM_DecodeBracketsMasked);

}  // namespace

BENCHMARK_MAIN();
