/*!
 *  Copyright (c) 2026 by Contributors
 * \file experiments.cc
 */
#include "experiments.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dslguide/error.h"
#include "dslguide/grammars.h"
#include "dslguide/unicode.h"
#include "json_reference.h"

namespace dslguide {
namespace harness {

namespace {

constexpr double kReferenceMeanLength = 17.86;
constexpr double kReferenceMaxLength = 2136;
constexpr std::size_t kMaxRecordedFailures = 10;

struct Bucket {
  std::size_t lo;
  std::size_t hi;
};

const std::vector<Bucket>& LengthBuckets() {
  static const std::vector<Bucket> buckets = {{1, 4},   {5, 8},   {9, 16},
                                              {17, 32}, {33, 64}, {65, SIZE_MAX}};
  return buckets;
}

std::string BucketLabel(const Bucket& b) {
  if (b.hi == SIZE_MAX) return std::to_string(b.lo) + "+";
  return std::to_string(b.lo) + "-" + std::to_string(b.hi);
}

std::int32_t FindToken(const TokenVocabulary& vocab, std::u32string_view text) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto id = static_cast<std::int32_t>(i);
    if (!vocab.is_eos(id) && vocab.scalars(id) == text) return id;
  }
  throw Error("vocabulary lacks the token '" + EncodeUtf8(text) + "'");
}

}  // namespace

OrderedJson ExperimentReport::ToJson() const {
  OrderedJson out;
  out["experiment"] = name;
  out["parameters"] = parameters;
  out["seed"] = seed;
  out["points"] = points;
  out["summary"] = summary;
  out["passed"] = passed;
  out["failures"] = failures;
  return out;
}

std::string ExperimentReport::ToText() const {
  std::ostringstream os;
  os << "experiment " << name << " (seed " << seed << ")\n";
  for (const auto& [key, value] : parameters.items()) os << "  " << key << " = " << value.dump() << "\n";
  for (const auto& point : points) os << "  " << point.dump() << "\n";
  for (const auto& [key, value] : summary.items()) os << "  " << key << ": " << value.dump() << "\n";
  for (const auto& f : failures) os << "  failure: " << f << "\n";
  os << (passed ? "PASSED" : "FAILED") << "\n";
  return os.str();
}

TokenVocabulary BracketVocabulary() {
  return TokenVocabulary::FromTokens({U"(", U")", U"()", U"((", U""}, 4);
}

TokenVocabulary AsciiVocabulary() {
  std::vector<std::u32string> tokens;
  tokens.push_back(U"\t");
  tokens.push_back(U"\n");
  tokens.push_back(U"\r");
  for (char32_t c = 0x20; c < 0x7F; ++c) tokens.push_back(std::u32string(1, c));
  tokens.push_back(U"");
  auto eos = static_cast<std::int32_t>(tokens.size() - 1);
  return TokenVocabulary::FromTokens(std::move(tokens), eos);
}

std::optional<TokenVocabulary> BuiltinVocabulary(const std::string& name) {
  if (name == "brackets") return BracketVocabulary();
  if (name == "ascii") return AsciiVocabulary();
  return std::nullopt;
}

std::string BracketPrompt(PromptLanguage language) {
  if (language == PromptLanguage::kChinese) {
    return "下面的字符串只由 ( 和 ) 组成。合法的括号串里，每个左括号右边都有唯一一个与它配对的右括号，"
           "不同的左括号配对不同的右括号。合法的括号串：```";
  }
  return "The following string uses only the characters ( and ). In a valid bracket string, each "
         "opening bracket is matched by exactly one closing bracket somewhere to its right, and no "
         "two opening brackets share a closing bracket. Valid bracket string: ```";
}

std::string BracketContext(PromptLanguage language, int n) {
  return BracketPrompt(language) + "\n" + std::string(static_cast<std::size_t>(n), '(') +
         std::string(static_cast<std::size_t>(n), ')');
}

ExperimentReport RunBracketExperiment(Backend* backend, const TokenVocabulary& vocab,
                                      const std::vector<int>& ns, PromptLanguage language) {
  ExperimentReport report;
  report.name = "brackets";
  report.parameters["n"] = ns;
  report.parameters["prompt"] = language == PromptLanguage::kEnglish ? "english" : "chinese";
  std::int32_t open = FindToken(vocab, U"(");
  std::int32_t close = FindToken(vocab, U")");
  std::vector<int> sorted(ns);
  std::sort(sorted.begin(), sorted.end());
  std::optional<int> over_half;
  std::optional<int> over_95;
  double previous = -1.0;
  bool monotone = true;
  for (int n : sorted) {
    OrderedJson point;
    point["n"] = n;
    point["length"] = 2 * n;
    try {
      std::vector<double> logits = backend->Logits(BackendRequest{BracketContext(language, n), {}});
      if (logits.size() != vocab.size()) {
        throw BackendError("backend returned " + std::to_string(logits.size()) + " logits");
      }
      std::vector<double> pair = Softmax({logits[open], logits[close]});
      double rate = pair[1];
      point["error_rate"] = rate;
      if (rate > 0.5 && !over_half) over_half = n;
      if (rate > 0.95 && !over_95) over_95 = n;
      if (rate + 1e-12 < previous) monotone = false;
      previous = rate;
    } catch (const Error& e) {
      point["error"] = e.what();
    }
    report.points.push_back(point);
  }
  report.summary["first_n_over_50"] = over_half ? OrderedJson(*over_half) : OrderedJson(nullptr);
  report.summary["first_n_over_95"] = over_95 ? OrderedJson(*over_95) : OrderedJson(nullptr);
  report.summary["monotone"] = monotone;
  return report;
}

std::uint64_t DocumentSeed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExperimentReport RunJsonFuzz(const FuzzOptions& options) {
  if (options.count == 0) throw Error("json-fuzz needs a count of at least 1");
  ExperimentReport report;
  report.name = "json-fuzz";
  report.seed = options.seed;
  report.parameters["count"] = options.count;
  report.parameters["budget"] = options.budget;
  report.parameters["gamma"] = options.policy.gamma;
  report.parameters["depth_cap"] = options.policy.depth_cap;
  Grammar grammar = JsonGrammar();
  GenerateOptions gen;
  gen.budget = options.budget;
  std::size_t succeeded = 0;
  std::size_t total_length = 0;
  std::size_t max_length = 0;
  std::uint64_t cap_hits = 0;
  SamplerStats stats;
  auto record = [&](std::string failure) {
    report.passed = false;
    if (report.failures.size() < kMaxRecordedFailures) report.failures.push_back(std::move(failure));
  };
  for (std::size_t i = 0; i < options.count; ++i) {
    GenerateResult result;
    try {
      RandomChooser random(DocumentSeed(options.seed, i), options.policy);
      DerivationChooser chooser(grammar, &random);
      result = ConstrainedGenerate(grammar, &chooser, gen);
      cap_hits += random.depth_cap_hits();
    } catch (const Error& e) {
      record("document " + std::to_string(i) + ": " + e.what());
      continue;
    }
    stats += result.stats;
    total_length += result.stats.chars_emitted;
    max_length = std::max<std::size_t>(max_length, result.stats.chars_emitted);
    JsonCheck check = CheckJsonDocument(result.text);
    if (check.ok) {
      ++succeeded;
    } else {
      record("document " + std::to_string(i) + " " + nlohmann::json(result.text).dump() + ": " +
             check.detail);
    }
  }
  report.summary["documents"] = options.count;
  report.summary["parsed"] = succeeded;
  report.summary["success_rate"] = static_cast<double>(succeeded) / static_cast<double>(options.count);
  report.summary["mean_length"] = static_cast<double>(total_length) / static_cast<double>(options.count);
  report.summary["max_length"] = max_length;
  report.summary["reference_mean_length"] = kReferenceMeanLength;
  report.summary["reference_max_length"] = kReferenceMaxLength;
  report.summary["depth_cap_hits"] = cap_hits;
  report.summary["sampler_call_ratio"] =
      stats.chars_emitted > 0 ? SamplerCallRatio(stats) : 0.0;
  return report;
}

ExperimentReport RunSamplingRatio(std::size_t count, std::uint64_t seed, DecayPolicy policy) {
  if (count == 0) throw Error("sampling-ratio needs a count of at least 1");
  ExperimentReport report;
  report.name = "sampling-ratio";
  report.seed = seed;
  report.parameters["count"] = count;
  report.parameters["gamma"] = policy.gamma;
  report.parameters["depth_cap"] = policy.depth_cap;
  Grammar grammar = JsonGrammar();
  const auto& buckets = LengthBuckets();
  struct Acc {
    std::size_t docs = 0;
    double on = 0.0;
    double off = 0.0;
  };
  std::vector<Acc> per_bucket(buckets.size());
  Acc all;
  Acc literal;
  SamplerStats pooled;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t doc_seed = DocumentSeed(seed, i);
    GenerateOptions with;
    GenerateOptions without;
    without.forced_shortcut = false;
    GenerateResult on = GenerateRandom(grammar, doc_seed, with, policy);
    GenerateResult off = GenerateRandom(grammar, doc_seed, without, policy);
    if (on.text != off.text) {
      ++mismatches;
      report.passed = false;
      if (report.failures.size() < kMaxRecordedFailures) {
        report.failures.push_back("document " + std::to_string(i) +
                                  " differs with the shortcut disabled");
      }
    }
    pooled += on.stats;
    double r_on = SamplerCallRatio(on.stats);
    double r_off = SamplerCallRatio(off.stats);
    std::size_t length = on.stats.chars_emitted;
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      if (length >= buckets[b].lo && length <= buckets[b].hi) {
        ++per_bucket[b].docs;
        per_bucket[b].on += r_on;
        per_bucket[b].off += r_off;
      }
    }
    ++all.docs;
    all.on += r_on;
    all.off += r_off;
    if (on.text == "null" || on.text == "true" || on.text == "false") {
      ++literal.docs;
      literal.on += r_on;
      literal.off += r_off;
    }
  }
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    if (per_bucket[b].docs == 0) continue;
    OrderedJson point;
    point["length"] = BucketLabel(buckets[b]);
    point["documents"] = per_bucket[b].docs;
    point["ratio_shortcut"] = per_bucket[b].on / static_cast<double>(per_bucket[b].docs);
    point["ratio_no_shortcut"] = per_bucket[b].off / static_cast<double>(per_bucket[b].docs);
    report.points.push_back(point);
  }
  report.summary["mean_ratio_shortcut"] = all.on / static_cast<double>(all.docs);
  report.summary["mean_ratio_no_shortcut"] = all.off / static_cast<double>(all.docs);
  report.summary["pooled_ratio_shortcut"] = SamplerCallRatio(pooled);
  report.summary["literal_documents"] = literal.docs;
  report.summary["literal_mean_ratio_shortcut"] =
      literal.docs > 0 ? OrderedJson(literal.on / static_cast<double>(literal.docs))
                       : OrderedJson(nullptr);
  report.summary["shortcut_mismatches"] = mismatches;
  return report;
}

}  // namespace harness
}  // namespace dslguide
