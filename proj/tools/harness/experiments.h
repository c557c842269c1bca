/*!
 *  Copyright (c) 2026 by Contributors
 * \file experiments.h
 * \brief Experiment runners: bracket completion error curves, JSON fuzzing and sampler savings.
 */
#ifndef DSLGUIDE_HARNESS_EXPERIMENTS_H_
#define DSLGUIDE_HARNESS_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dslguide/backend.h"
#include "dslguide/sampling.h"
#include "dslguide/token.h"

namespace dslguide {
namespace harness {

using OrderedJson = nlohmann::ordered_json;

struct ExperimentReport {
  std::string name;
  OrderedJson parameters = OrderedJson::object();
  std::uint64_t seed = 0;
  /*! \brief Per-point metrics, e.g. n -> error rate or length bucket -> ratio. */
  OrderedJson points = OrderedJson::array();
  /*! \brief Corpus statistics and derived summary values. */
  OrderedJson summary = OrderedJson::object();
  bool passed = true;
  std::vector<std::string> failures;

  OrderedJson ToJson() const;
  std::string ToText() const;
};

/*! \brief The five-entry vocabulary "(", ")", "()", "((", EOS. */
TokenVocabulary BracketVocabulary();
/*! \brief Printable ASCII plus tab, newline and carriage return, followed by EOS. */
TokenVocabulary AsciiVocabulary();
/*! \brief Built-in vocabulary by name ("brackets", "ascii"), or nullopt. */
std::optional<TokenVocabulary> BuiltinVocabulary(const std::string& name);

enum class PromptLanguage : std::uint8_t { kEnglish, kChinese };

/*! \brief Instruction text preceding the bracket string. */
std::string BracketPrompt(PromptLanguage language);

/*! \brief prompt + '\n' + '(' * n + ')' * n. */
std::string BracketContext(PromptLanguage language, int n);

/*!
 * \brief For each n, scores the balanced string l^n r^n and records p(')') within {'(', ')'}
 * as the error rate. Reports the first n whose rate exceeds 50% and 95%. Backend failures are
 * recorded per point and the point is skipped.
 */
ExperimentReport RunBracketExperiment(Backend* backend, const TokenVocabulary& vocab,
                                      const std::vector<int>& ns,
                                      PromptLanguage language = PromptLanguage::kEnglish);

struct FuzzOptions {
  std::size_t count = 100000;
  std::uint64_t seed = 42;
  std::size_t budget = 100000;
  DecayPolicy policy;
};

/*!
 * \brief Generates random JSON documents and checks each with the reference parser, a canonical
 * round trip and nlohmann::json. Throws Error for count 0.
 */
ExperimentReport RunJsonFuzz(const FuzzOptions& options);

/*!
 * \brief Generates random JSON documents with and without the forced-move shortcut and reports
 * the mean sampler call ratio per length bucket, overall and for literal-only documents.
 */
ExperimentReport RunSamplingRatio(std::size_t count, std::uint64_t seed, DecayPolicy policy = {});

/*! \brief Seed of document i in a corpus seeded with `seed`. */
std::uint64_t DocumentSeed(std::uint64_t seed, std::size_t index);

}  // namespace harness
}  // namespace dslguide

#endif  // DSLGUIDE_HARNESS_EXPERIMENTS_H_
