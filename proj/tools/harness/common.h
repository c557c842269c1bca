/*!
 *  Copyright (c) 2026 by Contributors
 * \file common.h
 * \brief Pieces shared by the CLI and the HTTP service: grammar lookup, one-shot generation and
 * validation verdicts.
 */
#ifndef DSLGUIDE_HARNESS_COMMON_H_
#define DSLGUIDE_HARNESS_COMMON_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dslguide/error.h"
#include "dslguide/grammar.h"
#include "dslguide/sampling.h"
#include "dslguide/session.h"
#include "dslguide/token.h"

namespace dslguide {
namespace harness {

using OrderedJson = nlohmann::ordered_json;

class UnknownGrammarError : public Error {
 public:
  using Error::Error;
};

/*! \brief Built-in grammar by name. Throws UnknownGrammarError. */
Grammar ResolveGrammar(const std::string& name);
/*! \brief Loads a grammar document from a file. Throws GrammarError. */
Grammar LoadGrammarFile(const std::string& path);

struct GenerateSpec {
  /*! \brief random, adversarial, grouped or backend. */
  std::string sampler = "random";
  std::uint64_t seed = 0;
  std::size_t budget = 100000;
  bool forced_shortcut = true;
  DecayPolicy policy;
  /*! \brief Backend sampler: uniform, biased-closer or remote. */
  std::string backend = "uniform";
  std::string backend_url;
  std::string vocab_id = "ascii";
  double slope = 1.0;
  double midpoint = 8.0;
  /*! \brief Backend sampler: apply the hard token mask. */
  bool constrained = true;
  double temperature = 1.0;
  std::string prompt;
};

struct GenerateOutcome {
  std::string text;
  SamplerStats stats;
  bool member = false;
};

/*!
 * \brief One generation run. The backend sampler uses `vocab` when given and the built-in
 * vocabulary named by spec.vocab_id otherwise. Throws Error subclasses on failure.
 */
GenerateOutcome RunGenerate(const Grammar& grammar, const GenerateSpec& spec,
                            const TokenVocabulary* vocab = nullptr);

OrderedJson StatsToJson(const SamplerStats& stats);

struct Verdict {
  enum class Kind : std::uint8_t { kMember, kPrefix, kError };
  Kind kind = Kind::kPrefix;
  ErrorReport report;
};

/*! \brief Feeds `text` into a fresh session and classifies it. */
Verdict ValidateText(const Grammar& grammar, std::u32string_view text, bool significant);

const char* VerdictName(Verdict::Kind kind);
OrderedJson RowsToJson(const std::vector<ExpectedRow>& rows);
/*! \brief [{lo, hi}] ranges of a set. */
OrderedJson RangesToJson(const CharSet& set);
OrderedJson ReportToJson(const ErrorReport& report);
OrderedJson VerdictToJson(const Verdict& verdict);
std::string VerdictToText(const Verdict& verdict);
/*! \brief {legal, tokens, count, eos_legal, dead} with tokens in the vocabulary file escaping. */
OrderedJson MaskToJson(const TokenMask& mask, const TokenVocabulary& vocab);

}  // namespace harness
}  // namespace dslguide

#endif  // DSLGUIDE_HARNESS_COMMON_H_
