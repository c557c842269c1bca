/*!
 *  Copyright (c) 2026 by Contributors
 * \file common.cc
 */
#include "common.h"

#include <fstream>
#include <memory>
#include <sstream>

#include "dslguide/grammar_ast.h"
#include "dslguide/grammars.h"
#include "dslguide/unicode.h"
#include "experiments.h"
#include "remote_backend.h"

namespace dslguide {
namespace harness {

Grammar ResolveGrammar(const std::string& name) {
  if (auto grammar = BuiltinGrammar(name)) return *grammar;
  throw UnknownGrammarError("unknown grammar '" + name + "'");
}

Grammar LoadGrammarFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GrammarError("cannot open grammar file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadGrammarAst(buffer.str());
}

GenerateOutcome RunGenerate(const Grammar& grammar, const GenerateSpec& spec,
                            const TokenVocabulary* vocab) {
  GenerateOptions options;
  options.budget = spec.budget;
  options.forced_shortcut = spec.forced_shortcut;
  GenerateOutcome outcome;
  if (spec.sampler == "backend") {
    std::optional<TokenVocabulary> builtin;
    if (vocab == nullptr) {
      builtin = BuiltinVocabulary(spec.vocab_id);
      if (!builtin) throw Error("unknown vocabulary '" + spec.vocab_id + "'");
      vocab = &*builtin;
    }
    std::unique_ptr<Backend> backend;
    if (spec.backend == "remote") {
      backend = std::make_unique<RemoteBackend>(spec.backend_url, spec.vocab_id, vocab->size());
    } else {
      MockOptions mock;
      mock.slope = spec.slope;
      mock.midpoint = spec.midpoint;
      MockKind kind = ParseMockKind(spec.backend);
      if (kind == MockKind::kScripted) throw Error("the scripted backend is not available here");
      backend = MakeMockBackend(kind, vocab->Texts(), mock);
    }
    DecodeOptions decode;
    decode.use_mask = spec.constrained;
    decode.forced_shortcut = spec.forced_shortcut;
    decode.budget = spec.budget;
    decode.temperature = spec.temperature;
    decode.seed = spec.seed;
    decode.prompt = spec.prompt;
    DecodeResult result = DecodeLoop(grammar, *vocab, backend.get(), decode);
    outcome.text = std::move(result.text);
    outcome.stats = result.stats;
    outcome.member = result.member;
    return outcome;
  }
  GenerateResult result;
  if (spec.sampler == "random") {
    result = GenerateRandom(grammar, spec.seed, options, spec.policy);
  } else if (spec.sampler == "adversarial") {
    AdversarialChooser chooser(spec.seed);
    result = ConstrainedGenerate(grammar, &chooser, options);
  } else if (spec.sampler == "grouped") {
    GroupedRandomChooser chooser(spec.seed);
    result = ConstrainedGenerate(grammar, &chooser, options);
  } else {
    throw Error("unknown sampler '" + spec.sampler + "'");
  }
  outcome.text = std::move(result.text);
  outcome.stats = result.stats;
  outcome.member = true;
  return outcome;
}

OrderedJson StatsToJson(const SamplerStats& stats) {
  OrderedJson out;
  out["chars_emitted"] = stats.chars_emitted;
  out["sampler_calls"] = stats.sampler_calls;
  out["forced_moves"] = stats.forced_moves;
  out["sampler_call_ratio"] =
      stats.chars_emitted > 0 ? OrderedJson(SamplerCallRatio(stats)) : OrderedJson(nullptr);
  return out;
}

Verdict ValidateText(const Grammar& grammar, std::u32string_view text, bool significant) {
  Session session(grammar);
  for (char32_t c : text) {
    if (!session.TryFeed(c)) break;
  }
  Verdict verdict;
  if (!session.alive()) {
    verdict.kind = Verdict::Kind::kError;
    verdict.report = session.Report(significant);
    return verdict;
  }
  verdict.kind = session.accepting() ? Verdict::Kind::kMember : Verdict::Kind::kPrefix;
  verdict.report = session.Report(significant);
  return verdict;
}

const char* VerdictName(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kMember:
      return "member";
    case Verdict::Kind::kPrefix:
      return "prefix";
    case Verdict::Kind::kError:
      return "error";
  }
  return "error";
}

OrderedJson RowsToJson(const std::vector<ExpectedRow>& rows) {
  OrderedJson out = OrderedJson::array();
  for (const auto& row : rows) {
    out.push_back({{"value", row.value},
                   {"type", row.type == ExpectedRow::Type::kChar ? "Char" : "Range"},
                   {"lo", static_cast<std::uint32_t>(row.lo)},
                   {"hi", static_cast<std::uint32_t>(row.hi)}});
  }
  return out;
}

OrderedJson RangesToJson(const CharSet& set) {
  OrderedJson out = OrderedJson::array();
  for (const auto& r : set.ranges()) {
    out.push_back({{"lo", static_cast<std::uint32_t>(r.lo)}, {"hi", static_cast<std::uint32_t>(r.hi)}});
  }
  return out;
}

OrderedJson ReportToJson(const ErrorReport& report) {
  OrderedJson out;
  out["alive"] = report.alive;
  out["position"] = report.position;
  out["found"] = report.found ? OrderedJson(EncodeUtf8(*report.found)) : OrderedJson(nullptr);
  out["expected"] = RowsToJson(report.expected);
  out["end_allowed"] = report.end_allowed;
  out["frames"] = report.frames;
  return out;
}

OrderedJson VerdictToJson(const Verdict& verdict) {
  OrderedJson out;
  out["verdict"] = VerdictName(verdict.kind);
  OrderedJson report = ReportToJson(verdict.report);
  for (auto& [key, value] : report.items()) out[key] = value;
  return out;
}

std::string VerdictToText(const Verdict& verdict) {
  std::ostringstream os;
  switch (verdict.kind) {
    case Verdict::Kind::kMember:
      os << "member\n";
      return os.str();
    case Verdict::Kind::kPrefix:
      os << "prefix\n";
      break;
    case Verdict::Kind::kError:
      os << "error at position " << verdict.report.position;
      if (verdict.report.found) os << ": found " << DescribeScalar(*verdict.report.found);
      os << "\n";
      break;
  }
  os << verdict.report.ToTable();
  return os.str();
}

OrderedJson MaskToJson(const TokenMask& mask, const TokenVocabulary& vocab) {
  OrderedJson out;
  OrderedJson tokens = OrderedJson::array();
  std::vector<std::int32_t> legal = mask.LegalIds();
  for (std::int32_t id : legal) {
    tokens.push_back(vocab.is_eos(id) ? std::string("!EOS") : EscapeToken(vocab.scalars(id)));
  }
  out["legal"] = legal;
  out["tokens"] = std::move(tokens);
  out["count"] = mask.count();
  out["eos_legal"] = vocab.eos().has_value() && mask.Test(*vocab.eos());
  out["dead"] = mask.dead();
  return out;
}

}  // namespace harness
}  // namespace dslguide
