/*!
 *  Copyright (c) 2026 by Contributors
 * \file cli.cc
 */
#include "cli.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>

#include <CLI11.hpp>
#include <httplib.h>

#include "common.h"
#include "dslguide/unicode.h"
#include "experiments.h"
#include "remote_backend.h"
#include "service.h"

namespace dslguide {
namespace harness {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct GrammarArgs {
  std::string name;
  std::string file;

  void Add(CLI::App* app) {
    auto* by_name = app->add_option("--grammar", name, "built-in grammar name");
    auto* by_file = app->add_option("--grammar-file", file, "grammar document (JSON)");
    by_name->excludes(by_file);
  }

  Grammar Load() const {
    if (!file.empty()) return LoadGrammarFile(file);
    if (name.empty()) throw UnknownGrammarError("no grammar given; use --grammar or --grammar-file");
    return ResolveGrammar(name);
  }

  std::string Label() const { return file.empty() ? name : file; }
};

struct Format {
  std::string value = "text";

  void Add(CLI::App* app) {
    app->add_option("--format", value, "output format")->check(CLI::IsMember({"text", "json"}));
  }
  bool json() const { return value == "json"; }
};

void AddPolicy(CLI::App* app, DecayPolicy* policy) {
  app->add_option("--gamma", policy->gamma, "recursion decay factor in (0, 1]");
  app->add_option("--depth-cap", policy->depth_cap, "derivation depth forcing the shortest branches");
}

std::vector<std::vector<double>> LoadScript(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error("cannot open script file '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(file, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) throw Error("script file must hold an array of logit rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : doc) {
    if (!row.is_array()) throw Error("script file must hold an array of logit rows");
    rows.push_back(row.get<std::vector<double>>());
  }
  return rows;
}

std::size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err, std::istream& in) : out_(out), err_(err), in_(in) {}

  int Run(int argc, const char* const* argv);

 private:
  int Generate();
  int Validate();
  int Expect();
  int Mask();
  int Experiment();
  int Serve();

  void PrintVerdict(const Verdict& verdict);

  std::ostream& out_;
  std::ostream& err_;
  std::istream& in_;

  GrammarArgs grammar_;
  Format format_;
  bool significant_ = false;

  GenerateSpec spec_;
  std::size_t count_ = 1;
  bool no_shortcut_ = false;
  bool no_mask_ = false;
  std::string vocab_name_ = "ascii";
  std::string vocab_file_;

  bool whole_ = false;
  std::string prefix_;

  std::string experiment_;
  std::string backend_kind_ = "biased-closer";
  std::string script_file_;
  std::vector<int> ns_;
  std::string language_ = "english";
  std::size_t experiment_count_ = 0;
  std::uint64_t experiment_seed_ = 42;
  FuzzOptions fuzz_;

  int port_ = 0;
  std::string host_ = "0.0.0.0";
  int idle_minutes_ = 10;
};

int Cli::Run(int argc, const char* const* argv) {
  CLI::App app{"Grammar-guided generation and validation"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "sample strings from a grammar");
  grammar_.Add(generate);
  format_.Add(generate);
  generate->add_option("--sampler", spec_.sampler, "random, adversarial, grouped or backend")
      ->check(CLI::IsMember({"random", "adversarial", "grouped", "backend"}));
  generate->add_option("--backend", spec_.backend, "uniform, biased-closer or remote");
  generate->add_option("--backend-url", spec_.backend_url, "remote backend URL");
  generate->add_option("--vocab", vocab_name_, "built-in vocabulary for the backend sampler");
  generate->add_option("--vocab-file", vocab_file_, "vocabulary file for the backend sampler");
  generate->add_option("--seed", spec_.seed, "seed of the first output; output i uses seed + i");
  generate->add_option("--count", count_, "number of outputs")->check(CLI::PositiveNumber);
  generate->add_option("--budget", spec_.budget, "maximum characters per output");
  generate->add_option("--temperature", spec_.temperature, "backend sampling temperature");
  generate->add_option("--slope", spec_.slope, "biased-closer slope");
  generate->add_option("--midpoint", spec_.midpoint, "biased-closer midpoint");
  generate->add_option("--prompt", spec_.prompt, "backend prompt");
  generate->add_flag("--no-shortcut", no_shortcut_, "consult the sampler for forced moves too");
  generate->add_flag("--no-mask", no_mask_, "backend sampler without the token mask");
  AddPolicy(generate, &spec_.policy);

  auto* validate = app.add_subcommand("validate", "classify inputs read from stdin");
  grammar_.Add(validate);
  format_.Add(validate);
  validate->add_flag("--significant", significant_, "hide whitespace-only expectations");
  validate->add_flag("--whole", whole_, "treat stdin as one input and stream it");

  auto* expect = app.add_subcommand("expect", "expected next characters after a prefix");
  grammar_.Add(expect);
  format_.Add(expect);
  expect->add_flag("--significant", significant_, "hide whitespace-only expectations");
  expect->add_option("--prefix", prefix_, "prefix to feed first");

  auto* mask = app.add_subcommand("mask", "legal tokens after a prefix");
  grammar_.Add(mask);
  format_.Add(mask);
  mask->add_option("--prefix", prefix_, "prefix to feed first");
  auto* mask_vocab = mask->add_option("--vocab", vocab_name_, "built-in vocabulary");
  mask->add_option("--vocab-file", vocab_file_, "vocabulary file")->excludes(mask_vocab);

  auto* experiment = app.add_subcommand("experiment", "run an experiment and print its report");
  format_.Add(experiment);
  experiment->add_option("name", experiment_, "brackets, json-fuzz or sampling-ratio")
      ->required()
      ->check(CLI::IsMember({"brackets", "json-fuzz", "sampling-ratio"}));
  experiment->add_option("--seed", experiment_seed_, "corpus seed");
  experiment->add_option("--count", experiment_count_, "corpus size");
  experiment->add_option("--budget", fuzz_.budget, "maximum characters per document");
  experiment->add_option("--backend", backend_kind_, "uniform, biased-closer, scripted or remote");
  experiment->add_option("--backend-url", spec_.backend_url, "remote backend URL");
  experiment->add_option("--script", script_file_, "logit rows for the scripted backend");
  experiment->add_option("--slope", spec_.slope, "biased-closer slope");
  experiment->add_option("--midpoint", spec_.midpoint, "biased-closer midpoint");
  experiment->add_option("--n", ns_, "bracket depths")->delimiter(',');
  experiment->add_option("--language", language_, "bracket prompt language")
      ->check(CLI::IsMember({"english", "chinese"}));
  AddPolicy(experiment, &fuzz_.policy);

  auto* serve = app.add_subcommand("serve", "run the HTTP service (port from DSLGUIDE_PORT, default 8080)");
  serve->add_option("--port", port_, "port overriding DSLGUIDE_PORT");
  serve->add_option("--host", host_, "bind address");
  serve->add_option("--idle-timeout", idle_minutes_, "session idle timeout in minutes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return Generate();
    if (validate->parsed()) return Validate();
    if (expect->parsed()) return Expect();
    if (mask->parsed()) return Mask();
    if (experiment->parsed()) return Experiment();
    if (serve->parsed()) return Serve();
  } catch (const UnknownGrammarError& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GrammarError& e) {
    err_ << "grammar error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExhaustedError& e) {
    err_ << "error: " << e.what() << "\npartial: " << e.prefix() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int Cli::Generate() {
  Grammar grammar = grammar_.Load();
  spec_.forced_shortcut = !no_shortcut_;
  spec_.constrained = !no_mask_;
  std::optional<TokenVocabulary> vocab;
  if (!vocab_file_.empty()) {
    vocab = TokenVocabulary::LoadFile(vocab_file_);
  } else {
    spec_.vocab_id = vocab_name_;
  }
  SamplerStats total;
  std::size_t members = 0;
  std::uint64_t first_seed = spec_.seed;
  for (std::size_t i = 0; i < count_; ++i) {
    GenerateSpec spec = spec_;
    spec.seed = first_seed + i;
    GenerateOutcome outcome = RunGenerate(grammar, spec, vocab ? &*vocab : nullptr);
    total += outcome.stats;
    if (outcome.member) ++members;
    if (format_.json()) {
      OrderedJson line;
      line["text"] = outcome.text;
      line["member"] = outcome.member;
      line["seed"] = spec.seed;
      line["stats"] = StatsToJson(outcome.stats);
      out_ << line.dump() << "\n";
    } else {
      out_ << outcome.text << "\n";
    }
    out_.flush();
  }
  OrderedJson summary = StatsToJson(total);
  summary["outputs"] = count_;
  summary["members"] = members;
  err_ << "stats: " << summary.dump() << "\n";
  return kExitOk;
}

void Cli::PrintVerdict(const Verdict& verdict) {
  if (format_.json()) {
    out_ << VerdictToJson(verdict).dump() << "\n";
  } else {
    out_ << VerdictToText(verdict);
  }
  out_.flush();
}

int Cli::Validate() {
  Grammar grammar = grammar_.Load();
  if (!whole_) {
    std::string line;
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      PrintVerdict(ValidateText(grammar, DecodeUtf8(line), significant_));
    }
    if (in_.bad()) throw Error("failed reading standard input");
    return kExitOk;
  }
  Session session(grammar);
  std::string pending;
  std::size_t need = 0;
  char byte;
  while (in_.get(byte)) {
    if (pending.empty()) need = Utf8Length(static_cast<unsigned char>(byte));
    pending.push_back(byte);
    if (pending.size() < need) continue;
    std::u32string scalars = DecodeUtf8(pending);
    pending.clear();
    for (char32_t c : scalars) {
      if (!session.TryFeed(c)) {
        PrintVerdict(Verdict{Verdict::Kind::kError, session.Report(significant_)});
        return kExitOk;
      }
    }
  }
  if (in_.bad()) throw Error("failed reading standard input");
  if (!pending.empty()) DecodeUtf8(pending);
  Verdict verdict;
  verdict.kind = session.accepting() ? Verdict::Kind::kMember : Verdict::Kind::kPrefix;
  verdict.report = session.Report(significant_);
  PrintVerdict(verdict);
  return kExitOk;
}

int Cli::Expect() {
  Grammar grammar = grammar_.Load();
  Session session(grammar);
  for (char32_t c : DecodeUtf8(prefix_)) {
    if (!session.TryFeed(c)) {
      PrintVerdict(Verdict{Verdict::Kind::kError, session.Report(significant_)});
      return kExitFailure;
    }
  }
  CharSet expected = session.ExpectedNext(significant_);
  if (format_.json()) {
    OrderedJson doc;
    doc["expected"] = RangesToJson(expected);
    doc["rows"] = RowsToJson(ExpectedRows(expected));
    doc["accepting"] = session.accepting();
    doc["frames"] = session.Frames();
    out_ << doc.dump() << "\n";
  } else {
    out_ << session.Report(significant_).ToTable();
    if (session.accepting()) out_ << "(end of input allowed)\n";
  }
  return kExitOk;
}

int Cli::Mask() {
  Grammar grammar = grammar_.Load();
  TokenVocabulary vocab = [&]() {
    if (!vocab_file_.empty()) return TokenVocabulary::LoadFile(vocab_file_);
    auto builtin = BuiltinVocabulary(vocab_name_);
    if (!builtin) throw Error("unknown vocabulary '" + vocab_name_ + "'");
    return *builtin;
  }();
  Session session(grammar);
  for (char32_t c : DecodeUtf8(prefix_)) {
    if (!session.TryFeed(c)) break;
  }
  TokenMask mask = ComputeTokenMask(session, vocab);
  if (format_.json()) {
    out_ << MaskToJson(mask, vocab).dump() << "\n";
    return kExitOk;
  }
  if (mask.dead()) out_ << "(dead session)\n";
  for (std::int32_t id : mask.LegalIds()) {
    out_ << id << "\t" << (vocab.is_eos(id) ? std::string("!EOS") : EscapeToken(vocab.scalars(id)))
         << "\n";
  }
  return kExitOk;
}

int Cli::Experiment() {
  ExperimentReport report;
  if (experiment_ == "brackets") {
    TokenVocabulary vocab = BracketVocabulary();
    std::unique_ptr<Backend> backend;
    if (backend_kind_ == "remote") {
      backend = std::make_unique<RemoteBackend>(spec_.backend_url, "brackets", vocab.size());
    } else {
      MockOptions mock;
      mock.slope = spec_.slope;
      mock.midpoint = spec_.midpoint;
      if (!script_file_.empty()) mock.rows = LoadScript(script_file_);
      backend = MakeMockBackend(ParseMockKind(backend_kind_), vocab.Texts(), mock);
    }
    std::vector<int> ns = ns_;
    if (ns.empty()) {
      ns.resize(30);
      std::iota(ns.begin(), ns.end(), 1);
    }
    PromptLanguage language =
        language_ == "chinese" ? PromptLanguage::kChinese : PromptLanguage::kEnglish;
    report = RunBracketExperiment(backend.get(), vocab, ns, language);
  } else if (experiment_ == "json-fuzz") {
    fuzz_.seed = experiment_seed_;
    if (experiment_count_ > 0) fuzz_.count = experiment_count_;
    report = RunJsonFuzz(fuzz_);
  } else {
    std::size_t count = experiment_count_ > 0 ? experiment_count_ : 1000;
    report = RunSamplingRatio(count, experiment_seed_, fuzz_.policy);
  }
  if (format_.json()) {
    out_ << report.ToJson().dump(2) << "\n";
  } else {
    out_ << report.ToText();
  }
  return report.passed ? kExitOk : kExitFailure;
}

int Cli::Serve() {
  int port = port_ > 0 ? port_ : ServicePortFromEnv();
  ServiceOptions options;
  options.idle_timeout = std::chrono::minutes(idle_minutes_);
  Service service(options);
  httplib::Server server;
  service.Register(&server);
  err_ << "listening on " << host_ << ":" << port << "\n";
  err_.flush();
  if (!server.listen(host_, port)) throw Error("cannot listen on port " + std::to_string(port));
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
           std::istream& in) {
  Cli cli(out, err, in);
  return cli.Run(argc, argv);
}

}  // namespace harness
}  // namespace dslguide
