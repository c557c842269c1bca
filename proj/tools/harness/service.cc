/*!
 *  Copyright (c) 2026 by Contributors
 * \file service.cc
 */
#include "service.h"

#include <cstdlib>
#include <vector>

#include <httplib.h>

#include "dslguide/grammar_ast.h"
#include "dslguide/grammars.h"
#include "dslguide/unicode.h"
#include "experiments.h"

namespace dslguide {
namespace harness {

namespace {

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& message, OrderedJson extra = OrderedJson::object())
      : std::runtime_error(message), status_(status), extra_(std::move(extra)) {}
  int status() const { return status_; }
  const OrderedJson& extra() const { return extra_; }

 private:
  int status_;
  OrderedJson extra_;
};

HttpResponse Ok(OrderedJson body) { return HttpResponse{200, std::move(body)}; }

std::vector<std::string> SplitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string::npos) next = path.size();
    if (next > pos) parts.push_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

const OrderedJson* Optional(const OrderedJson& request, const char* key) {
  auto it = request.find(key);
  if (it == request.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string StringField(const OrderedJson& request, const char* key, const std::string& fallback) {
  const OrderedJson* v = Optional(request, key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) throw HttpError(400, std::string("\"") + key + "\" must be a string");
  return v->get<std::string>();
}

bool BoolField(const OrderedJson& request, const char* key, bool fallback) {
  const OrderedJson* v = Optional(request, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) throw HttpError(400, std::string("\"") + key + "\" must be a boolean");
  return v->get<bool>();
}

double NumberField(const OrderedJson& request, const char* key, double fallback) {
  const OrderedJson* v = Optional(request, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) throw HttpError(400, std::string("\"") + key + "\" must be a number");
  return v->get<double>();
}

std::uint64_t UintField(const OrderedJson& request, const char* key, std::uint64_t fallback) {
  const OrderedJson* v = Optional(request, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
    throw HttpError(400, std::string("\"") + key + "\" must be a nonnegative integer");
  }
  return v->get<std::uint64_t>();
}

std::u32string TextField(const OrderedJson& request, const char* key) {
  const OrderedJson* v = Optional(request, key);
  if (v == nullptr || !v->is_string()) {
    throw HttpError(400, std::string("\"") + key + "\" must be a string");
  }
  try {
    return DecodeUtf8(v->get<std::string>());
  } catch (const Error& e) {
    throw HttpError(400, e.what());
  }
}

bool QueryFlag(const Service::Query& query, const char* key) {
  auto it = query.find(key);
  if (it == query.end()) return false;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0" || it->second.empty()) return false;
  throw HttpError(400, std::string("query parameter '") + key + "' must be true or false");
}

struct ResolvedGrammar {
  Grammar grammar;
  std::string name;
};

ResolvedGrammar GrammarFromRequest(const OrderedJson& request) {
  std::optional<std::string> forced;
  if (const OrderedJson* format = Optional(request, "response_format")) {
    if (!format->is_object() || !format->contains("type") || !(*format)["type"].is_string()) {
      throw HttpError(400, "\"response_format\" must be an object with a string \"type\"");
    }
    std::string type = (*format)["type"].get<std::string>();
    if (type == "json_object") {
      forced = "json";
    } else if (type != "text") {
      throw HttpError(400, "unsupported response_format type '" + type + "'");
    }
  }
  try {
    if (const OrderedJson* ast = Optional(request, "grammar_ast")) {
      if (forced) throw HttpError(400, "\"grammar_ast\" conflicts with a json_object response_format");
      std::string document = ast->is_string() ? ast->get<std::string>() : ast->dump();
      return {LoadGrammarAst(document), "custom"};
    }
    if (const OrderedJson* name = Optional(request, "grammar")) {
      if (!name->is_string()) throw HttpError(400, "\"grammar\" must be a string");
      std::string n = name->get<std::string>();
      if (forced && *forced != n) throw HttpError(400, "\"grammar\" conflicts with the response_format");
      return {ResolveGrammar(n), n};
    }
  } catch (const UnknownGrammarError& e) {
    throw HttpError(422, e.what());
  } catch (const GrammarError& e) {
    throw HttpError(422, e.what());
  }
  if (forced) return {ResolveGrammar(*forced), *forced};
  throw HttpError(400, "request names no grammar");
}

const char* StatusName(InstructionKind kind) {
  switch (kind) {
    case InstructionKind::kExpect:
      return "accepted";
    case InstructionKind::kError:
      return "rejected";
    case InstructionKind::kEof:
      return "eof";
  }
  return "rejected";
}

OrderedJson InstructionToJson(const Instruction& instruction) {
  OrderedJson out;
  out["status"] = StatusName(instruction.kind);
  out["expected"] = RangesToJson(instruction.expected);
  out["accepting"] = instruction.accepting;
  out["position"] = instruction.position;
  out["frames"] = instruction.frames;
  if (instruction.found) out["found"] = EncodeUtf8(*instruction.found);
  return out;
}

TokenVocabulary VocabFromRequest(const OrderedJson& request) {
  if (const OrderedJson* text = Optional(request, "vocab_text")) {
    if (!text->is_string()) throw HttpError(400, "\"vocab_text\" must be a string");
    try {
      return TokenVocabulary::Parse(text->get<std::string>());
    } catch (const VocabError& e) {
      throw HttpError(400, e.what());
    }
  }
  std::string name = StringField(request, "vocab", "ascii");
  auto vocab = BuiltinVocabulary(name);
  if (!vocab) throw HttpError(422, "unknown vocabulary '" + name + "'");
  return *vocab;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

std::chrono::steady_clock::time_point Service::Now() const {
  return options_.clock ? options_.clock() : std::chrono::steady_clock::now();
}

std::size_t Service::ExpireIdle() {
  auto now = Now();
  std::lock_guard<std::mutex> lock(table_mutex_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle;
    {
      std::lock_guard<std::mutex> entry_lock(it->second->mutex);
      idle = now - it->second->last_used > options_.idle_timeout;
    }
    if (idle) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t Service::num_sessions() const {
  std::lock_guard<std::mutex> lock(table_mutex_);
  return sessions_.size();
}

std::shared_ptr<Service::Entry> Service::Find(const std::string& id) {
  std::lock_guard<std::mutex> lock(table_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError(404, "unknown session '" + id + "'");
  return it->second;
}

std::string Service::AddSession(std::unique_ptr<Session> session, std::string grammar_name) {
  auto entry = std::make_shared<Entry>();
  entry->session = std::move(session);
  entry->grammar_name = std::move(grammar_name);
  entry->last_used = Now();
  std::lock_guard<std::mutex> lock(table_mutex_);
  entry->id = "s" + std::to_string(next_id_++);
  sessions_[entry->id] = entry;
  return entry->id;
}

HttpResponse Service::Handle(const std::string& method, const std::string& path,
                             const Query& query, const std::string& body) {
  ExpireIdle();
  try {
    return Route(method, path, query, body);
  } catch (const HttpError& e) {
    OrderedJson out = e.extra();
    out["error"] = e.what();
    return HttpResponse{e.status(), std::move(out)};
  } catch (const BackendError& e) {
    return HttpResponse{502, OrderedJson{{"error", e.what()}}};
  } catch (const ThreadLimitError& e) {
    return HttpResponse{422, OrderedJson{{"error", e.what()}}};
  } catch (const std::exception& e) {
    return HttpResponse{500, OrderedJson{{"error", e.what()}}};
  }
}

HttpResponse Service::Route(const std::string& method, const std::string& path, const Query& query,
                            const std::string& body) {
  OrderedJson request = OrderedJson::object();
  if (method == "POST" && !body.empty()) {
    request = OrderedJson::parse(body, nullptr, false);
    if (request.is_discarded()) throw HttpError(400, "body is not valid JSON");
    if (!request.is_object()) throw HttpError(400, "body must be a JSON object");
  }
  std::vector<std::string> parts = SplitPath(path);
  if (parts.size() == 1 && parts[0] == "grammars" && method == "GET") {
    return Ok(OrderedJson{{"grammars", BuiltinGrammarNames()}});
  }
  if (!parts.empty() && parts[0] == "sessions") {
    if (parts.size() == 1 && method == "POST") return CreateSession(request);
    if (parts.size() == 2 || parts.size() == 3) {
      return SessionRoute(method, parts[1], parts.size() == 3 ? parts[2] : "", query, request);
    }
  }
  if (parts.size() == 1 && method == "POST") {
    if (parts[0] == "generate") return Generate(request);
    if (parts[0] == "validate") return Validate(request);
    if (parts[0] == "mask") return Mask(request);
  }
  if (parts.size() == 2 && parts[0] == "backend" && parts[1] == "logits" && method == "POST") {
    return BackendLogits(request);
  }
  throw HttpError(404, "no route for " + method + " " + path);
}

HttpResponse Service::CreateSession(const OrderedJson& request) {
  ResolvedGrammar resolved = GrammarFromRequest(request);
  SessionOptions session_options;
  session_options.thread_cap = UintField(request, "thread_cap", session_options.thread_cap);
  std::unique_ptr<Session> session;
  try {
    session = std::make_unique<Session>(resolved.grammar, session_options);
  } catch (const GrammarError& e) {
    throw HttpError(422, e.what());
  }
  Instruction current = session->Current();
  std::string id = AddSession(std::move(session), resolved.name);
  OrderedJson out;
  out["session_id"] = id;
  out["grammar"] = resolved.name;
  out["accepting"] = current.accepting;
  out["expected"] = RangesToJson(current.expected);
  return Ok(std::move(out));
}

HttpResponse Service::SessionRoute(const std::string& method, const std::string& id,
                                   const std::string& action, const Query& query,
                                   const OrderedJson& request) {
  std::shared_ptr<Entry> entry = Find(id);
  std::lock_guard<std::mutex> lock(entry->mutex);
  entry->last_used = Now();
  Session& session = *entry->session;
  auto require_alive = [&]() {
    if (!session.alive()) throw HttpError(409, "session '" + id + "' is dead");
  };

  if (action.empty() && method == "GET") {
    OrderedJson out;
    out["session_id"] = id;
    out["grammar"] = entry->grammar_name;
    out["alive"] = session.alive();
    out["accepting"] = session.accepting();
    out["finished"] = session.finished();
    out["position"] = session.position();
    out["consumed"] = session.consumed_utf8();
    out["threads"] = session.num_threads();
    out["frames"] = session.Frames();
    return Ok(std::move(out));
  }
  if (action.empty() && method == "DELETE") {
    std::lock_guard<std::mutex> table_lock(table_mutex_);
    sessions_.erase(id);
    return Ok(OrderedJson{{"deleted", id}});
  }
  if (action == "feed" && method == "POST") {
    require_alive();
    std::u32string text = TextField(request, "text");
    bool atomic = BoolField(request, "atomic", false);
    OrderedJson out;
    if (atomic) {
      Session trial = session.Clone();
      Instruction instruction = trial.FeedScalars(text);
      bool committed = instruction.kind != InstructionKind::kError;
      if (committed) session = std::move(trial);
      out = InstructionToJson(instruction);
      out["committed"] = committed;
    } else {
      out = InstructionToJson(session.FeedScalars(text));
      out["committed"] = session.alive();
    }
    return Ok(std::move(out));
  }
  if (action == "expected" && method == "GET") {
    require_alive();
    bool significant = QueryFlag(query, "significant");
    CharSet expected = session.ExpectedNext(significant);
    OrderedJson out;
    out["expected"] = RangesToJson(expected);
    out["rows"] = RowsToJson(ExpectedRows(expected));
    out["accepting"] = session.accepting();
    out["significant"] = significant;
    out["position"] = session.position();
    return Ok(std::move(out));
  }
  if (action == "report" && method == "GET") {
    OrderedJson out = ReportToJson(session.Report(QueryFlag(query, "significant")));
    out["table"] = session.Report(QueryFlag(query, "significant")).ToTable();
    return Ok(std::move(out));
  }
  if (action == "clone" && method == "POST") {
    require_alive();
    auto copy = std::make_unique<Session>(session.Clone());
    return Ok(OrderedJson{{"session_id", AddSession(std::move(copy), entry->grammar_name)}});
  }
  if (action == "sample" && method == "POST") {
    require_alive();
    std::uint64_t seed = UintField(request, "seed", 0);
    std::uint64_t steps = UintField(request, "steps", 1);
    if (steps > 100000) throw HttpError(400, "\"steps\" is at most 100000");
    GroupedRandomChooser chooser(seed);
    std::string appended;
    bool stopped = false;
    for (std::uint64_t i = 0; i < steps; ++i) {
      CharOptions options;
      options.chars = session.ExpectedNext();
      options.stop_allowed = session.accepting();
      options.session = &session;
      if (options.chars.empty()) {
        stopped = true;
        break;
      }
      std::optional<char32_t> c = chooser.Choose(options);
      if (!c) {
        stopped = true;
        break;
      }
      session.TryFeed(*c);
      AppendUtf8(&appended, *c);
    }
    OrderedJson out;
    out["appended"] = appended;
    out["stopped"] = stopped;
    out["instruction"] = InstructionToJson(session.Current());
    return Ok(std::move(out));
  }
  throw HttpError(404, "no route for " + method + " /sessions/" + id + "/" + action);
}

HttpResponse Service::Generate(const OrderedJson& request) {
  ResolvedGrammar resolved = GrammarFromRequest(request);
  GenerateSpec spec;
  spec.seed = UintField(request, "seed", 0);
  spec.sampler = StringField(request, "sampler", "random");
  spec.budget = UintField(request, "budget", spec.budget);
  spec.forced_shortcut = BoolField(request, "shortcut", true);
  spec.constrained = BoolField(request, "constrained", true);
  spec.temperature = NumberField(request, "temperature", 1.0);
  spec.prompt = StringField(request, "prompt", "");
  spec.policy.gamma = NumberField(request, "gamma", spec.policy.gamma);
  spec.policy.depth_cap = UintField(request, "depth_cap", spec.policy.depth_cap);
  std::optional<TokenVocabulary> vocab;
  if (const OrderedJson* backend = Optional(request, "backend")) {
    if (backend->is_string()) {
      spec.backend = backend->get<std::string>();
    } else if (backend->is_object()) {
      spec.backend = StringField(*backend, "kind", spec.backend);
      spec.backend_url = StringField(*backend, "url", "");
      spec.slope = NumberField(*backend, "slope", spec.slope);
      spec.midpoint = NumberField(*backend, "midpoint", spec.midpoint);
    } else {
      throw HttpError(400, "\"backend\" must be a string or an object");
    }
  }
  if (spec.sampler == "backend") {
    vocab = VocabFromRequest(request);
    spec.vocab_id = StringField(request, "vocab", "ascii");
  }
  GenerateOutcome outcome;
  try {
    outcome = RunGenerate(resolved.grammar, spec, vocab ? &*vocab : nullptr);
  } catch (const BudgetExhaustedError& e) {
    throw HttpError(422, e.what(), OrderedJson{{"partial", e.prefix()}});
  } catch (const BackendError&) {
    throw;
  } catch (const GrammarError& e) {
    throw HttpError(422, e.what());
  } catch (const Error& e) {
    throw HttpError(400, e.what());
  }
  OrderedJson out;
  out["grammar"] = resolved.name;
  out["text"] = outcome.text;
  out["member"] = outcome.member;
  out["stats"] = StatsToJson(outcome.stats);
  return Ok(std::move(out));
}

HttpResponse Service::Validate(const OrderedJson& request) {
  ResolvedGrammar resolved = GrammarFromRequest(request);
  std::u32string text = TextField(request, "text");
  bool significant = BoolField(request, "significant", false);
  try {
    return Ok(VerdictToJson(ValidateText(resolved.grammar, text, significant)));
  } catch (const GrammarError& e) {
    throw HttpError(422, e.what());
  }
}

HttpResponse Service::Mask(const OrderedJson& request) {
  ResolvedGrammar resolved = GrammarFromRequest(request);
  TokenVocabulary vocab = VocabFromRequest(request);
  std::u32string prefix;
  if (Optional(request, "prefix") != nullptr) prefix = TextField(request, "prefix");
  TokenMask mask;
  try {
    Session session(resolved.grammar);
    for (char32_t c : prefix) {
      if (!session.TryFeed(c)) break;
    }
    mask = ComputeTokenMask(session, vocab);
  } catch (const GrammarError& e) {
    throw HttpError(422, e.what());
  }
  return Ok(MaskToJson(mask, vocab));
}

HttpResponse Service::BackendLogits(const OrderedJson& request) {
  std::string context = StringField(request, "context", "");
  if (Optional(request, "context") == nullptr) throw HttpError(400, "\"context\" is required");
  std::string vocab_id = StringField(request, "vocab_id", "");
  auto vocab = BuiltinVocabulary(vocab_id);
  if (!vocab) throw HttpError(422, "unknown vocabulary '" + vocab_id + "'");
  std::string kind_name = StringField(request, "kind", options_.logits_backend);
  MockOptions mock;
  mock.slope = NumberField(request, "slope", mock.slope);
  mock.midpoint = NumberField(request, "midpoint", mock.midpoint);
  MockKind kind;
  try {
    kind = ParseMockKind(kind_name);
  } catch (const Error& e) {
    throw HttpError(400, e.what());
  }
  if (kind == MockKind::kScripted) throw HttpError(400, "the scripted backend is not served");
  auto backend = MakeMockBackend(kind, vocab->Texts(), mock);
  return Ok(OrderedJson{{"logits", backend->Logits(BackendRequest{context, {}})}});
}

void Service::Register(httplib::Server* server) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [key, value] : req.params) query[key] = value;
    HttpResponse response = Handle(req.method, req.path, query, req.body);
    res.status = response.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(response.body.dump(), "application/json");
  };
  server->Get(".*", handler);
  server->Post(".*", handler);
  server->Delete(".*", handler);
  server->Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

int ServicePortFromEnv() {
  const char* value = std::getenv("DSLGUIDE_PORT");
  if (value == nullptr || *value == '\0') return 8080;
  char* end = nullptr;
  long port = std::strtol(value, &end, 10);
  if (*end != '\0' || port <= 0 || port > 65535) throw Error("DSLGUIDE_PORT is not a valid port");
  return static_cast<int>(port);
}

}  // namespace harness
}  // namespace dslguide
