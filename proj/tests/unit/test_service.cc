/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_service.cc
 */
#include <set>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "cli.h"
#include "dslguide/error.h"
#include "dslguide/grammars.h"
#include "dslguide/session.h"
#include "experiments.h"
#include "json_reference.h"
#include "oracles.h"
#include "remote_backend.h"
#include "service.h"

namespace dslguide {
namespace harness {
namespace {

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest() {
    ServiceOptions options;
    options.clock = [this]() { return now_; };
    service_ = std::make_unique<Service>(options);
  }

  HttpResponse Post(const std::string& path, const OrderedJson& body) {
    return service_->Handle("POST", path, {}, body.dump());
  }
  HttpResponse Get(const std::string& path, Service::Query query = {}) {
    return service_->Handle("GET", path, query, "");
  }
  std::string NewSession(const std::string& grammar) {
    HttpResponse r = Post("/sessions", {{"grammar", grammar}});
    EXPECT_EQ(r.status, 200) << r.body.dump();
    return r.body["session_id"].get<std::string>();
  }

  std::chrono::steady_clock::time_point now_{};
  std::unique_ptr<Service> service_;
};

TEST_F(ServiceTest, CreateFeedExpected) {
  std::string id = NewSession("json");
  HttpResponse feed = Post("/sessions/" + id + "/feed", {{"text", "{ \"key\""}});
  ASSERT_EQ(feed.status, 200);
  EXPECT_EQ(feed.body["status"], "accepted");
  EXPECT_EQ(feed.body["position"], 7);
  EXPECT_FALSE(feed.body["accepting"].get<bool>());
  EXPECT_TRUE(feed.body["frames"].is_array());
  HttpResponse expected = Get("/sessions/" + id + "/expected", {{"significant", "true"}});
  ASSERT_EQ(expected.status, 200);
  EXPECT_EQ(expected.body["expected"], OrderedJson::parse(R"([{"lo":58,"hi":58}])"));
  HttpResponse state = Get("/sessions/" + id);
  EXPECT_EQ(state.body["consumed"], "{ \"key\"");
  EXPECT_EQ(state.body["grammar"], "json");
}

TEST_F(ServiceTest, RejectionThenConflict) {
  std::string id = NewSession("brackets");
  HttpResponse feed = Post("/sessions/" + id + "/feed", {{"text", "())"}});
  ASSERT_EQ(feed.status, 200);
  EXPECT_EQ(feed.body["status"], "rejected");
  EXPECT_EQ(feed.body["position"], 2);
  EXPECT_EQ(feed.body["found"], ")");
  EXPECT_EQ(Post("/sessions/" + id + "/feed", {{"text", "("}}).status, 409);
  EXPECT_EQ(Get("/sessions/" + id + "/expected").status, 409);
  EXPECT_EQ(Post("/sessions/" + id + "/clone", OrderedJson::object()).status, 409);
  HttpResponse report = Get("/sessions/" + id + "/report");
  EXPECT_EQ(report.status, 200);
  EXPECT_FALSE(report.body["alive"].get<bool>());
}

TEST_F(ServiceTest, EofStatus) {
  std::string id = NewSession("function_call");
  HttpResponse feed = Post("/sessions/" + id + "/feed", {{"text", "f()"}});
  EXPECT_EQ(feed.body["status"], "eof");
  EXPECT_TRUE(feed.body["accepting"].get<bool>());
  EXPECT_TRUE(feed.body["expected"].empty());
}

TEST_F(ServiceTest, AtomicFeedKeepsTheSessionOnRejection) {
  std::string id = NewSession("brackets");
  Post("/sessions/" + id + "/feed", {{"text", "(("}});
  HttpResponse bad = Post("/sessions/" + id + "/feed", {{"text", "))))"}, {"atomic", true}});
  EXPECT_EQ(bad.body["status"], "rejected");
  EXPECT_FALSE(bad.body["committed"].get<bool>());
  HttpResponse good = Post("/sessions/" + id + "/feed", {{"text", "))"}, {"atomic", true}});
  EXPECT_EQ(good.body["status"], "accepted");
  EXPECT_TRUE(good.body["committed"].get<bool>());
  EXPECT_EQ(Get("/sessions/" + id).body["consumed"], "(())");
}

TEST_F(ServiceTest, CloneAndDelete) {
  std::string id = NewSession("brackets");
  Post("/sessions/" + id + "/feed", {{"text", "("}});
  HttpResponse clone = Post("/sessions/" + id + "/clone", OrderedJson::object());
  ASSERT_EQ(clone.status, 200);
  std::string copy = clone.body["session_id"];
  EXPECT_NE(copy, id);
  Post("/sessions/" + copy + "/feed", {{"text", ")"}});
  EXPECT_EQ(Get("/sessions/" + id).body["consumed"], "(");
  EXPECT_EQ(Get("/sessions/" + copy).body["consumed"], "()");
  EXPECT_EQ(service_->Handle("DELETE", "/sessions/" + id, {}, "").status, 200);
  EXPECT_EQ(Get("/sessions/" + id).status, 404);
  EXPECT_EQ(service_->num_sessions(), 1u);
}

TEST_F(ServiceTest, ErrorStatuses) {
  EXPECT_EQ(Get("/sessions/s999").status, 404);
  EXPECT_EQ(service_->Handle("POST", "/sessions", {}, "{not json").status, 400);
  EXPECT_EQ(service_->Handle("POST", "/sessions", {}, "[1]").status, 400);
  EXPECT_EQ(Post("/sessions", {{"grammar", "cobol"}}).status, 422);
  EXPECT_EQ(Post("/sessions", {{"grammar", 5}}).status, 400);
  EXPECT_EQ(Post("/sessions", OrderedJson::object()).status, 400);
  EXPECT_EQ(Post("/sessions", {{"grammar_ast", {{"start", "a"}}}}).status, 422);
  std::string id = NewSession("json");
  EXPECT_EQ(Post("/sessions/" + id + "/feed", {{"text", 3}}).status, 400);
  EXPECT_EQ(Get("/nowhere").status, 404);
  EXPECT_EQ(Post("/generate", {{"response_format", {{"type", "xml"}}}}).status, 400);
}

TEST_F(ServiceTest, IdleSessionsExpire) {
  std::string id = NewSession("brackets");
  now_ += std::chrono::minutes(9);
  EXPECT_EQ(Get("/sessions/" + id).status, 200);
  now_ += std::chrono::minutes(9);
  EXPECT_EQ(Get("/sessions/" + id).status, 200);
  now_ += std::chrono::minutes(11);
  EXPECT_EQ(Get("/sessions/" + id).status, 404);
  EXPECT_EQ(service_->num_sessions(), 0u);
}

TEST_F(ServiceTest, GenerateJsonMode) {
  HttpResponse r = Post("/generate", {{"response_format", {{"type", "json_object"}}}, {"seed", 7}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_TRUE(CheckJsonDocument(r.body["text"].get<std::string>()).ok);
  EXPECT_EQ(r.body["grammar"], "json");
  HttpResponse again = Post("/generate", {{"response_format", {{"type", "json_object"}}}, {"seed", 7}});
  EXPECT_EQ(again.body, r.body);
}

TEST_F(ServiceTest, GenerateMatchesTheCli) {
  for (std::string grammar : {"json", "brackets", "mermaid"}) {
    for (std::string sampler : {"random", "grouped"}) {
      HttpResponse r = Post("/generate", {{"grammar", grammar}, {"sampler", sampler}, {"seed", 11}});
      ASSERT_EQ(r.status, 200);
      std::vector<std::string> args = {"dslguide", "generate", "--grammar", grammar, "--sampler",
                                       sampler, "--seed", "11", "--format", "json"};
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      std::istringstream in;
      ASSERT_EQ(RunCli(static_cast<int>(argv.size()), argv.data(), out, err, in), 0);
      EXPECT_EQ(OrderedJson::parse(out.str())["text"], r.body["text"]) << grammar << " " << sampler;
    }
  }
}

TEST_F(ServiceTest, GenerateWithBackend) {
  HttpResponse masked = Post("/generate", {{"grammar", "brackets"}, {"sampler", "backend"},
                                           {"backend", "biased-closer"}, {"vocab", "brackets"},
                                           {"seed", 3}});
  ASSERT_EQ(masked.status, 200) << masked.body.dump();
  EXPECT_TRUE(masked.body["member"].get<bool>());
  EXPECT_TRUE(oracle::BracketStack(masked.body["text"].get<std::string>()).member);
  HttpResponse json = Post("/generate", {{"response_format", {{"type", "json_object"}}},
                                         {"sampler", "backend"}, {"backend", "uniform"}, {"seed", 3}});
  ASSERT_EQ(json.status, 200) << json.body.dump();
  EXPECT_TRUE(CheckJsonDocument(json.body["text"].get<std::string>()).ok);
  HttpResponse loose = Post("/generate", {{"grammar", "json"}, {"sampler", "backend"},
                                          {"backend", "uniform"}, {"constrained", false}, {"seed", 3}});
  ASSERT_EQ(loose.status, 200);
  EXPECT_TRUE(loose.body.contains("member"));
}

TEST_F(ServiceTest, GenerateBudgetExhaustion) {
  HttpResponse r = Post("/generate", {{"grammar", "mermaid"}, {"budget", 6}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["partial"], "flowch");
}

TEST_F(ServiceTest, Validate) {
  HttpResponse member = Post("/validate", {{"grammar", "json"}, {"text", "{\"a\":1}"}});
  EXPECT_EQ(member.body["verdict"], "member");
  HttpResponse prefix = Post("/validate", {{"grammar", "json"}, {"text", "{ \"key\": 0"}, {"significant", true}});
  EXPECT_EQ(prefix.body["verdict"], "prefix");
  std::set<std::string> values;
  for (const auto& row : prefix.body["expected"]) values.insert(row["value"].get<std::string>());
  EXPECT_EQ(values, (std::set<std::string>{".", "E", "e", ",", "}"}));
  HttpResponse error = Post("/validate", {{"grammar", "brackets"}, {"text", "())"}});
  EXPECT_EQ(error.body["verdict"], "error");
  EXPECT_EQ(error.body["position"], 3);
}

TEST_F(ServiceTest, Mask) {
  HttpResponse r = Post("/mask", {{"grammar", "brackets"}, {"vocab", "brackets"}, {"prefix", "("}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["legal"], OrderedJson::parse("[0, 1, 2, 3]"));
  EXPECT_FALSE(r.body["eos_legal"].get<bool>());
  HttpResponse custom = Post("/mask", {{"grammar", "json"}, {"vocab_text", "0\t{\n1\tnull\n2\t!EOS\n3\tnul\n"}});
  EXPECT_EQ(custom.body["legal"], OrderedJson::parse("[0, 1, 3]"));
  HttpResponse dead = Post("/mask", {{"grammar", "brackets"}, {"vocab", "brackets"}, {"prefix", ")"}});
  EXPECT_TRUE(dead.body["dead"].get<bool>());
  EXPECT_EQ(Post("/mask", {{"grammar", "json"}, {"vocab_text", "0 x"}}).status, 400);
  EXPECT_EQ(Post("/mask", {{"grammar", "json"}, {"vocab", "gpt2"}}).status, 422);
}

TEST_F(ServiceTest, SampleStepsConverge) {
  std::string a = NewSession("brackets");
  std::string b = NewSession("brackets");
  OrderedJson req = {{"seed", 5}, {"steps", 100000}};
  HttpResponse ra = Post("/sessions/" + a + "/sample", req);
  HttpResponse rb = Post("/sessions/" + b + "/sample", req);
  ASSERT_EQ(ra.status, 200);
  EXPECT_TRUE(ra.body["stopped"].get<bool>());
  EXPECT_EQ(ra.body["appended"], rb.body["appended"]);
  std::string consumed = Get("/sessions/" + a).body["consumed"];
  EXPECT_TRUE(oracle::BracketStack(consumed).member) << consumed;
  std::string c = NewSession("json");
  for (int i = 0; i < 5; ++i) {
    HttpResponse step = Post("/sessions/" + c + "/sample", {{"seed", i}, {"steps", 1}});
    ASSERT_EQ(step.status, 200);
  }
  std::string prefix = Get("/sessions/" + c).body["consumed"];
  EXPECT_TRUE(IsPrefix(JsonGrammar(), prefix));
}

TEST_F(ServiceTest, BackendLogits) {
  HttpResponse r = Post("/backend/logits", {{"context", "x\n((("}, {"vocab_id", "brackets"}});
  ASSERT_EQ(r.status, 200);
  auto local = MakeMockBackend(MockKind::kBiasedCloser, BracketVocabulary().Texts());
  EXPECT_EQ(r.body["logits"].get<std::vector<double>>(), local->Logits({"x\n(((", {}}));
  EXPECT_EQ(Post("/backend/logits", {{"vocab_id", "brackets"}}).status, 400);
  EXPECT_EQ(Post("/backend/logits", {{"context", ""}, {"vocab_id", "nope"}}).status, 422);
}

TEST_F(ServiceTest, ResponsesArePureFunctionsOfRequests) {
  auto script = [](Service* s) {
    std::vector<OrderedJson> out;
    auto call = [&](const std::string& m, const std::string& p, const OrderedJson& b) {
      out.push_back(s->Handle(m, p, {}, b.dump()).body);
    };
    call("POST", "/sessions", {{"grammar", "json"}});
    call("POST", "/sessions/s1/feed", {{"text", "[1, "}});
    call("POST", "/sessions/s1/sample", {{"seed", 4}, {"steps", 20}});
    call("POST", "/sessions/s1/clone", OrderedJson::object());
    call("POST", "/sessions/s2/feed", {{"text", "x"}});
    call("GET", "/sessions/s1/expected", OrderedJson::object());
    return out;
  };
  Service a, b;
  EXPECT_EQ(script(&a), script(&b));
}

TEST_F(ServiceTest, ConcurrentSessions) {
  std::vector<std::thread> threads;
  std::vector<std::string> ids(8);
  std::vector<bool> ok(8, false);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t]() {
      HttpResponse created = Post("/sessions", {{"grammar", "brackets"}});
      ids[t] = created.body["session_id"];
      bool good = true;
      for (int i = 0; i < 50; ++i) {
        good &= Post("/sessions/" + ids[t] + "/feed", {{"text", "("}}).body["status"] == "accepted";
      }
      for (int i = 0; i < 50; ++i) {
        good &= Post("/sessions/" + ids[t] + "/feed", {{"text", ")"}}).body["status"] != "rejected";
      }
      ok[t] = good && Get("/sessions/" + ids[t]).body["accepting"].get<bool>();
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 8u);
  for (bool b : ok) EXPECT_TRUE(b);
}

class HttpFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    service_.Register(&server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this]() { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  Service service_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, RoundTripOverHttp) {
  httplib::Client client("127.0.0.1", port_);
  auto created = client.Post("/sessions", R"({"grammar":"json"})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 200);
  EXPECT_EQ(created->get_header_value("Access-Control-Allow-Origin"), "*");
  std::string id = nlohmann::json::parse(created->body)["session_id"];
  auto fed = client.Post("/sessions/" + id + "/feed", R"({"text":"{ \"key\""})", "application/json");
  ASSERT_TRUE(fed);
  auto expected = client.Get("/sessions/" + id + "/expected?significant=true");
  ASSERT_TRUE(expected);
  EXPECT_EQ(nlohmann::json::parse(expected->body)["expected"], nlohmann::json::parse(R"([{"lo":58,"hi":58}])"));
  auto preflight = client.Options("/sessions");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);
  auto missing = client.Get("/sessions/s77");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST_F(HttpFixture, RemoteBackendProtocol) {
  TokenVocabulary vocab = BracketVocabulary();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port_) + "/backend/logits", "brackets",
                       vocab.size());
  auto local = MakeMockBackend(MockKind::kBiasedCloser, vocab.Texts());
  EXPECT_EQ(remote.Logits({"p\n((", {}}), local->Logits({"p\n((", {}}));
  ExperimentReport report = RunBracketExperiment(&remote, vocab, {6, 8, 10});
  EXPECT_EQ(report.summary["first_n_over_50"], 10);
  DecodeResult r = DecodeLoop(BracketsGrammar(), vocab, &remote);
  EXPECT_TRUE(r.member);
  RemoteBackend wrong_size("http://127.0.0.1:" + std::to_string(port_) + "/backend/logits", "brackets", 7);
  EXPECT_THROW(wrong_size.Logits({"x", {}}), BackendError);
  RemoteBackend missing("http://127.0.0.1:" + std::to_string(port_) + "/nothing", "brackets", 5);
  EXPECT_THROW(missing.Logits({"x", {}}), BackendError);
  EXPECT_THROW(RemoteBackend("ftp://x", "brackets", 5), BackendError);
}

}  // namespace
}  // namespace harness
}  // namespace dslguide
