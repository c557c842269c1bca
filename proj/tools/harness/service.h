/*!
 *  Copyright (c) 2026 by Contributors
 * \file service.h
 * \brief HTTP API over sessions, one-shot generation, validation, token masks and mock logits.
 *
 * Routes (JSON bodies):
 *   GET    /grammars
 *   POST   /sessions                     {grammar | grammar_ast, thread_cap?}
 *   GET    /sessions/{id}
 *   POST   /sessions/{id}/feed           {text, atomic?}
 *   GET    /sessions/{id}/expected       ?significant=true|false
 *   GET    /sessions/{id}/report         ?significant=true|false
 *   POST   /sessions/{id}/clone
 *   POST   /sessions/{id}/sample         {seed?, steps?}
 *   DELETE /sessions/{id}
 *   POST   /generate                     {grammar | grammar_ast | response_format, seed, sampler, ...}
 *   POST   /validate                     {grammar | grammar_ast, text, significant?}
 *   POST   /mask                         {grammar | grammar_ast, prefix, vocab | vocab_text}
 *   POST   /backend/logits               {context, vocab_id, kind?}
 * Status codes: 400 malformed body, 404 unknown or expired session, 409 dead session,
 * 422 unknown grammar, grammar errors and exhausted budgets.
 */
#ifndef DSLGUIDE_HARNESS_SERVICE_H_
#define DSLGUIDE_HARNESS_SERVICE_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "common.h"

namespace httplib {
class Server;
}

namespace dslguide {
namespace harness {

struct ServiceOptions {
  std::chrono::milliseconds idle_timeout = std::chrono::minutes(10);
  /*! \brief Time source; steady_clock::now when empty. */
  std::function<std::chrono::steady_clock::time_point()> clock;
  /*! \brief Mock used by /backend/logits when the request names none. */
  std::string logits_backend = "biased-closer";
};

struct HttpResponse {
  int status = 200;
  OrderedJson body = OrderedJson::object();
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});

  using Query = std::map<std::string, std::string>;
  HttpResponse Handle(const std::string& method, const std::string& path, const Query& query,
                      const std::string& body);

  /*! \brief Drops sessions idle for longer than the timeout; returns how many were dropped. */
  std::size_t ExpireIdle();
  std::size_t num_sessions() const;

  /*! \brief Routes every request of `server` to Handle. */
  void Register(httplib::Server* server);

 private:
  struct Entry {
    std::string id;
    std::string grammar_name;
    std::unique_ptr<Session> session;
    std::mutex mutex;
    std::chrono::steady_clock::time_point last_used;
  };

  std::chrono::steady_clock::time_point Now() const;
  std::shared_ptr<Entry> Find(const std::string& id);
  std::string AddSession(std::unique_ptr<Session> session, std::string grammar_name);

  HttpResponse Route(const std::string& method, const std::string& path, const Query& query,
                     const std::string& body);
  HttpResponse CreateSession(const OrderedJson& request);
  HttpResponse SessionRoute(const std::string& method, const std::string& id,
                            const std::string& action, const Query& query,
                            const OrderedJson& request);
  HttpResponse Generate(const OrderedJson& request);
  HttpResponse Validate(const OrderedJson& request);
  HttpResponse Mask(const OrderedJson& request);
  HttpResponse BackendLogits(const OrderedJson& request);

  ServiceOptions options_;
  mutable std::mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

/*! \brief Port from DSLGUIDE_PORT, or 8080. */
int ServicePortFromEnv();

}  // namespace harness
}  // namespace dslguide

#endif  // DSLGUIDE_HARNESS_SERVICE_H_
