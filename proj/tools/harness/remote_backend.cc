/*!
 *  Copyright (c) 2026 by Contributors
 * \file remote_backend.cc
 */
#include "remote_backend.h"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "dslguide/error.h"

namespace dslguide {
namespace harness {

RemoteBackend::RemoteBackend(const std::string& url, std::string vocab_id, std::size_t vocab_size,
                             int timeout_seconds)
    : vocab_id_(std::move(vocab_id)), vocab_size_(vocab_size), timeout_seconds_(timeout_seconds) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) throw BackendError("remote backend URL must start with http://");
  auto slash = url.find('/', scheme.size());
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
  if (origin_.size() == scheme.size()) throw BackendError("remote backend URL lacks a host");
}

std::vector<double> RemoteBackend::Logits(const BackendRequest& request) {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  nlohmann::json body{{"context", request.context}, {"vocab_id", vocab_id_}};
  auto response = client.Post(path_, body.dump(), "application/json");
  if (!response) {
    throw BackendError("remote backend " + origin_ + path_ + ": " + httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    throw BackendError("remote backend returned HTTP " + std::to_string(response->status));
  }
  nlohmann::json parsed = nlohmann::json::parse(response->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("logits") ||
      !parsed["logits"].is_array()) {
    throw BackendError("remote backend response lacks a logits array");
  }
  std::vector<double> logits;
  for (const auto& v : parsed["logits"]) {
    if (!v.is_number()) throw BackendError("remote backend returned a non-numeric logit");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw BackendError("remote backend returned a non-finite logit");
    logits.push_back(x);
  }
  if (logits.size() != vocab_size_) {
    throw BackendError("remote backend returned " + std::to_string(logits.size()) +
                       " logits for a vocabulary of " + std::to_string(vocab_size_));
  }
  return logits;
}

}  // namespace harness
}  // namespace dslguide
