/*!
 *  Copyright (c) 2026 by Contributors
 * \file backend.cc
 */
#include "dslguide/backend.h"

#include <algorithm>
#include <cmath>

#include "dslguide/error.h"

namespace dslguide {

std::vector<double> UniformBackend::Logits(const BackendRequest&) {
  return std::vector<double>(vocab_size_, 0.0);
}

BiasedCloserBackend::BiasedCloserBackend(std::vector<std::string> tokens, double slope,
                                         double midpoint)
    : tokens_(std::move(tokens)), slope_(slope), midpoint_(midpoint) {}

std::int64_t BiasedCloserBackend::Depth(const std::string& context) {
  auto line_start = context.rfind('\n');
  std::size_t from = line_start == std::string::npos ? 0 : line_start + 1;
  return std::count(context.begin() + static_cast<std::ptrdiff_t>(from), context.end(), '(');
}

std::vector<double> BiasedCloserBackend::Logits(const BackendRequest& request) {
  double pressure = slope_ * (static_cast<double>(Depth(request.context)) - midpoint_);
  std::vector<double> logits(tokens_.size(), 0.0);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& t = tokens_[i];
    auto closes = std::count(t.begin(), t.end(), ')');
    auto opens = std::count(t.begin(), t.end(), '(');
    logits[i] = pressure * static_cast<double>(closes - opens);
  }
  return logits;
}

ScriptedBackend::ScriptedBackend(std::size_t vocab_size, std::vector<std::vector<double>> rows)
    : vocab_size_(vocab_size), rows_(std::move(rows)) {
  for (const auto& row : rows_) {
    if (row.size() != vocab_size_) {
      throw BackendError("scripted row has " + std::to_string(row.size()) +
                         " logits, vocabulary has " + std::to_string(vocab_size_));
    }
  }
}

std::vector<double> ScriptedBackend::Logits(const BackendRequest&) {
  if (next_ >= rows_.size()) {
    throw BackendError("scripted backend exhausted after " + std::to_string(rows_.size()) +
                       " calls");
  }
  return rows_[next_++];
}

std::unique_ptr<Backend> MakeMockBackend(MockKind kind, const std::vector<std::string>& tokens,
                                         const MockOptions& options) {
  switch (kind) {
    case MockKind::kUniform:
      return std::make_unique<UniformBackend>(tokens.size());
    case MockKind::kBiasedCloser:
      return std::make_unique<BiasedCloserBackend>(tokens, options.slope, options.midpoint);
    case MockKind::kScripted:
      return std::make_unique<ScriptedBackend>(tokens.size(), options.rows);
  }
  throw Error("unknown mock backend kind");
}

MockKind ParseMockKind(const std::string& name) {
  if (name == "uniform") return MockKind::kUniform;
  if (name == "biased-closer") return MockKind::kBiasedCloser;
  if (name == "scripted") return MockKind::kScripted;
  throw Error("unknown mock backend '" + name + "'");
}

}  // namespace dslguide
