/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/backend.h
 * \brief Next-token scoring backends: the contract and the built-in mocks.
 */
#ifndef DSLGUIDE_BACKEND_H_
#define DSLGUIDE_BACKEND_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dslguide {

struct BackendRequest {
  /*! \brief Text so far, including any prompt. */
  std::string context;
  /*! \brief Token ids sampled so far, excluding the prompt. */
  std::vector<std::int32_t> token_ids;
};

/*! \brief Scores every vocabulary entry for the next position. */
class Backend {
 public:
  virtual ~Backend() = default;
  /*! \brief One finite logit per vocabulary id. Throws BackendError on failure. */
  virtual std::vector<double> Logits(const BackendRequest& request) = 0;
  virtual std::size_t vocab_size() const = 0;
};

/*! \brief All logits zero. */
class UniformBackend : public Backend {
 public:
  explicit UniformBackend(std::size_t vocab_size) : vocab_size_(vocab_size) {}
  std::vector<double> Logits(const BackendRequest& request) override;
  std::size_t vocab_size() const override { return vocab_size_; }

 private:
  std::size_t vocab_size_;
};

/*!
 * \brief Favors closing brackets once the line is deep. With d the number of '(' in the context
 * after its last newline, token t scores slope * (d - midpoint) * (closes(t) - opens(t)).
 * Specials (empty token strings) score 0.
 */
class BiasedCloserBackend : public Backend {
 public:
  BiasedCloserBackend(std::vector<std::string> tokens, double slope = 1.0, double midpoint = 8.0);
  std::vector<double> Logits(const BackendRequest& request) override;
  std::size_t vocab_size() const override { return tokens_.size(); }

  /*! \brief The depth measure used for `context`. */
  static std::int64_t Depth(const std::string& context);

 private:
  std::vector<std::string> tokens_;
  double slope_;
  double midpoint_;
};

/*! \brief Replays a fixed table, one row per call. Throws BackendError once the table is used up. */
class ScriptedBackend : public Backend {
 public:
  ScriptedBackend(std::size_t vocab_size, std::vector<std::vector<double>> rows);
  std::vector<double> Logits(const BackendRequest& request) override;
  std::size_t vocab_size() const override { return vocab_size_; }
  std::size_t calls() const { return next_; }

 private:
  std::size_t vocab_size_;
  std::vector<std::vector<double>> rows_;
  std::size_t next_ = 0;
};

enum class MockKind : std::uint8_t { kUniform, kBiasedCloser, kScripted };

struct MockOptions {
  double slope = 1.0;
  double midpoint = 8.0;
  std::vector<std::vector<double>> rows;
};

/*! \brief Builds a mock over a vocabulary given as token strings ("" for specials). */
std::unique_ptr<Backend> MakeMockBackend(MockKind kind, const std::vector<std::string>& tokens,
                                         const MockOptions& options = {});

/*! \brief Parses "uniform", "biased-closer" or "scripted"; throws Error otherwise. */
MockKind ParseMockKind(const std::string& name);

}  // namespace dslguide

#endif  // DSLGUIDE_BACKEND_H_
