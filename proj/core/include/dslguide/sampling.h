/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/sampling.h
 * \brief Choosers for derivations and the character-level constrained generation loop.
 */
#ifndef DSLGUIDE_SAMPLING_H_
#define DSLGUIDE_SAMPLING_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dslguide/charset.h"
#include "dslguide/flatten.h"
#include "dslguide/grammar.h"

namespace dslguide {

class Session;

/*!
 * \brief Recursion damping for random derivations. A branch that re-enters rules already on the
 * frame stack k times in total is weighted by gamma^k. From depth_cap frames on, only the
 * branches with the smallest derivation height are eligible.
 */
struct DecayPolicy {
  double gamma = 0.5;
  std::size_t depth_cap = 64;
};

/*! \brief Weighted random branch choices and uniform scalar draws, reproducible from a seed. */
class RandomChooser : public BranchChooser {
 public:
  explicit RandomChooser(std::uint64_t seed, DecayPolicy policy = {});

  std::size_t ChooseBranch(const SamplerRequest& request) override;
  char32_t ChooseScalar(const SamplerRequest& request) override;

  /*! \brief Number of decisions taken under the depth cap. */
  std::uint64_t depth_cap_hits() const { return depth_cap_hits_; }
  const DecayPolicy& policy() const { return policy_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  DecayPolicy policy_;
  std::uint64_t depth_cap_hits_ = 0;
};

/*!
 * \brief Probabilities proportional to exp(z_i / T). T = 0 gives a one-hot vector on the first
 * maximum. Throws Error for negative T, an empty vector or non-finite logits.
 */
std::vector<double> TemperatureScale(const std::vector<double>& logits, double temperature);

/*! \brief Plain softmax, TemperatureScale with T = 1. */
std::vector<double> Softmax(const std::vector<double>& logits);

/*! \brief Draws an index from a probability vector. Zero-probability entries are never drawn. */
std::size_t SampleIndex(const std::vector<double>& probs, std::mt19937_64* rng);

struct SamplerStats {
  std::uint64_t chars_emitted = 0;
  std::uint64_t sampler_calls = 0;
  std::uint64_t forced_moves = 0;

  SamplerStats& operator+=(const SamplerStats& other);
};

/*! \brief sampler_calls / chars_emitted. Throws Error when nothing was emitted. */
double SamplerCallRatio(const SamplerStats& stats);

/*! \brief The legal continuations offered to a CharChooser at one step. */
struct CharOptions {
  CharSet chars;
  bool stop_allowed = false;
  const Session* session = nullptr;
};

/*! \brief Picks the next character of a constrained generation run; nullopt means stop. */
class CharChooser {
 public:
  virtual ~CharChooser() = default;
  virtual std::optional<char32_t> Choose(const CharOptions& options) = 0;
  /*! \brief Notifies the chooser that `c` was committed without consulting it. */
  virtual void OnForced(char32_t c) { (void)c; }
};

/*!
 * \brief Follows a derivation of the grammar driven by a BranchChooser. Each character of the
 * derivation is checked against the offered options.
 */
class DerivationChooser : public CharChooser {
 public:
  DerivationChooser(const Grammar& grammar, BranchChooser* chooser);

  std::optional<char32_t> Choose(const CharOptions& options) override;
  void OnForced(char32_t c) override;
  const Flattener& flattener() const { return flattener_; }

 private:
  Flattener flattener_;
  BranchChooser* chooser_;
};

/*!
 * \brief Always takes ')' when it is legal. Otherwise picks uniformly among the expected ranges
 * (and stop, when allowed), then uniformly inside the chosen range.
 */
class AdversarialChooser : public CharChooser {
 public:
  explicit AdversarialChooser(std::uint64_t seed, char32_t favorite = U')');
  std::optional<char32_t> Choose(const CharOptions& options) override;

 private:
  std::mt19937_64 rng_;
  char32_t favorite_;
};

/*!
 * \brief Picks uniformly among the distinct ready sets of the live threads (and stop), then
 * uniformly inside the chosen set.
 */
class GroupedRandomChooser : public CharChooser {
 public:
  explicit GroupedRandomChooser(std::uint64_t seed);
  std::optional<char32_t> Choose(const CharOptions& options) override;

 private:
  std::mt19937_64 rng_;
};

struct GenerateOptions {
  /*! \brief Maximum number of emitted characters. */
  std::size_t budget = 100000;
  /*! \brief Commit single legal continuations without asking the chooser. */
  bool forced_shortcut = true;
};

struct GenerateResult {
  std::string text;
  SamplerStats stats;
};

/*!
 * \brief Character-level generation inside the prefix language. Ends when the chooser stops in
 * an accepting state or nothing more can follow. Throws BudgetExhaustedError carrying the prefix
 * when the budget runs out and GenerationError if the chooser leaves the offered options.
 */
GenerateResult ConstrainedGenerate(const Grammar& grammar, CharChooser* chooser,
                                   const GenerateOptions& options = {});

/*! \brief ConstrainedGenerate with a DerivationChooser over a RandomChooser. */
GenerateResult GenerateRandom(const Grammar& grammar, std::uint64_t seed,
                              const GenerateOptions& options = {}, DecayPolicy policy = {});

}  // namespace dslguide

#endif  // DSLGUIDE_SAMPLING_H_
