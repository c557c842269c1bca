/*!
 *  Copyright (c) 2026 by Contributors
 * \file sampling.cc
 */
#include "dslguide/sampling.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dslguide/compiled_grammar.h"
#include "dslguide/error.h"
#include "dslguide/session.h"
#include "dslguide/unicode.h"

namespace dslguide {

namespace {

char32_t UniformScalar(const CharSet& set, std::mt19937_64* rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, set.size() - 1);
  return set.Nth(dist(*rng));
}

std::string DescribeFrames(const FrameTracker* frames) {
  if (frames == nullptr) return "";
  std::string out;
  for (const auto& name : frames->Names()) {
    if (!out.empty()) out += " -> ";
    out += name;
  }
  return out;
}

}  // namespace

RandomChooser::RandomChooser(std::uint64_t seed, DecayPolicy policy)
    : rng_(seed), policy_(policy) {
  if (!(policy_.gamma > 0.0 && policy_.gamma <= 1.0)) {
    throw Error("decay factor must lie in (0, 1]");
  }
  if (policy_.depth_cap < 1) throw Error("depth cap must be at least 1");
}

std::size_t RandomChooser::ChooseBranch(const SamplerRequest& request) {
  const auto& options = request.options;
  std::vector<double> weights(options.size(), 0.0);
  bool capped = request.frames != nullptr && request.frames->depth() >= policy_.depth_cap;
  if (capped) {
    ++depth_cap_hits_;
    std::int32_t lowest = kInfiniteHeight;
    for (const auto& o : options) {
      if (o.productive) lowest = std::min(lowest, o.min_height);
    }
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].productive && options[i].min_height == lowest) weights[i] = 1.0;
    }
  } else {
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (!options[i].productive) continue;
      std::int64_t k = 0;
      if (request.frames != nullptr) {
        for (std::int32_t r : options[i].refs) k += request.frames->Count(r);
      }
      weights[i] = std::pow(policy_.gamma, static_cast<double>(k));
    }
  }
  std::size_t eligible = 0;
  std::size_t last = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      ++eligible;
      last = i;
      total += weights[i];
    }
  }
  if (eligible == 0) {
    throw GenerationError("no productive branch in '" + request.context + "' at " +
                          DescribeFrames(request.frames));
  }
  if (eligible == 1) return last;
  double draw = std::uniform_real_distribution<double>(0.0, total)(rng_);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    if (draw < weights[i]) return i;
    draw -= weights[i];
  }
  return last;
}

char32_t RandomChooser::ChooseScalar(const SamplerRequest& request) {
  return UniformScalar(request.scalars, &rng_);
}

std::vector<double> TemperatureScale(const std::vector<double>& logits, double temperature) {
  if (logits.empty()) throw Error("temperature scaling of an empty logits vector");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw Error("temperature must be a finite nonnegative number");
  }
  for (double z : logits) {
    if (!std::isfinite(z)) throw Error("logits must be finite");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  std::vector<double> probs(logits.size(), 0.0);
  if (temperature == 0.0) {
    probs[best] = 1.0;
    return probs;
  }
  double top = logits[best];
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    double scaled = (logits[i] - top) / temperature;
    probs[i] = std::isnan(scaled) ? 0.0 : std::exp(scaled);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::vector<double> Softmax(const std::vector<double>& logits) {
  return TemperatureScale(logits, 1.0);
}

std::size_t SampleIndex(const std::vector<double>& probs, std::mt19937_64* rng) {
  DSLGUIDE_ICHECK(!probs.empty(), "sampling from an empty distribution");
  double total = 0.0;
  std::size_t last = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) {
      total += probs[i];
      last = i;
    }
  }
  if (last == probs.size()) throw Error("sampling from an all-zero distribution");
  double draw = std::uniform_real_distribution<double>(0.0, total)(*rng);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    if (draw < probs[i]) return i;
    draw -= probs[i];
  }
  return last;
}

SamplerStats& SamplerStats::operator+=(const SamplerStats& other) {
  chars_emitted += other.chars_emitted;
  sampler_calls += other.sampler_calls;
  forced_moves += other.forced_moves;
  return *this;
}

double SamplerCallRatio(const SamplerStats& stats) {
  if (stats.chars_emitted == 0) throw Error("sampler call ratio of an empty output");
  return static_cast<double>(stats.sampler_calls) / static_cast<double>(stats.chars_emitted);
}

DerivationChooser::DerivationChooser(const Grammar& grammar, BranchChooser* chooser)
    : flattener_(grammar), chooser_(chooser) {}

std::optional<char32_t> DerivationChooser::Choose(const CharOptions& options) {
  std::optional<char32_t> c = flattener_.NextChar(chooser_);
  if (!c.has_value()) {
    if (!options.stop_allowed) {
      throw GenerationError("derivation ended where the input cannot end");
    }
    return std::nullopt;
  }
  if (!options.chars.Contains(*c)) {
    throw GenerationError("derivation produced " + DescribeScalar(*c) + " outside " +
                          options.chars.ToString());
  }
  return c;
}

void DerivationChooser::OnForced(char32_t c) {
  std::optional<char32_t> next = flattener_.NextChar(chooser_);
  if (next != c) {
    throw GenerationError("derivation diverged from the forced character " + DescribeScalar(c));
  }
}

AdversarialChooser::AdversarialChooser(std::uint64_t seed, char32_t favorite)
    : rng_(seed), favorite_(favorite) {}

std::optional<char32_t> AdversarialChooser::Choose(const CharOptions& options) {
  if (options.chars.Contains(favorite_)) return favorite_;
  const auto& ranges = options.chars.ranges();
  std::size_t n = ranges.size() + (options.stop_allowed ? 1 : 0);
  if (n == 0) return std::nullopt;
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  if (pick == ranges.size()) return std::nullopt;
  const ScalarRange& r = ranges[pick];
  return UniformScalar(CharSet::Range(r.lo, r.hi), &rng_);
}

GroupedRandomChooser::GroupedRandomChooser(std::uint64_t seed) : rng_(seed) {}

std::optional<char32_t> GroupedRandomChooser::Choose(const CharOptions& options) {
  std::vector<CharSet> groups;
  if (options.session != nullptr) {
    for (CharSet& set : options.session->ThreadSets()) {
      if (set.empty()) continue;
      if (std::find(groups.begin(), groups.end(), set) == groups.end()) {
        groups.push_back(std::move(set));
      }
    }
  } else if (!options.chars.empty()) {
    groups.push_back(options.chars);
  }
  std::size_t n = groups.size() + (options.stop_allowed ? 1 : 0);
  if (n == 0) return std::nullopt;
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  if (pick == groups.size()) return std::nullopt;
  return UniformScalar(groups[pick], &rng_);
}

GenerateResult ConstrainedGenerate(const Grammar& grammar, CharChooser* chooser,
                                   const GenerateOptions& options) {
  if (options.budget < 1) throw Error("generation budget must be at least 1");
  Session session(grammar);
  GenerateResult result;
  while (true) {
    CharOptions step;
    step.chars = session.ExpectedNext();
    step.stop_allowed = session.accepting();
    step.session = &session;
    if (step.chars.empty()) break;
    std::optional<char32_t> c;
    bool forced = options.forced_shortcut && !step.stop_allowed && step.chars.size() == 1;
    if (forced) {
      c = step.chars.Nth(0);
    } else {
      c = chooser->Choose(step);
      if (!c.has_value()) {
        if (!step.stop_allowed) throw GenerationError("chooser stopped before the input can end");
        break;
      }
      if (!step.chars.Contains(*c)) {
        throw GenerationError("chooser picked " + DescribeScalar(*c) + " outside " +
                              step.chars.ToString());
      }
    }
    if (result.stats.chars_emitted >= options.budget) {
      throw BudgetExhaustedError(result.text, options.budget);
    }
    if (forced) {
      chooser->OnForced(*c);
      ++result.stats.forced_moves;
    } else {
      ++result.stats.sampler_calls;
    }
    DSLGUIDE_ICHECK(session.TryFeed(*c), "an expected character was rejected");
    AppendUtf8(&result.text, *c);
    ++result.stats.chars_emitted;
  }
  DSLGUIDE_ICHECK(IsMember(grammar, std::string_view(result.text)),
                  "generated text failed re-validation");
  return result;
}

GenerateResult GenerateRandom(const Grammar& grammar, std::uint64_t seed,
                              const GenerateOptions& options, DecayPolicy policy) {
  RandomChooser random(seed, policy);
  DerivationChooser chooser(grammar, &random);
  return ConstrainedGenerate(grammar, &chooser, options);
}

}  // namespace dslguide
