#ifndef FWI_CORE_H_
#define FWI_CORE_H_

// Solution spaces, distributions over them, value functions, total-variation
// fairness, and the fairness-to-welfare interpolation instance contract.

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fwi/errors.h"
#include "fwi/random.h"

namespace fwi {

// Normalization and fairness checks tolerate this much accumulated rounding.
inline constexpr double kProbabilityTolerance = 1e-9;

// Opaque handle into a scenario's solution space. Used by every explicit
// (oracle-mode) instance; large scenarios use their own solution types.
struct SolutionId {
  std::uint64_t value = 0;

  friend auto operator<=>(const SolutionId&, const SolutionId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, SolutionId id) {
  return os << "S" << id.value;
}

// Sparse probability vector over SolutionIds. Entries are kept sorted by id,
// are strictly positive, and sum to 1 within kProbabilityTolerance.
class Distribution {
 public:
  struct Entry {
    SolutionId id;
    double probability = 0.0;
  };

  // Requires non-negative probabilities summing to 1 and no repeated id.
  // Zero entries are dropped.
  static Distribution FromEntries(std::vector<Entry> entries);

  // Normalizes non-negative weights; repeated ids are merged.
  static Distribution FromWeights(std::vector<Entry> weights);

  static Distribution PointMass(SolutionId id);

  // Probability of `id`; 0 outside the support.
  double operator[](SolutionId id) const;
  bool Contains(SolutionId id) const;

  std::size_t support_size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }
  std::vector<SolutionId> Support() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  explicit Distribution(std::vector<Entry> entries)
      : entries_(std::move(entries)) {}

  std::vector<Entry> entries_;
};

// t * p + (1 - t) * q.
Distribution Mix(const Distribution& p, const Distribution& q, double t);

// A non-negative welfare function on solutions of type S. Evaluations that
// come back negative or non-finite raise ParameterError.
template <typename S>
class ValueFunction {
 public:
  using Fn = std::function<double(const S&)>;

  explicit ValueFunction(Fn fn) : fn_(std::move(fn)) {
    if (!fn_) throw ParameterError("value function is empty");
  }

  double operator()(const S& solution) const {
    const double v = fn_(solution);
    if (!std::isfinite(v) || v < 0.0) {
      throw ParameterError("value function returned " + std::to_string(v) +
                           "; values must be finite and non-negative");
    }
    return v;
  }

 private:
  Fn fn_;
};

// `count` i.i.d. draws that all produced `solution`.
template <typename S>
struct Draw {
  S solution;
  std::size_t count = 1;
};

// Sampling access to an ex-ante fair mechanism. Sample() and SampleBatch()
// must describe the same law; SampleBatch(n) is n i.i.d. draws returned in
// compressed form (groups in no particular order). The explicit law is an
// opt-in capability meant for oracle checks only.
template <typename S>
class FairPrior {
 public:
  using Sampler = std::function<S(Rng&)>;
  using BatchSampler = std::function<std::vector<Draw<S>>(std::size_t, Rng&)>;

  explicit FairPrior(Sampler sampler, BatchSampler batch = nullptr)
      : sampler_(std::move(sampler)), batch_(std::move(batch)) {
    if (!sampler_) throw ParameterError("fair prior sampler is empty");
  }

  // Prior with a known law: inverse-CDF sampling, multinomial batches, and the
  // law itself exposed through explicit_law().
  static FairPrior FromDistribution(Distribution law)
    requires std::same_as<S, SolutionId>;

  S Sample(Rng& rng) const { return sampler_(rng); }

  std::vector<Draw<S>> SampleBatch(std::size_t n, Rng& rng) const {
    if (batch_) return batch_(n, rng);
    std::vector<Draw<S>> draws;
    draws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) draws.push_back({sampler_(rng), 1});
    return draws;
  }

  const std::optional<Distribution>& explicit_law() const {
    return explicit_law_;
  }

 private:
  Sampler sampler_;
  BatchSampler batch_;
  std::optional<Distribution> explicit_law_;
};

// A (possibly randomized) welfare-maximizing mechanism with claimed
// approximation factor lambda in (0, 1].
template <typename S>
class WelfareMechanism {
 public:
  using Runner = std::function<S(Rng&)>;

  WelfareMechanism(Runner run, double lambda)
      : run_(std::move(run)), lambda_(lambda) {
    if (!run_) throw ParameterError("mechanism is empty");
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw ParameterError("lambda must lie in (0, 1], got " +
                           std::to_string(lambda));
    }
  }

  // Mechanism that always outputs `solution`.
  static WelfareMechanism Fixed(S solution, double lambda) {
    return WelfareMechanism([s = std::move(solution)](Rng&) { return s; },
                            lambda);
  }

  S Run(Rng& rng) const { return run_(rng); }
  double lambda() const { return lambda_; }

 private:
  Runner run_;
  double lambda_;
};

inline void CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("alpha must lie in [0, 1], got " +
                         std::to_string(alpha));
  }
}

// The quadruplet (V, p^f, M_lambda, alpha). Immutable once built.
template <typename S>
class FwiInstance {
 public:
  FwiInstance(ValueFunction<S> value, FairPrior<S> prior,
              WelfareMechanism<S> mechanism, double alpha)
      : value_(std::move(value)),
        prior_(std::move(prior)),
        mechanism_(std::move(mechanism)),
        alpha_(alpha) {
    CheckAlpha(alpha);
  }

  const ValueFunction<S>& value() const { return value_; }
  const FairPrior<S>& prior() const { return prior_; }
  const WelfareMechanism<S>& mechanism() const { return mechanism_; }
  double alpha() const { return alpha_; }

  FwiInstance WithAlpha(double alpha) const {
    return FwiInstance(value_, prior_, mechanism_, alpha);
  }

 private:
  ValueFunction<S> value_;
  FairPrior<S> prior_;
  WelfareMechanism<S> mechanism_;
  double alpha_;
};

using ExplicitValue = ValueFunction<SolutionId>;
using ExplicitInstance = FwiInstance<SolutionId>;

// V(p) = sum_i p_i V(i).
double ExpectedValue(const Distribution& dist, const ExplicitValue& value);

// TV(p, q) = 1/2 sum_i |p_i - q_i| over the union of supports.
double TvDistance(const Distribution& p, const Distribution& q);

// TV(p, prior) <= alpha (+ kProbabilityTolerance).
bool IsAlphaFair(const Distribution& p, const Distribution& prior,
                 double alpha);

// ---------------------------------------------------------------------------

template <typename S>
FairPrior<S> FairPrior<S>::FromDistribution(Distribution law)
  requires std::same_as<S, SolutionId>
{
  auto ids = std::make_shared<std::vector<SolutionId>>();
  auto cumulative = std::make_shared<std::vector<double>>();
  auto probs = std::make_shared<std::vector<double>>();
  double acc = 0.0;
  for (const auto& e : law) {
    ids->push_back(e.id);
    probs->push_back(e.probability);
    acc += e.probability;
    cumulative->push_back(acc);
  }

  Sampler sampler = [ids, cumulative](Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng) *
                     cumulative->back();
    auto it = std::upper_bound(cumulative->begin(), cumulative->end(), u);
    auto idx = static_cast<std::size_t>(it - cumulative->begin());
    return (*ids)[std::min(idx, ids->size() - 1)];
  };

  // Multinomial counts via sequential conditional binomials.
  BatchSampler batch = [ids, probs](std::size_t n, Rng& rng) {
    std::vector<Draw<SolutionId>> draws;
    std::size_t remaining = n;
    double mass_left = 1.0;
    for (std::size_t i = 0; i < ids->size() && remaining > 0; ++i) {
      std::size_t count = remaining;
      if (i + 1 < ids->size()) {
        const double p = std::clamp((*probs)[i] / mass_left, 0.0, 1.0);
        count = std::binomial_distribution<std::size_t>(remaining, p)(rng);
      }
      mass_left -= (*probs)[i];
      if (mass_left < 0.0) mass_left = 0.0;
      if (count > 0) draws.push_back({(*ids)[i], count});
      remaining -= count;
    }
    return draws;
  };

  FairPrior prior(std::move(sampler), std::move(batch));
  prior.explicit_law_ = std::move(law);
  return prior;
}

}  // namespace fwi

template <>
struct std::hash<fwi::SolutionId> {
  std::size_t operator()(fwi::SolutionId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

#endif  // FWI_CORE_H_
