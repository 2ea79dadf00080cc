#ifndef FWI_MIX_H_
#define FWI_MIX_H_

// The two interpolation algorithms between an ex-ante fair prior and a
// welfare-maximizing mechanism:
//
//   EpsilonMix: with probability alpha output the mechanism's solution A;
//     otherwise draw s prior samples, rank them by value, strip alpha*s units
//     of weight from the low end, and return a sample drawn proportionally to
//     what is left. Alpha-fair for every s; welfare >= lambda (1 - eps) of the
//     best alpha-fair distribution when s = SampleSize(alpha, eps).
//
//   SimpleMix: with probability alpha output A; otherwise one prior sample.
//     Never evaluates V.

#include <algorithm>
#include <cassert>
#include <concepts>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "fwi/core.h"

namespace fwi {

// ceil(8 ln(2/eps) / ((1 - alpha) eps^2)). Requires alpha in [0,1) and
// epsilon in (0,1).
std::size_t SampleSize(double alpha, double epsilon);

// ceil(SampleSize(0, eps) / (1 - alpha)): the per-call sample count used in
// the published synthetic experiments. Never smaller than SampleSize.
std::size_t TabulatedSampleSize(double alpha, double epsilon);

// Unit weights on s ranked samples after removing alpha*s mass from the
// tail: a run of 1.0s, at most one fractional entry, then 0.0s.
class WeightVector {
 public:
  WeightVector(std::size_t size, double alpha);

  std::size_t size() const { return size_; }
  double operator[](std::size_t j) const;
  double sum() const { return static_cast<double>(full_count_) + fractional_; }

  // Number of leading entries equal to 1.
  std::size_t full_count() const { return full_count_; }
  double fractional() const { return fractional_; }

  std::vector<double> values() const;

  // Index j such that u * sum() falls in the j-th cumulative-weight bucket.
  // u must lie in [0, 1).
  std::size_t Invert(double u) const;

 private:
  std::size_t size_;
  std::size_t full_count_;
  double fractional_;
};

WeightVector TrimWeights(std::size_t size, double alpha);

// Ranked prior samples, run-length encoded: runs appear by value descending,
// equal values by solution ascending, and adjacent equal solutions are merged.
template <typename S>
class SortedSampleVector {
 public:
  struct Run {
    S solution;
    double value = 0.0;
    std::size_t count = 0;
  };

  SortedSampleVector(std::vector<Draw<S>> draws, const ValueFunction<S>& value);

  std::size_t size() const { return size_; }
  std::span<const Run> runs() const { return runs_; }

  // The j-th order statistic (0-based, highest value first).
  const Run& At(std::size_t rank) const;

  bool IsNonIncreasing() const;

 private:
  std::vector<Run> runs_;
  std::size_t size_ = 0;
};

struct EpsilonMixOptions {
  double epsilon = 0.1;
  // Overrides SampleSize(alpha, epsilon). The alpha-fairness guarantee holds
  // for any count; the welfare guarantee only for the default.
  std::optional<std::size_t> sample_count;
};

// Everything EpsilonMix decided on one call; ranked/weights/rank are empty
// when the coin sent the call to the mechanism.
template <typename S>
struct EpsilonMixTrace {
  S result;
  bool used_mechanism = false;
  std::optional<SortedSampleVector<S>> ranked;
  std::optional<WeightVector> weights;
  std::size_t rank = 0;
};

template <typename S>
EpsilonMixTrace<S> EpsilonMixTraced(const FwiInstance<S>& instance,
                                    const EpsilonMixOptions& options,
                                    Rng& rng);

template <typename S>
S EpsilonMix(const FwiInstance<S>& instance, const EpsilonMixOptions& options,
             Rng& rng) {
  return EpsilonMixTraced(instance, options, rng).result;
}

template <typename S>
S SimpleMix(const FwiInstance<S>& instance, Rng& rng) {
  if (std::bernoulli_distribution(instance.alpha())(rng)) {
    return instance.mechanism().Run(rng);
  }
  return instance.prior().Sample(rng);
}

// Exact output law of SimpleMix: alpha * 1{i = a} + (1 - alpha) * prior_i.
Distribution SimpleMixDistribution(const Distribution& prior, SolutionId a,
                                   double alpha);

void ValidateEpsilonMixOptions(const EpsilonMixOptions& options);

// ---------------------------------------------------------------------------

template <typename S>
SortedSampleVector<S>::SortedSampleVector(std::vector<Draw<S>> draws,
                                          const ValueFunction<S>& value) {
  static_assert(std::totally_ordered<S>,
                "solutions must be ordered for deterministic tie-breaking");
  runs_.reserve(draws.size());
  for (auto& d : draws) {
    if (d.count == 0) continue;
    const double v = value(d.solution);
    runs_.push_back({std::move(d.solution), v, d.count});
  }
  std::stable_sort(runs_.begin(), runs_.end(),
                   [](const Run& a, const Run& b) {
                     if (a.value != b.value) return a.value > b.value;
                     return a.solution < b.solution;
                   });
  std::vector<Run> merged;
  merged.reserve(runs_.size());
  for (auto& r : runs_) {
    size_ += r.count;
    if (!merged.empty() && merged.back().solution == r.solution) {
      merged.back().count += r.count;
    } else {
      merged.push_back(std::move(r));
    }
  }
  runs_ = std::move(merged);
}

template <typename S>
const typename SortedSampleVector<S>::Run& SortedSampleVector<S>::At(
    std::size_t rank) const {
  if (rank >= size_) throw ParameterError("rank out of range");
  for (const Run& r : runs_) {
    if (rank < r.count) return r;
    rank -= r.count;
  }
  return runs_.back();
}

template <typename S>
bool SortedSampleVector<S>::IsNonIncreasing() const {
  for (std::size_t i = 1; i < runs_.size(); ++i) {
    if (runs_[i].value > runs_[i - 1].value) return false;
  }
  return true;
}

template <typename S>
EpsilonMixTrace<S> EpsilonMixTraced(const FwiInstance<S>& instance,
                                    const EpsilonMixOptions& options,
                                    Rng& rng) {
  ValidateEpsilonMixOptions(options);
  const double alpha = instance.alpha();
  // alpha == 1 always lands here, before SampleSize would divide by zero.
  if (std::bernoulli_distribution(alpha)(rng)) {
    return {instance.mechanism().Run(rng), true, std::nullopt, std::nullopt,
            0};
  }
  const std::size_t s =
      options.sample_count.value_or(SampleSize(alpha, options.epsilon));
  SortedSampleVector<S> ranked(instance.prior().SampleBatch(s, rng),
                               instance.value());
  assert(ranked.IsNonIncreasing());
  assert(ranked.size() == s);
  WeightVector weights = TrimWeights(s, alpha);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const std::size_t rank = weights.Invert(u);
  S result = ranked.At(rank).solution;
  return {std::move(result), false, std::move(ranked), std::move(weights),
          rank};
}

}  // namespace fwi

#endif  // FWI_MIX_H_
