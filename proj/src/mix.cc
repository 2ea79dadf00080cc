#include "fwi/mix.h"

#include <cmath>
#include <limits>
#include <string>

namespace fwi {
namespace {

// Snaps values within a few ulps of an integer before taking the ceiling, so
// that e.g. 2397 / (1 - 0.95) does not round up to 47941.
std::size_t CeilToSize(double x) {
  const double nearest = std::round(x);
  const double c = std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)
                       ? nearest
                       : std::ceil(x);
  if (!(c < static_cast<double>(std::numeric_limits<std::size_t>::max()))) {
    throw ParameterError("sample size overflows");
  }
  return static_cast<std::size_t>(c);
}

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1), got " +
                         std::to_string(epsilon));
  }
}

void CheckSampleAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ParameterError("sample size needs alpha in [0, 1), got " +
                         std::to_string(alpha));
  }
}

}  // namespace

std::size_t SampleSize(double alpha, double epsilon) {
  CheckSampleAlpha(alpha);
  CheckEpsilon(epsilon);
  return CeilToSize(8.0 * std::log(2.0 / epsilon) /
                    ((1.0 - alpha) * epsilon * epsilon));
}

std::size_t TabulatedSampleSize(double alpha, double epsilon) {
  CheckSampleAlpha(alpha);
  return CeilToSize(static_cast<double>(SampleSize(0.0, epsilon)) /
                    (1.0 - alpha));
}

WeightVector::WeightVector(std::size_t size, double alpha) : size_(size) {
  CheckAlpha(alpha);
  if (size == 0) throw ParameterError("weight vector needs at least one entry");
  const double kept = (1.0 - alpha) * static_cast<double>(size);
  double whole = std::floor(kept);
  double frac = kept - whole;
  if (frac < 1e-12) {
    frac = 0.0;
  } else if (frac > 1.0 - 1e-12) {
    whole += 1.0;
    frac = 0.0;
  }
  full_count_ = std::min(size, static_cast<std::size_t>(whole));
  fractional_ = full_count_ < size ? frac : 0.0;
}

double WeightVector::operator[](std::size_t j) const {
  if (j < full_count_) return 1.0;
  if (j == full_count_) return fractional_;
  return 0.0;
}

std::vector<double> WeightVector::values() const {
  std::vector<double> w(size_, 0.0);
  for (std::size_t j = 0; j < size_; ++j) w[j] = (*this)[j];
  return w;
}

std::size_t WeightVector::Invert(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw ParameterError("u must lie in [0, 1)");
  if (!(sum() > 0.0)) throw ParameterError("all weight was trimmed");
  const double target = u * sum();
  // Cumulative weight after entry j is j + 1 on the unit prefix, so the
  // bucket containing target is floor(target); anything past the prefix falls
  // on the single fractional entry.
  const auto j = static_cast<std::size_t>(std::floor(target));
  return std::min(j, full_count_ < size_ && fractional_ > 0.0
                         ? full_count_
                         : full_count_ - 1);
}

WeightVector TrimWeights(std::size_t size, double alpha) {
  return WeightVector(size, alpha);
}

Distribution SimpleMixDistribution(const Distribution& prior, SolutionId a,
                                   double alpha) {
  CheckAlpha(alpha);
  std::vector<Distribution::Entry> entries;
  entries.reserve(prior.support_size() + 1);
  bool saw_a = false;
  for (const auto& e : prior) {
    double p = (1.0 - alpha) * e.probability;
    if (e.id == a) {
      p += alpha;
      saw_a = true;
    }
    entries.push_back({e.id, p});
  }
  if (!saw_a) entries.push_back({a, alpha});
  return Distribution::FromEntries(std::move(entries));
}

void ValidateEpsilonMixOptions(const EpsilonMixOptions& options) {
  CheckEpsilon(options.epsilon);
  if (options.sample_count && *options.sample_count == 0) {
    throw ParameterError("sample count must be positive");
  }
}

}  // namespace fwi
