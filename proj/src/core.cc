#include "fwi/core.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace fwi {
namespace {

void SortById(std::vector<Distribution::Entry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
}

void CheckProbability(double p) {
  if (!std::isfinite(p) || p < 0.0) {
    throw ParameterError("probabilities must be finite and non-negative, got " +
                         std::to_string(p));
  }
}

}  // namespace

Distribution Distribution::FromEntries(std::vector<Entry> entries) {
  SortById(entries);
  double total = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CheckProbability(entries[i].probability);
    if (i > 0 && entries[i].id == entries[i - 1].id) {
      throw ParameterError("repeated solution id " +
                           std::to_string(entries[i].id.value));
    }
    total += entries[i].probability;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw ParameterError("probabilities sum to " + std::to_string(total) +
                         ", expected 1");
  }
  std::erase_if(entries, [](const Entry& e) { return e.probability == 0.0; });
  return Distribution(std::move(entries));
}

Distribution Distribution::FromWeights(std::vector<Entry> weights) {
  SortById(weights);
  std::vector<Entry> merged;
  double total = 0.0;
  for (const auto& w : weights) {
    CheckProbability(w.probability);
    total += w.probability;
    if (!merged.empty() && merged.back().id == w.id) {
      merged.back().probability += w.probability;
    } else {
      merged.push_back(w);
    }
  }
  if (!(total > 0.0)) throw ParameterError("weights sum to zero");
  std::erase_if(merged, [](const Entry& e) { return e.probability == 0.0; });
  for (auto& e : merged) e.probability /= total;
  return Distribution(std::move(merged));
}

Distribution Distribution::PointMass(SolutionId id) {
  return Distribution({{id, 1.0}});
}

double Distribution::operator[](SolutionId id) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry& e, SolutionId key) { return e.id < key; });
  return (it != entries_.end() && it->id == id) ? it->probability : 0.0;
}

bool Distribution::Contains(SolutionId id) const { return (*this)[id] > 0.0; }

std::vector<SolutionId> Distribution::Support() const {
  std::vector<SolutionId> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.id);
  return ids;
}

Distribution Mix(const Distribution& p, const Distribution& q, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParameterError("mixing weight must lie in [0, 1]");
  }
  std::vector<Distribution::Entry> entries;
  for (const auto& e : p) entries.push_back({e.id, t * e.probability});
  for (const auto& e : q) entries.push_back({e.id, (1.0 - t) * e.probability});
  return Distribution::FromWeights(std::move(entries));
}

double ExpectedValue(const Distribution& dist, const ExplicitValue& value) {
  double total = 0.0;
  for (const auto& e : dist) total += e.probability * value(e.id);
  return total;
}

double TvDistance(const Distribution& p, const Distribution& q) {
  auto a = p.entries();
  auto b = q.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  double l1 = 0.0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].id < b[j].id)) {
      l1 += a[i++].probability;
    } else if (i == a.size() || b[j].id < a[i].id) {
      l1 += b[j++].probability;
    } else {
      l1 += std::abs(a[i++].probability - b[j++].probability);
    }
  }
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

bool IsAlphaFair(const Distribution& p, const Distribution& prior,
                 double alpha) {
  CheckAlpha(alpha);
  return TvDistance(p, prior) <= alpha + kProbabilityTolerance;
}

}  // namespace fwi
