#include "fwi/sortition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace fwi::sortition {
namespace {

void CheckMembers(const Panel& panel, const PointSet& points) {
  if (panel.size() == 0) throw ParameterError("panel is empty");
  if (panel.members().back() >= static_cast<int>(points.size())) {
    throw ParameterError("panel member " +
                         std::to_string(panel.members().back()) +
                         " is not a point index");
  }
}

}  // namespace

PointSet::PointSet(std::size_t n_points, std::size_t dim,
                   std::vector<double> coords)
    : n_points_(n_points), dim_(dim), coords_(std::move(coords)) {
  if (n_points == 0 || dim == 0) {
    throw ParameterError("point set needs at least one point and dimension");
  }
  if (coords_.size() != n_points * dim) {
    throw ParameterError("coordinate buffer has the wrong size");
  }
  for (double x : coords_) {
    if (!std::isfinite(x)) throw ParameterError("coordinates must be finite");
  }
  std::vector<std::size_t> order(n_points);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    auto ra = Row(a);
    auto rb = Row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(),
                                        rb.end());
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t i = 1; i < n_points; ++i) {
    auto ra = Row(order[i - 1]);
    auto rb = Row(order[i]);
    if (std::equal(ra.begin(), ra.end(), rb.begin())) {
      throw ParameterError("points " + std::to_string(order[i - 1]) + " and " +
                           std::to_string(order[i]) + " coincide");
    }
  }
}

double PointSet::SquaredDistance(std::size_t i, std::size_t j) const {
  const double* a = coords_.data() + i * dim_;
  const double* b = coords_.data() + j * dim_;
  double total = 0.0;
  for (std::size_t t = 0; t < dim_; ++t) {
    const double diff = a[t] - b[t];
    total += diff * diff;
  }
  return total;
}

Panel::Panel(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (!members_.empty() && members_.front() < 0) {
    throw ParameterError("panel members must be non-negative");
  }
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw ParameterError("panel members must be distinct");
  }
}

double PanelCost(const Panel& panel, const PointSet& points) {
  CheckMembers(panel, points);
  double cost = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (int k : panel.members()) {
      best = std::min(best, points.SquaredDistance(p, k));
    }
    cost += best;
  }
  return cost;
}

double LikelihoodFromCost(double cost, std::size_t n_points) {
  if (!(cost >= 0.0) || n_points == 0) {
    throw ParameterError("cost must be non-negative over a non-empty set");
  }
  return std::exp(-cost / static_cast<double>(n_points));
}

ValueFunction<Panel> LikelihoodValue(std::shared_ptr<const PointSet> points) {
  return ValueFunction<Panel>([pts = std::move(points)](const Panel& panel) {
    return LikelihoodFromCost(PanelCost(panel, *pts), pts->size());
  });
}

Panel KMeansPPSelect(const PointSet& points, int k, Rng& rng) {
  const std::size_t n = points.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw ParameterError("k must lie in [1, " + std::to_string(n) + "], got " +
                         std::to_string(k));
  }
  std::vector<int> chosen;
  chosen.reserve(k);
  chosen.push_back(std::uniform_int_distribution<int>(
      0, static_cast<int>(n) - 1)(rng));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < static_cast<std::size_t>(k)) {
    const int last = chosen.back();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      nearest[p] = std::min(nearest[p], points.SquaredDistance(p, last));
      total += nearest[p];
    }
    // Points are distinct, so an unchosen point always has positive weight.
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * total;
    double acc = 0.0;
    int pick = -1;
    for (std::size_t p = 0; p < n; ++p) {
      if (nearest[p] <= 0.0) continue;
      acc += nearest[p];
      pick = static_cast<int>(p);
      if (u < acc) break;
    }
    chosen.push_back(pick);
  }
  return Panel(std::move(chosen));
}

std::vector<int> NearestNeighbors(const PointSet& points, int c, int q) {
  const int n = static_cast<int>(points.size());
  if (c < 0 || c >= n) throw ParameterError("point index out of range");
  if (q < 0) throw ParameterError("neighbour count must be non-negative");
  q = std::min(q, n - 1);
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(n - 1);
  for (int p = 0; p < n; ++p) {
    if (p != c) ranked.push_back({points.SquaredDistance(c, p), p});
  }
  std::partial_sort(ranked.begin(), ranked.begin() + q, ranked.end());
  std::vector<int> out(q);
  for (int i = 0; i < q; ++i) out[i] = ranked[i].second;
  return out;
}

int DefaultReplaceCount(int n_k) {
  if (n_k < 0) throw ParameterError("panel size must be non-negative");
  return 3 * n_k / 4;
}

RandomReplace::RandomReplace(std::shared_ptr<const PointSet> points,
                             Panel initial, int q)
    : points_(std::move(points)), initial_(std::move(initial)), q_(q) {
  if (!points_) throw ParameterError("RandomReplace needs points");
  CheckMembers(initial_, *points_);
  if (q < 0 || static_cast<std::size_t>(q) > initial_.size()) {
    throw ParameterError("q must lie in [0, " + std::to_string(initial_.size()) +
                         "], got " + std::to_string(q));
  }
  neighbors_.reserve(initial_.size());
  for (int c : initial_.members()) {
    neighbors_.push_back(NearestNeighbors(*points_, c, q));
  }
}

Panel RandomReplace::Sample(Rng& rng) const {
  const std::size_t k = initial_.size();
  std::vector<int> members(initial_.members().begin(), initial_.members().end());
  if (q_ == 0) return initial_;
  std::vector<char> on_panel(points_->size(), 0);
  for (int m : members) on_panel[m] = 1;

  std::vector<std::size_t> slots(k);
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<int> open;
  for (int i = 0; i < q_; ++i) {
    const std::size_t j =
        std::uniform_int_distribution<std::size_t>(i, k - 1)(rng);
    std::swap(slots[i], slots[j]);
    const std::size_t slot = slots[i];
    open.clear();
    for (int candidate : neighbors_[slot]) {
      if (!on_panel[candidate]) open.push_back(candidate);
    }
    if (open.empty()) continue;
    const int pick = open[std::uniform_int_distribution<std::size_t>(
        0, open.size() - 1)(rng)];
    on_panel[members[slot]] = 0;
    on_panel[pick] = 1;
    members[slot] = pick;
  }
  return Panel(std::move(members));
}

Panel RandomReplaceSample(const PointSet& points, const Panel& initial, int q,
                          Rng& rng) {
  return RandomReplace(std::make_shared<const PointSet>(points), initial, q)
      .Sample(rng);
}

FwiInstance<Panel> MakeSortitionInstance(std::shared_ptr<const PointSet> points,
                                         int n_k, double alpha,
                                         std::uint64_t seed, double lambda) {
  Rng rng = MakeRng(seed);
  Panel initial = KMeansPPSelect(*points, n_k, rng);
  auto replace = std::make_shared<const RandomReplace>(
      points, initial, DefaultReplaceCount(n_k));
  return FwiInstance<Panel>(
      LikelihoodValue(points),
      FairPrior<Panel>([replace](Rng& r) { return replace->Sample(r); }),
      WelfareMechanism<Panel>::Fixed(std::move(initial), lambda), alpha);
}

}  // namespace fwi::sortition
