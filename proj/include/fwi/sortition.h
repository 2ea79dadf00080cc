#ifndef FWI_SORTITION_H_
#define FWI_SORTITION_H_

// Panel selection over a point cloud: k-means++ seeding as the welfare
// mechanism, RandomReplace as the fair prior, and a likelihood-style value.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fwi/core.h"

namespace fwi::sortition {

// N x d row-major coordinates. Rows must be finite and pairwise distinct.
class PointSet {
 public:
  PointSet(std::size_t n_points, std::size_t dim, std::vector<double> coords);

  std::size_t size() const { return n_points_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> Row(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const { return coords_; }

  double SquaredDistance(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_points_;
  std::size_t dim_;
  std::vector<double> coords_;
};

// Distinct point indices, kept sorted.
class Panel {
 public:
  Panel() = default;
  explicit Panel(std::vector<int> members);

  std::span<const int> members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  friend auto operator<=>(const Panel&, const Panel&) = default;

 private:
  std::vector<int> members_;
};

// Sum over points of the squared distance to the nearest panel member.
double PanelCost(const Panel& panel, const PointSet& points);

// exp(-cost / N).
double LikelihoodFromCost(double cost, std::size_t n_points);
ValueFunction<Panel> LikelihoodValue(std::shared_ptr<const PointSet> points);

// D^2 seeding over the data points: first member uniform, each further member
// drawn with probability proportional to its squared distance to the nearest
// member so far.
Panel KMeansPPSelect(const PointSet& points, int k, Rng& rng);

// The q points closest to point c, c excluded, nearest first; ties by index.
// q is clamped to N - 1.
std::vector<int> NearestNeighbors(const PointSet& points, int c, int q);

// floor(3 n_k / 4).
int DefaultReplaceCount(int n_k);

// Picks q members of `initial` uniformly without replacement and, in that
// order, replaces each member c with a uniform draw from those of c's q
// nearest neighbours that are not currently on the panel. When every
// neighbour is taken, c stays.
class RandomReplace {
 public:
  RandomReplace(std::shared_ptr<const PointSet> points, Panel initial, int q);

  Panel Sample(Rng& rng) const;

  const Panel& initial() const { return initial_; }
  int q() const { return q_; }
  // Neighbour list of the i-th member of initial().
  std::span<const int> neighbors(std::size_t i) const { return neighbors_[i]; }

 private:
  std::shared_ptr<const PointSet> points_;
  Panel initial_;
  int q_;
  std::vector<std::vector<int>> neighbors_;
};

Panel RandomReplaceSample(const PointSet& points, const Panel& initial, int q,
                          Rng& rng);

// One k-means++ panel of size n_k, drawn from `seed`, serves as the mechanism
// output and as the base that RandomReplace (q = floor(3 n_k / 4)) perturbs.
// Value is LikelihoodValue.
FwiInstance<Panel> MakeSortitionInstance(std::shared_ptr<const PointSet> points,
                                         int n_k, double alpha,
                                         std::uint64_t seed,
                                         double lambda = 1.0);

}  // namespace fwi::sortition

#endif  // FWI_SORTITION_H_
