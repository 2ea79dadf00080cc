#ifndef FWI_ASSIGNMENT_H_
#define FWI_ASSIGNMENT_H_

// Weighted bipartite B-matching: agents (left) are matched to items (right);
// every item needs exactly `demand` distinct agents and no agent takes more
// than `load_cap` items. Covers both the goods scenario (demand 1, cap 1) and
// reviewer assignment (papers need b reviewers).

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fwi/core.h"

namespace fwi::assignment {

class BipartiteInstance {
 public:
  // `weights` is row-major n_left x n_right. Throws ParameterError on
  // negative/non-finite weights or bad sizes, InfeasibleError when
  // n_left * load_cap < n_right * demand or demand > n_left.
  BipartiteInstance(int n_left, int n_right, std::vector<double> weights,
                    int demand, int load_cap);

  int n_left() const { return n_left_; }
  int n_right() const { return n_right_; }
  int demand() const { return demand_; }
  int load_cap() const { return load_cap_; }
  double weight(int agent, int item) const {
    return weights_[static_cast<std::size_t>(agent) * n_right_ + item];
  }
  std::span<const double> weights() const { return weights_; }

 private:
  int n_left_;
  int n_right_;
  std::vector<double> weights_;
  int demand_;
  int load_cap_;
};

struct Edge {
  int agent = 0;
  int item = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A set of (agent, item) edges, kept sorted.
class AssignmentSolution {
 public:
  AssignmentSolution() = default;
  explicit AssignmentSolution(std::vector<Edge> edges);

  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

  friend auto operator<=>(const AssignmentSolution&,
                          const AssignmentSolution&) = default;

 private:
  std::vector<Edge> edges_;
};

// Every item matched exactly `demand` times, every agent at most `load_cap`
// times, no repeated edge, all indices in range.
bool IsFeasible(const BipartiteInstance& instance,
                const AssignmentSolution& solution);

double TotalWeight(const BipartiteInstance& instance,
                   const AssignmentSolution& solution);

// Goods scenario: i.i.d. Uniform[0,1] weights, demand 1, cap 1.
BipartiteInstance SyntheticInstance(int n_left, int n_right, Rng& rng);

// Scans edges by weight descending (ties: lower (agent, item) first) and keeps
// an edge when its item is still short and its agent is under cap. If that
// single pass leaves an item short, exchange repairs complete the matching.
AssignmentSolution GreedyMatching(const BipartiteInstance& instance);

// Graphs larger than this (agents + items) are refused by MaxMatching.
inline constexpr int kMaxExactNodes = 500;

// Maximum-weight feasible B-matching by successive shortest paths on the
// source -> agents -> items -> sink network with unit costs -w.
AssignmentSolution MaxMatching(const BipartiteInstance& instance);

// Randomized round robin. Each pass draws a fresh uniform permutation of the
// agents; in that order every agent under its cap takes its favourite item
// that is still short and that it does not already hold (agents with nothing
// available are skipped). Passes repeat until every item is full.
class RoundRobin {
 public:
  explicit RoundRobin(std::shared_ptr<const BipartiteInstance> instance);

  AssignmentSolution Sample(Rng& rng) const;

 private:
  std::shared_ptr<const BipartiteInstance> instance_;
  // preferences_[a]: items by weight descending, ties by item index.
  std::vector<std::vector<int>> preferences_;
};

AssignmentSolution RoundRobinSample(const BipartiteInstance& instance,
                                    Rng& rng);

// Sum of the weights of the chosen edges.
ValueFunction<AssignmentSolution> UtilitarianValue(
    std::shared_ptr<const BipartiteInstance> instance);

// Total weight of the edges incident to `agent`.
ValueFunction<AssignmentSolution> AgentUtility(
    std::shared_ptr<const BipartiteInstance> instance, int agent);

// Geometric mean of the agents' utilities; 0 if any utility is 0.
template <typename S>
ValueFunction<S> NashValue(std::vector<ValueFunction<S>> utilities);

double GeometricMean(std::span<const double> values);

// FWI instance for an assignment scenario: utilitarian welfare, round-robin
// prior, and the given mechanism (evaluated once and cached; both mechanisms
// here are deterministic).
enum class MechanismKind { kMaxMatching, kGreedy };

FwiInstance<AssignmentSolution> MakeAssignmentInstance(
    std::shared_ptr<const BipartiteInstance> instance, MechanismKind mechanism,
    double lambda, double alpha);

// ---------------------------------------------------------------------------

template <typename S>
ValueFunction<S> NashValue(std::vector<ValueFunction<S>> utilities) {
  if (utilities.empty()) throw ParameterError("Nash welfare needs agents");
  return ValueFunction<S>([us = std::move(utilities)](const S& s) {
    std::vector<double> values;
    values.reserve(us.size());
    for (const auto& u : us) values.push_back(u(s));
    return GeometricMean(values);
  });
}

}  // namespace fwi::assignment

#endif  // FWI_ASSIGNMENT_H_
