#include "fwi/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

namespace fwi::assignment {
namespace {

// Mutable matching under construction.
class PartialMatching {
 public:
  explicit PartialMatching(const BipartiteInstance& instance)
      : instance_(instance),
        load_(instance.n_left(), 0),
        count_(instance.n_right(), 0),
        holds_(static_cast<std::size_t>(instance.n_left()) * instance.n_right(),
               0),
        missing_(static_cast<std::size_t>(instance.n_right()) *
                 instance.demand()) {}

  bool Holds(int agent, int item) const { return holds_[Index(agent, item)]; }
  bool ItemShort(int item) const { return count_[item] < instance_.demand(); }
  bool AgentOpen(int agent) const { return load_[agent] < instance_.load_cap(); }
  bool Complete() const { return missing_ == 0; }

  bool CanAdd(int agent, int item) const {
    return ItemShort(item) && AgentOpen(agent) && !Holds(agent, item);
  }

  void Add(int agent, int item) {
    holds_[Index(agent, item)] = 1;
    ++load_[agent];
    ++count_[item];
    --missing_;
  }

  // Fills every short item. An agent under cap that lacks the item takes it
  // directly; otherwise every open agent `a` already holds it, so a full agent
  // `b` lacking it hands one of its items that `a` lacks over to `a` and takes
  // the short item instead. Each step adds one edge.
  void Repair() {
    const int n_left = instance_.n_left();
    const int n_right = instance_.n_right();
    for (int item = 0; item < n_right; ++item) {
      while (ItemShort(item)) {
        int direct = -1;
        int open = -1;
        int full = -1;
        for (int a = 0; a < n_left; ++a) {
          if (AgentOpen(a)) {
            if (!Holds(a, item) && direct < 0) direct = a;
            if (open < 0) open = a;
          } else if (!Holds(a, item) && full < 0) {
            full = a;
          }
        }
        if (direct >= 0) {
          Add(direct, item);
          continue;
        }
        int handed = -1;
        if (open >= 0 && full >= 0) {
          for (int k = 0; k < n_right && handed < 0; ++k) {
            if (Holds(full, k) && !Holds(open, k)) handed = k;
          }
        }
        if (handed < 0) {
          throw InfeasibleError("cannot complete the B-matching");
        }
        holds_[Index(full, handed)] = 0;
        holds_[Index(open, handed)] = 1;
        ++load_[open];
        holds_[Index(full, item)] = 1;
        ++count_[item];
        --missing_;
      }
    }
  }

  AssignmentSolution Build() const {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(instance_.n_right()) *
                  instance_.demand());
    for (int a = 0; a < instance_.n_left(); ++a) {
      for (int j = 0; j < instance_.n_right(); ++j) {
        if (Holds(a, j)) edges.push_back({a, j});
      }
    }
    return AssignmentSolution(std::move(edges));
  }

 private:
  std::size_t Index(int agent, int item) const {
    return static_cast<std::size_t>(agent) * instance_.n_right() + item;
  }

  const BipartiteInstance& instance_;
  std::vector<int> load_;
  std::vector<int> count_;
  std::vector<char> holds_;
  std::size_t missing_;
};

// Successive-shortest-path min-cost flow with Dijkstra on reduced costs.
class MinCostFlow {
 public:
  struct Arc {
    int to;
    int capacity;
    double cost;
  };

  explicit MinCostFlow(int n_nodes) : adjacency_(n_nodes) {}

  int AddArc(int from, int to, int capacity, double cost) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, capacity, cost});
    adjacency_[from].push_back(id);
    arcs_.push_back({from, 0, -cost});
    adjacency_[to].push_back(id + 1);
    return id;
  }

  // Pushes `target` units from source to sink. `potential` must make every
  // residual arc's reduced cost non-negative. Returns the flow pushed.
  int Solve(int source, int sink, int target, std::vector<double> potential) {
    const int n = static_cast<int>(adjacency_.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    int pushed = 0;
    std::vector<double> dist(n);
    std::vector<int> via(n);
    while (pushed < target) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(via.begin(), via.end(), -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[source] = 0.0;
      heap.push({0.0, source});
      while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (int id : adjacency_[v]) {
          const Arc& arc = arcs_[id];
          if (arc.capacity == 0) continue;
          const double reduced =
              std::max(0.0, arc.cost + potential[v] - potential[arc.to]);
          if (d + reduced < dist[arc.to]) {
            dist[arc.to] = d + reduced;
            via[arc.to] = id;
            heap.push({dist[arc.to], arc.to});
          }
        }
      }
      if (dist[sink] == kInf) break;
      for (int v = 0; v < n; ++v) {
        if (dist[v] < kInf) potential[v] += dist[v];
      }
      int bottleneck = target - pushed;
      for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        bottleneck = std::min(bottleneck, arcs_[via[v]].capacity);
      }
      for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].capacity -= bottleneck;
        arcs_[via[v] ^ 1].capacity += bottleneck;
      }
      pushed += bottleneck;
    }
    return pushed;
  }

  const Arc& arc(int id) const { return arcs_[id]; }

 private:
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace

BipartiteInstance::BipartiteInstance(int n_left, int n_right,
                                     std::vector<double> weights, int demand,
                                     int load_cap)
    : n_left_(n_left),
      n_right_(n_right),
      weights_(std::move(weights)),
      demand_(demand),
      load_cap_(load_cap) {
  if (n_left < 1 || n_right < 1) {
    throw ParameterError("bipartite instance needs at least one node per side");
  }
  if (weights_.size() != static_cast<std::size_t>(n_left) * n_right) {
    throw ParameterError("weight matrix has " + std::to_string(weights_.size()) +
                         " entries, expected " +
                         std::to_string(static_cast<std::size_t>(n_left) *
                                        n_right));
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ParameterError("weights must be finite and non-negative");
    }
  }
  if (demand < 1 || load_cap < 1) {
    throw ParameterError("demand and load cap must be at least 1");
  }
  if (demand > n_left) {
    throw InfeasibleError("demand " + std::to_string(demand) + " exceeds the " +
                          std::to_string(n_left) + " available agents");
  }
  if (static_cast<long long>(n_left) * load_cap <
      static_cast<long long>(n_right) * demand) {
    throw InfeasibleError("agents cannot cover demand: " +
                          std::to_string(n_left) + " x " +
                          std::to_string(load_cap) + " < " +
                          std::to_string(n_right) + " x " +
                          std::to_string(demand));
  }
}

AssignmentSolution::AssignmentSolution(std::vector<Edge> edges)
    : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
}

bool IsFeasible(const BipartiteInstance& instance,
                const AssignmentSolution& solution) {
  std::vector<int> load(instance.n_left(), 0);
  std::vector<int> count(instance.n_right(), 0);
  const auto edges = solution.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.agent < 0 || e.agent >= instance.n_left() || e.item < 0 ||
        e.item >= instance.n_right()) {
      return false;
    }
    if (i > 0 && edges[i - 1] == e) return false;
    ++load[e.agent];
    ++count[e.item];
  }
  return std::all_of(load.begin(), load.end(),
                     [&](int l) { return l <= instance.load_cap(); }) &&
         std::all_of(count.begin(), count.end(),
                     [&](int c) { return c == instance.demand(); });
}

double TotalWeight(const BipartiteInstance& instance,
                   const AssignmentSolution& solution) {
  double total = 0.0;
  for (const Edge& e : solution.edges()) total += instance.weight(e.agent, e.item);
  return total;
}

BipartiteInstance SyntheticInstance(int n_left, int n_right, Rng& rng) {
  if (n_left < 1 || n_right < 1) {
    throw ParameterError("synthetic instance needs n_left, n_right >= 1");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(n_left) * n_right);
  for (double& w : weights) w = unit(rng);
  return BipartiteInstance(n_left, n_right, std::move(weights), 1, 1);
}

AssignmentSolution GreedyMatching(const BipartiteInstance& instance) {
  std::vector<Edge> order;
  order.reserve(instance.weights().size());
  for (int a = 0; a < instance.n_left(); ++a) {
    for (int j = 0; j < instance.n_right(); ++j) order.push_back({a, j});
  }
  std::stable_sort(order.begin(), order.end(), [&](const Edge& x, const Edge& y) {
    return instance.weight(x.agent, x.item) > instance.weight(y.agent, y.item);
  });
  PartialMatching matching(instance);
  for (const Edge& e : order) {
    if (matching.Complete()) break;
    if (matching.CanAdd(e.agent, e.item)) matching.Add(e.agent, e.item);
  }
  if (!matching.Complete()) matching.Repair();
  return matching.Build();
}

AssignmentSolution MaxMatching(const BipartiteInstance& instance) {
  const int n_left = instance.n_left();
  const int n_right = instance.n_right();
  if (n_left + n_right > kMaxExactNodes) {
    throw ScaleError("exact matching is limited to " +
                     std::to_string(kMaxExactNodes) + " nodes, got " +
                     std::to_string(n_left + n_right));
  }
  const int source = 0;
  const int sink = n_left + n_right + 1;
  auto agent_node = [](int a) { return 1 + a; };
  auto item_node = [&](int j) { return 1 + n_left + j; };

  MinCostFlow flow(n_left + n_right + 2);
  for (int a = 0; a < n_left; ++a) {
    flow.AddArc(source, agent_node(a), instance.load_cap(), 0.0);
  }
  std::vector<int> pair_arc(static_cast<std::size_t>(n_left) * n_right);
  for (int a = 0; a < n_left; ++a) {
    for (int j = 0; j < n_right; ++j) {
      pair_arc[static_cast<std::size_t>(a) * n_right + j] =
          flow.AddArc(agent_node(a), item_node(j), 1, -instance.weight(a, j));
    }
  }
  for (int j = 0; j < n_right; ++j) {
    flow.AddArc(item_node(j), sink, instance.demand(), 0.0);
  }

  // Shortest distances in the initial (acyclic) network.
  std::vector<double> potential(n_left + n_right + 2, 0.0);
  double to_sink = 0.0;
  for (int j = 0; j < n_right; ++j) {
    double best = 0.0;
    for (int a = 0; a < n_left; ++a) best = std::min(best, -instance.weight(a, j));
    potential[item_node(j)] = best;
    to_sink = std::min(to_sink, best);
  }
  potential[sink] = to_sink;

  const int target = n_right * instance.demand();
  if (flow.Solve(source, sink, target, std::move(potential)) < target) {
    throw InfeasibleError("no feasible B-matching");
  }
  std::vector<Edge> edges;
  edges.reserve(target);
  for (int a = 0; a < n_left; ++a) {
    for (int j = 0; j < n_right; ++j) {
      if (flow.arc(pair_arc[static_cast<std::size_t>(a) * n_right + j])
              .capacity == 0) {
        edges.push_back({a, j});
      }
    }
  }
  return AssignmentSolution(std::move(edges));
}

RoundRobin::RoundRobin(std::shared_ptr<const BipartiteInstance> instance)
    : instance_(std::move(instance)) {
  if (!instance_) throw ParameterError("round robin needs an instance");
  const int n_right = instance_->n_right();
  preferences_.resize(instance_->n_left());
  for (int a = 0; a < instance_->n_left(); ++a) {
    auto& prefs = preferences_[a];
    prefs.resize(n_right);
    std::iota(prefs.begin(), prefs.end(), 0);
    std::stable_sort(prefs.begin(), prefs.end(), [&](int x, int y) {
      return instance_->weight(a, x) > instance_->weight(a, y);
    });
  }
}

AssignmentSolution RoundRobin::Sample(Rng& rng) const {
  const BipartiteInstance& instance = *instance_;
  const int n_left = instance.n_left();
  const int n_right = instance.n_right();
  PartialMatching matching(instance);
  // Items an agent skips stay unavailable to it (full, or already held), so
  // each agent's scan position only moves forward.
  std::vector<int> cursor(n_left, 0);
  std::vector<int> order(n_left);
  while (!matching.Complete()) {
    bool progress = false;
    std::iota(order.begin(), order.end(), 0);
    for (int k = 0; k < n_left && !matching.Complete(); ++k) {
      // Lazy Fisher-Yates: position k is fixed only when it is reached.
      const int pick = std::uniform_int_distribution<int>(k, n_left - 1)(rng);
      std::swap(order[k], order[pick]);
      const int agent = order[k];
      if (!matching.AgentOpen(agent)) continue;
      const auto& prefs = preferences_[agent];
      int& c = cursor[agent];
      while (c < n_right &&
             (!matching.ItemShort(prefs[c]) || matching.Holds(agent, prefs[c]))) {
        ++c;
      }
      if (c == n_right) continue;
      matching.Add(agent, prefs[c]);
      progress = true;
    }
    if (!progress) matching.Repair();
  }
  return matching.Build();
}

AssignmentSolution RoundRobinSample(const BipartiteInstance& instance,
                                    Rng& rng) {
  return RoundRobin(std::make_shared<const BipartiteInstance>(instance))
      .Sample(rng);
}

ValueFunction<AssignmentSolution> UtilitarianValue(
    std::shared_ptr<const BipartiteInstance> instance) {
  return ValueFunction<AssignmentSolution>(
      [inst = std::move(instance)](const AssignmentSolution& s) {
        return TotalWeight(*inst, s);
      });
}

ValueFunction<AssignmentSolution> AgentUtility(
    std::shared_ptr<const BipartiteInstance> instance, int agent) {
  if (agent < 0 || agent >= instance->n_left()) {
    throw ParameterError("agent index out of range");
  }
  return ValueFunction<AssignmentSolution>(
      [inst = std::move(instance), agent](const AssignmentSolution& s) {
        double total = 0.0;
        for (const Edge& e : s.edges()) {
          if (e.agent == agent) total += inst->weight(e.agent, e.item);
        }
        return total;
      });
}

double GeometricMean(std::span<const double> values) {
  if (values.empty()) throw ParameterError("geometric mean of nothing");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw ParameterError("utilities must be non-negative");
    if (v == 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

FwiInstance<AssignmentSolution> MakeAssignmentInstance(
    std::shared_ptr<const BipartiteInstance> instance, MechanismKind mechanism,
    double lambda, double alpha) {
  AssignmentSolution chosen = mechanism == MechanismKind::kMaxMatching
                                  ? MaxMatching(*instance)
                                  : GreedyMatching(*instance);
  auto round_robin = std::make_shared<const RoundRobin>(instance);
  return FwiInstance<AssignmentSolution>(
      UtilitarianValue(instance),
      FairPrior<AssignmentSolution>(
          [round_robin](Rng& rng) { return round_robin->Sample(rng); }),
      WelfareMechanism<AssignmentSolution>::Fixed(std::move(chosen), lambda),
      alpha);
}

}  // namespace fwi::assignment
