// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fwi/assignment.h"
#include "fwi/cli.h"
#include "fwi/experiment.h"
#include "fwi/ingest.h"
#include "fwi/mix.h"
#include "fwi/oracle.h"
#include "fwi/sortition.h"

namespace fwi {
namespace {

const std::string kDataDir = FWI_DATA_DIR;

SolutionId Id(std::uint64_t v) { return SolutionId{v}; }

ExplicitValue Table(std::vector<double> v) {
  return ExplicitValue([v](const SolutionId& id) { return v.at(id.value); });
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Prior with dyadic probabilities: integer units over 2^bits.
Distribution DyadicPrior(std::size_t n, int bits, Rng& rng) {
  const std::uint64_t total = std::uint64_t{1} << bits;
  std::vector<std::uint64_t> cuts = {0, total};
  for (std::size_t i = 1; i < n; ++i) cuts.push_back(rng() % (total + 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Distribution::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t units = cuts[i + 1] - cuts[i];
    if (units > 0) {
      entries.push_back({Id(i), std::ldexp(static_cast<double>(units), -bits)});
    }
  }
  return Distribution::FromEntries(std::move(entries));
}

Outcome Criterion1() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const Distribution prior = DyadicPrior(n, 20, rng);
    // A inside the support or one past it.
    const SolutionId a = Id(rng() % (n + 1));
    for (int k = 1; k <= 9; ++k) {
      const double alpha = k / 10.0;
      const double tv = TvDistance(SimpleMixDistribution(prior, a, alpha), prior);
      const double expected = alpha * (1.0 - prior[a]);
      worst = std::max(worst, std::abs(tv - expected));
      if (tv > alpha + 1e-12) return {false, "tv above alpha"};
    }
  }
  return {worst <= 1e-12, "max |tv - alpha(1-p_A)| = " + Fmt(worst)};
}

double EmpiricalTv(const std::map<SolutionId, double>& counts, double n,
                   const Distribution& prior) {
  std::set<SolutionId> ids;
  for (const auto& [id, c] : counts) ids.insert(id);
  for (const auto& e : prior) ids.insert(e.id);
  double tv = 0.0;
  for (SolutionId id : ids) {
    const auto it = counts.find(id);
    const double p = it == counts.end() ? 0.0 : it->second / n;
    tv += std::abs(p - prior[id]);
  }
  return tv / 2;
}

Outcome Criterion2() {
  Rng make(202);
  std::string detail;
  bool pass = true;
  for (double alpha : {0.25, 0.5}) {
    // All ten solutions in the prior support.
    std::vector<Distribution::Entry> w;
    std::vector<double> values;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      w.push_back({Id(i), 0.1 + unit(make)});
      values.push_back(unit(make));
    }
    const Distribution prior = Distribution::FromWeights(w);
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();
    const ExplicitInstance instance(
        Table(values), FairPrior<SolutionId>::FromDistribution(prior),
        WelfareMechanism<SolutionId>::Fixed(Id(best), 1.0), alpha);
    const EpsilonMixOptions options{0.1, std::nullopt};
    const int n = 1000000;
    std::map<SolutionId, double> counts;
    Rng rng(SplitSeed(202, alpha));
    for (int i = 0; i < n; ++i) counts[EpsilonMix(instance, options, rng)] += 1;
    const double tv = EmpiricalTv(counts, n, prior);
    const double limit = alpha + 3 * std::sqrt(10.0 / n);
    pass = pass && tv <= limit;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "alpha=%.2f tv=%.5f limit=%.5f; ", alpha, tv,
                  limit);
    detail += buf;
  }
  return {pass, detail};
}

Outcome Criterion3() {
  Rng make(303);
  const double alphas[] = {0.25, 0.5, 0.75};
  double worst_margin = INFINITY;
  bool pass = true;
  for (int inst = 0; inst < 20; ++inst) {
    const double alpha = alphas[make() % 3];
    const OracleProblem problem = MakeRandomProblem(2 + make() % 9, alpha, 1.0, make);
    const auto& prior = *problem.instance.prior().explicit_law();
    const auto& value = problem.instance.value();
    const double v_opt = VPOpt(BuildPOpt(prior, value, alpha, problem.space), value);
    for (double eps : {0.1, 0.05}) {
      const int n = 100000;
      Rng rng(SplitSeed(SplitSeed(303, std::uint64_t(inst)), eps));
      double sum = 0.0;
      double sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = value(EpsilonMix(problem.instance, {eps, std::nullopt}, rng));
        sum += v;
        sq += v * v;
      }
      const double mean = sum / n;
      const double se = std::sqrt(std::max(0.0, sq / n - mean * mean) / (n - 1));
      const double margin = mean - ((1 - eps) * v_opt - 3 * se);
      worst_margin = std::min(worst_margin, margin);
      pass = pass && margin >= 0.0;
    }
  }
  return {pass, "min(mean - bound + 3se) = " + Fmt(worst_margin)};
}

Outcome Criterion4() {
  Rng rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = INFINITY;
  for (int trial = 0; trial < 500; ++trial) {
    const double alpha = unit(rng);
    const double lambda = 0.05 + 0.95 * unit(rng);
    const OracleProblem p = MakeRandomProblem(1 + rng() % 15, alpha, lambda, rng);
    const auto& prior = *p.instance.prior().explicit_law();
    const auto& value = p.instance.value();
    const SolutionId a = p.instance.mechanism().Run(rng);
    const double v_s = ExpectedValue(SimpleMixDistribution(prior, a, alpha), value);
    const double v_opt = VPOpt(BuildPOpt(prior, value, alpha, p.space), value);
    const double bound = SimpleMixLowerBound(lambda, alpha) * v_opt;
    worst = std::min(worst, v_s - bound);
  }
  // Only float rounding separates equality cases.
  return {worst >= -1e-12, "min(V(p^s) - bound) = " + Fmt(worst)};
}

Outcome Criterion5() {
  double worst = 0.0;
  auto ratio = [](const OracleProblem& p) {
    const auto& prior = *p.instance.prior().explicit_law();
    const auto& value = p.instance.value();
    const double alpha = p.instance.alpha();
    Rng rng(0);
    const SolutionId a = p.instance.mechanism().Run(rng);
    return ExpectedValue(SimpleMixDistribution(prior, a, alpha), value) /
           VPOpt(BuildPOpt(prior, value, alpha, p.space), value);
  };
  for (double lambda : {0.3, 0.6}) {
    for (double alpha : {0.1, 1.0 - lambda}) {
      worst = std::max(worst,
                       std::abs(ratio(MakeZeroPriorProblem(alpha, lambda)) - lambda));
    }
  }
  for (double alpha : {0.25, 0.5, 0.75}) {
    const double expected = alpha + (1 - alpha) * (1 - alpha);
    worst = std::max(worst,
                     std::abs(ratio(MakeTwoSolutionProblem(alpha)) - expected));
  }
  return {worst <= 1e-12, "max ratio error = " + Fmt(worst)};
}

Outcome Criterion6() {
  Rng rng(606);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_left = 2 + rng() % 4;
    const int n_right = 1 + rng() % 4;
    std::vector<double> w(n_left * n_right);
    for (double& x : w) x = unit(rng);
    const int demand = 1 + rng() % std::min(2, n_left);
    const int cap = (n_right * demand + n_left - 1) / n_left + rng() % 2;
    auto inst = std::make_shared<const assignment::BipartiteInstance>(
        n_left, n_right, w, demand, cap);
    // Empirical round-robin law over a few draws is the explicit prior.
    std::map<assignment::AssignmentSolution, std::uint64_t> ids;
    std::vector<assignment::AssignmentSolution> solutions;
    auto id_of = [&](const assignment::AssignmentSolution& s) {
      auto [it, fresh] = ids.emplace(s, solutions.size());
      if (fresh) solutions.push_back(s);
      return Id(it->second);
    };
    std::vector<Distribution::Entry> draws;
    for (int i = 0; i < 20; ++i) {
      draws.push_back({id_of(assignment::RoundRobinSample(*inst, rng)), 1.0});
    }
    const SolutionId a = id_of(assignment::MaxMatching(*inst));
    const Distribution prior = Distribution::FromWeights(draws);
    std::vector<ExplicitValue> utilities;
    for (int agent = 0; agent < n_left; ++agent) {
      const auto u = assignment::AgentUtility(inst, agent);
      utilities.push_back(ExplicitValue(
          [u, solutions](const SolutionId& id) { return u(solutions[id.value]); }));
    }
    const double alpha = unit(rng);
    if (!CheckIndividualFairness(prior, a, alpha,
                                 std::span<const ExplicitValue>(utilities))) {
      return {false, "trial " + std::to_string(trial)};
    }
    // Independent recomputation of the per-solution inequality.
    const Distribution s = SimpleMixDistribution(prior, a, alpha);
    for (const auto& e : prior) {
      const double floor = (1 - alpha) * e.probability;
      if (s[e.id] < floor - 1e-15) return {false, "p^s below floor"};
      if (e.id != a && std::abs(s[e.id] - floor) > 1e-15) {
        return {false, "p^s off A differs from (1-alpha) p^f"};
      }
    }
    for (int agent = 0; agent < n_left; ++agent) {
      if (ExpectedValue(s, utilities[agent]) <
          (1 - alpha) * ExpectedValue(prior, utilities[agent]) - 1e-12) {
        return {false, "agent utility below floor"};
      }
    }
  }
  return {true, "200 instances"};
}

Outcome Criterion7() {
  const bool exact =
      SampleSize(0.0, 0.1) == 2397 && SampleSize(0.0, 0.05) == 11805;
  const long long big = static_cast<long long>(SampleSize(0.0, 0.01));
  const bool near = std::llabs(big - 423865) <= 1;
  return {exact && near, "s(0,0.01) = " + std::to_string(big) + " (table 423865)"};
}

// Best value of moving exactly m grid units of mass onto (plus) or off
// (minus, capped by the prior units) the solutions, by exhaustive
// enumeration of all compositions.
void Compositions(const std::vector<int>& cap, const std::vector<double>& v,
                  std::size_t i, int left, double acc, bool maximize,
                  double& best) {
  if (i + 1 == v.size()) {
    if (left > cap[i]) return;
    const double total = acc + left * v[i];
    best = maximize ? std::max(best, total) : std::min(best, total);
    return;
  }
  for (int take = 0; take <= std::min(left, cap[i]); ++take) {
    Compositions(cap, v, i + 1, left - take, acc + take * v[i], maximize, best);
  }
}

Outcome Criterion8() {
  // Priors on the 0.02 grid. Any grid q with TV(q, prior) <= alpha splits into
  // a disjoint gain vector and loss vector of equal mass m <= alpha, and every
  // such pair gives a feasible grid q, so the grid optimum is the best pair.
  Rng rng(808);
  constexpr int kUnits = 50;
  double worst = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    std::vector<int> units(n, 0);
    for (int u = 0; u < kUnits; ++u) ++units[rng() % n];
    std::vector<double> values(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& x : values) x = unit(rng);
    std::vector<Distribution::Entry> entries;
    double v_prior = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (units[i] > 0) entries.push_back({Id(i), units[i] / double(kUnits)});
      v_prior += units[i] / double(kUnits) * values[i];
    }
    const Distribution prior = Distribution::FromEntries(entries);
    const int alpha_units = 1 + rng() % 20;
    const double alpha = alpha_units / double(kUnits);
    std::vector<SolutionId> space;
    for (std::size_t i = 0; i < n; ++i) space.push_back(Id(i));
    const double v_opt =
        VPOpt(BuildPOpt(prior, Table(values), alpha, space), Table(values));
    const double max_v = *std::max_element(values.begin(), values.end());

    const std::vector<int> no_cap(n, kUnits);
    double grid_best = v_prior;
    for (int m = 1; m <= alpha_units; ++m) {
      double gain = -INFINITY;
      double loss = INFINITY;
      Compositions(no_cap, values, 0, m, 0.0, true, gain);
      Compositions(units, values, 0, m, 0.0, false, loss);
      if (loss == INFINITY) continue;
      grid_best = std::max(grid_best, v_prior + (gain - loss) / kUnits);
    }
    worst = std::max(worst, grid_best - (v_opt + 0.02 * max_v));
  }
  return {worst <= 0.0, "max(grid - v_p_opt - slack) = " + Fmt(worst)};
}

// Exhaustive b-matching: each item picks `demand` distinct agents.
double BruteForceMatching(const assignment::BipartiteInstance& inst) {
  const int nl = inst.n_left();
  const int nr = inst.n_right();
  std::vector<int> load(nl, 0);
  double best = -INFINITY;
  std::function<void(int, int, int, double)> rec = [&](int item, int from,
                                                       int still, double acc) {
    if (item == nr) {
      best = std::max(best, acc);
      return;
    }
    if (still == 0) {
      rec(item + 1, 0, inst.demand(), acc);
      return;
    }
    for (int a = from; a < nl; ++a) {
      if (load[a] == inst.load_cap()) continue;
      ++load[a];
      rec(item, a + 1, still - 1, acc + inst.weight(a, item));
      --load[a];
    }
  };
  rec(0, 0, inst.demand(), 0.0);
  return best;
}

Outcome Criterion9() {
  Rng rng(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const int nl = 1 + rng() % 5;
    const int nr = 1 + rng() % 6;
    const int demand = 1 + rng() % std::min(nl, 2);
    const int cap = 1 + rng() % 3;
    if (nl * cap < nr * demand) continue;
    std::vector<double> w(nl * nr);
    for (double& x : w) x = rng() % 4 == 0 ? 0.0 : unit(rng);
    const assignment::BipartiteInstance inst(nl, nr, w, demand, cap);
    const double brute = BruteForceMatching(inst);
    const auto best = assignment::MaxMatching(inst);
    const auto greedy = assignment::GreedyMatching(inst);
    if (!assignment::IsFeasible(inst, best) || !assignment::IsFeasible(inst, greedy)) {
      return {false, "infeasible output"};
    }
    const double v_max = assignment::TotalWeight(inst, best);
    if (std::abs(v_max - brute) > 1e-9) {
      return {false, "max " + std::to_string(v_max) + " vs brute " +
                         std::to_string(brute)};
    }
    if (assignment::TotalWeight(inst, greedy) > v_max + 1e-9) {
      return {false, "greedy above max"};
    }
    ++checked;
  }
  return {true, "200 instances"};
}

Outcome Criterion10() {
  experiment::ExperimentConfig simple;
  simple.seed = 10;
  experiment::ApplyDefaultCounts(simple);
  experiment::ExperimentConfig eps = simple;
  eps.algorithm = Algorithm::kEpsilonMix;
  eps.epsilon = 0.1;
  eps.n_rounds.reset();
  eps.n_batches.reset();
  experiment::ApplyDefaultCounts(eps);
  if (*simple.n_rounds != 100 || *simple.n_batches != 10 || *eps.n_rounds != 50 ||
      *eps.n_batches != 5 || experiment::EffectiveSampleCount(eps, 0.5) != 4794) {
    return {false, "unexpected default counts"};
  }
  const auto rs = experiment::RunSweep(simple);
  const auto re = experiment::RunSweep(eps);
  for (const auto* r : {&rs, &re}) {
    const std::string csv = experiment::FormatCsv(*r);
    if (csv.rfind("alpha,means,variance\n", 0) != 0 ||
        experiment::ParseCsv(csv).rows.size() != 19) {
      return {false, "malformed csv"};
    }
  }
  double worst = INFINITY;
  for (std::size_t i = 0; i < 19; ++i) {
    const auto& s = rs.rows[i];
    const auto& e = re.rows[i];
    const double pooled =
        std::sqrt(e.std_dev * e.std_dev / 5 + s.std_dev * s.std_dev / 10);
    worst = std::min(worst, (e.mean - s.mean) / pooled);
  }
  return {worst >= -3.0,
          "min (eps - simple) / pooled se = " + Fmt(worst)};
}

Outcome Criterion11() {
  using namespace sortition;
  auto points = std::make_shared<const PointSet>(ingest::ParseDemographics(
      kDataDir + "/adult_sample.csv", ingest::FeatureConfig::Adult()));
  const int n = static_cast<int>(points->size());
  Rng rng(1111);
  if (PanelCost(KMeansPPSelect(*points, n, rng), *points) != 0.0) {
    return {false, "cost at k = N_P is not 0"};
  }

  // Neighbour constraint against a brute-force neighbour oracle.
  for (int k : {4, 10, 25}) {
    const Panel initial = KMeansPPSelect(*points, k, rng);
    const int q = DefaultReplaceCount(k);
    const RandomReplace rr(points, initial, q);
    std::vector<std::set<int>> allowed;
    for (int c : initial.members()) {
      std::vector<std::pair<double, int>> by_distance;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        double d = 0.0;
        for (std::size_t t = 0; t < points->dim(); ++t) {
          const double diff = points->Row(c)[t] - points->Row(j)[t];
          d += diff * diff;
        }
        by_distance.push_back({d, j});
      }
      std::sort(by_distance.begin(), by_distance.end());
      std::set<int> ok = {c};
      for (int i = 0; i < q; ++i) ok.insert(by_distance[i].second);
      allowed.push_back(ok);
    }
    for (int draw = 0; draw < 2000; ++draw) {
      const Panel out = rr.Sample(rng);
      if (out.size() != initial.size()) return {false, "panel size changed"};
      // Every output member must sit in a distinct slot it is allowed in.
      std::vector<int> owner(initial.size(), -1);
      std::function<bool(std::size_t, std::vector<bool>&)> augment =
          [&](std::size_t m, std::vector<bool>& seen) {
            for (std::size_t slot = 0; slot < initial.size(); ++slot) {
              if (seen[slot] || !allowed[slot].count(out.members()[m])) continue;
              seen[slot] = true;
              if (owner[slot] < 0 || augment(owner[slot], seen)) {
                owner[slot] = static_cast<int>(m);
                return true;
              }
            }
            return false;
          };
      for (std::size_t m = 0; m < out.size(); ++m) {
        std::vector<bool> seen(initial.size(), false);
        if (!augment(m, seen)) return {false, "neighbour constraint violated"};
      }
    }
  }

  // Mean k-means++ cost over 100 seeds, k = 1..20.
  constexpr int kSeeds = 100;
  std::vector<double> mean(21);
  std::vector<double> var(21);
  for (int k = 1; k <= 20; ++k) {
    double sum = 0.0;
    double sq = 0.0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      Rng r(SplitSeed(SplitSeed(1111, std::uint64_t(k)), std::uint64_t(seed)));
      const double c = PanelCost(KMeansPPSelect(*points, k, r), *points);
      sum += c;
      sq += c * c;
    }
    mean[k] = sum / kSeeds;
    var[k] = std::max(0.0, (sq - kSeeds * mean[k] * mean[k]) / (kSeeds - 1));
  }
  double worst = -INFINITY;
  for (int k = 1; k < 20; ++k) {
    const double se = std::sqrt((var[k] + var[k + 1]) / kSeeds);
    worst = std::max(worst, (mean[k + 1] - mean[k]) - 3 * se);
  }
  const bool trend = mean[20] < mean[1];
  return {worst <= 0.0 && trend,
          "max(mean[k+1] - mean[k] - 3se) = " + Fmt(worst)};
}

Outcome Criterion12() {
  const auto dir = std::filesystem::temp_directory_path() / "fwi_acceptance";
  std::filesystem::create_directories(dir);
  auto file = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> runs = {
      {"sweep", "--rounds", "5", "--batches", "2", "--seed", "12"},
      {"sweep", "--algorithm", "epsilon_mix", "--epsilon", "0.1", "--rounds",
       "3", "--batches", "2", "--seed", "12", "--alpha-grid", "0.1,0.5,0.9"},
      {"sweep", "--scenario", "bids", "--input", kDataDir + "/bids_small.csv",
       "--rounds", "5", "--batches", "2", "--seed", "12"},
      {"sweep", "--scenario", "sortition", "--input",
       kDataDir + "/adult_sample.csv", "--panel-size", "10", "--rounds", "3",
       "--batches", "2", "--seed", "12", "--alpha-grid", "0.2,0.8"},
      {"oracle-check", "--preset", "random", "--runs", "20000", "--seed", "12"},
      {"oracle-check", "--algorithm", "epsilon_mix", "--epsilon", "0.1",
       "--runs", "5000", "--seed", "12"},
      {"ingest-check", "--input", kDataDir + "/bids_small.csv"},
      {"ingest-check", "--scenario", "sortition", "--input",
       kDataDir + "/adult_sample.csv"},
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto args = runs[i];
      const std::string path =
          file("run" + std::to_string(i) + "_" + std::to_string(rep));
      args.push_back("--output");
      args.push_back(path);
      std::ostringstream out;
      std::ostringstream err;
      const int code = cli::Run(args, out, err);
      if (code != cli::kExitOk) {
        return {false, args[0] + " exited " + std::to_string(code) + ": " + err.str()};
      }
      outputs[rep] = ingest::ReadFile(path);
      // Stdout names the output path, which differs between reps.
    }
    if (outputs[0] != outputs[1] || outputs[0].empty()) {
      return {false, "outputs differ for run " + std::to_string(i)};
    }
  }
  // Stdout of a verb without --output.
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream err;
  cli::Run({"oracle-check", "--preset", "tight", "--seed", "5"}, a, err);
  cli::Run({"oracle-check", "--preset", "tight", "--seed", "5"}, b, err);
  std::filesystem::remove_all(dir);
  if (a.str() != b.str()) return {false, "stdout differs"};
  return {true, std::to_string(runs.size() + 1) + " invocations"};
}

struct Criterion {
  int number;
  double limit_seconds;  // 0: no stated limit
  Outcome (*run)();
};

}  // namespace
}  // namespace fwi

int main() {
  using fwi::Criterion;
  const Criterion criteria[] = {
      {1, 5, fwi::Criterion1},    {2, 120, fwi::Criterion2},
      {3, 300, fwi::Criterion3},  {4, 10, fwi::Criterion4},
      {5, 0, fwi::Criterion5},    {6, 0, fwi::Criterion6},
      {7, 0, fwi::Criterion7},    {8, 60, fwi::Criterion8},
      {9, 0, fwi::Criterion9},    {10, 600, fwi::Criterion10},
      {11, 0, fwi::Criterion11},  {12, 0, fwi::Criterion12},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    fwi::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += " (over time limit)";
    }
    std::printf("AC%-2d %s  %.2fs  %s\n", c.number, outcome.pass ? "PASS" : "FAIL",
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
    failed += !outcome.pass;
  }
  return failed == 0 ? 0 : 1;
}
