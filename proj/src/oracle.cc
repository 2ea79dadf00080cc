#include "fwi/oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <map>
#include <string>
#include <unordered_map>

#include "fwi/parallel.h"

namespace fwi {
namespace {

constexpr std::size_t kRunsPerChunk = 1 << 14;

void CheckExplicit(const ExplicitInstance& instance) {
  const auto& law = instance.prior().explicit_law();
  if (!law) {
    throw ParameterError("oracle routines need a prior with an explicit law");
  }
  if (law->support_size() > kOracleMaxSolutions) {
    throw ScaleError("prior support exceeds the oracle cap of " +
                     std::to_string(kOracleMaxSolutions));
  }
}

std::unordered_map<SolutionId, std::size_t> RunChunk(
    Algorithm algorithm, const ExplicitInstance& instance,
    const std::optional<EpsilonMixOptions>& options, std::size_t n,
    std::uint64_t seed) {
  Rng rng(seed);
  std::unordered_map<SolutionId, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) {
    const SolutionId out = algorithm == Algorithm::kSimpleMix
                               ? SimpleMix(instance, rng)
                               : EpsilonMix(instance, *options, rng);
    ++counts[out];
  }
  return counts;
}

std::string FormatNumber(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  return algorithm == Algorithm::kSimpleMix ? "simple_mix" : "epsilon_mix";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "simple_mix") return Algorithm::kSimpleMix;
  if (name == "epsilon_mix") return Algorithm::kEpsilonMix;
  throw ParameterError("unknown algorithm '" + std::string(name) +
                       "' (expected simple_mix or epsilon_mix)");
}

OptDecomposition BuildPOpt(const Distribution& prior, const ExplicitValue& value,
                           double alpha, std::span<const SolutionId> space) {
  CheckAlpha(alpha);
  if (prior.support_size() == 0) throw ParameterError("prior is empty");
  if (space.size() > kOracleMaxSolutions) {
    throw ScaleError("solution space exceeds the oracle cap of " +
                     std::to_string(kOracleMaxSolutions));
  }

  struct Ranked {
    SolutionId id;
    double value;
    double probability;
  };
  std::vector<Ranked> support;
  support.reserve(prior.support_size());
  for (const auto& e : prior) support.push_back({e.id, value(e.id), e.probability});

  SolutionId opt = support.front().id;
  double opt_value = support.front().value;
  auto consider = [&](SolutionId id, double v) {
    if (v > opt_value || (v == opt_value && id < opt)) {
      opt = id;
      opt_value = v;
    }
  };
  for (const auto& r : support) consider(r.id, r.value);
  for (SolutionId id : space) consider(id, value(id));

  std::sort(support.begin(), support.end(),
            [](const Ranked& a, const Ranked& b) {
              if (a.value != b.value) return a.value < b.value;
              return a.id < b.id;
            });

  OptDecomposition d{alpha, opt, Distribution::PointMass(opt), std::nullopt,
                     std::nullopt, {}};
  std::vector<Distribution::Entry> removed;
  double to_remove = alpha;
  for (const auto& r : support) {
    const double take = std::min(r.probability, std::max(to_remove, 0.0));
    to_remove -= take;
    if (take > 0.0) removed.push_back({r.id, take});
    const double left = r.probability - take;
    if (left > 0.0) d.residual.push_back({r.id, left});
  }
  std::sort(d.residual.begin(), d.residual.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::vector<Distribution::Entry> opt_entries = d.residual;
  auto it = std::find_if(opt_entries.begin(), opt_entries.end(),
                         [&](const auto& e) { return e.id == opt; });
  if (it != opt_entries.end()) {
    it->probability += alpha;
  } else {
    opt_entries.push_back({opt, alpha});
  }
  d.p_opt = Distribution::FromEntries(std::move(opt_entries));

  if (alpha < 1.0) {
    std::vector<Distribution::Entry> top = d.residual;
    for (auto& e : top) e.probability /= (1.0 - alpha);
    d.p_alpha = Distribution::FromEntries(std::move(top));
  }
  if (alpha > 0.0) {
    for (auto& e : removed) e.probability /= alpha;
    d.p_alpha_tilde = Distribution::FromEntries(std::move(removed));
  }
  return d;
}

double VPOpt(const OptDecomposition& decomposition, const ExplicitValue& value) {
  const double alpha = decomposition.alpha;
  double total = alpha * value(decomposition.opt_solution);
  if (decomposition.p_alpha) {
    total += (1.0 - alpha) * ExpectedValue(*decomposition.p_alpha, value);
  }
  return total;
}

double SimpleMixLowerBound(double lambda, double alpha) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ParameterError("lambda must lie in (0, 1]");
  }
  CheckAlpha(alpha);
  return std::min(lambda, alpha * lambda + (1.0 - alpha) * (1.0 - alpha));
}

Distribution EstimateOutputLaw(Algorithm algorithm,
                               const ExplicitInstance& instance,
                               const std::optional<EpsilonMixOptions>& options,
                               std::size_t n_runs, Rng& rng) {
  if (n_runs == 0) throw ParameterError("n_runs must be positive");
  if (algorithm == Algorithm::kEpsilonMix) {
    if (!options) throw ParameterError("epsilon_mix needs an epsilon");
    ValidateEpsilonMixOptions(*options);
  }
  CheckExplicit(instance);

  const std::uint64_t master = rng();
  const std::size_t n_chunks = (n_runs + kRunsPerChunk - 1) / kRunsPerChunk;
  std::vector<std::unordered_map<SolutionId, std::size_t>> partial(n_chunks);
  ParallelFor(n_chunks, [&](std::size_t c) {
    const std::size_t begin = c * kRunsPerChunk;
    const std::size_t n = std::min(kRunsPerChunk, n_runs - begin);
    partial[c] = RunChunk(algorithm, instance, options, n, SplitSeed(master, c));
  });

  std::map<SolutionId, std::size_t> counts;
  for (const auto& chunk : partial) {
    for (const auto& [id, n] : chunk) counts[id] += n;
  }
  std::vector<Distribution::Entry> weights;
  weights.reserve(counts.size());
  for (const auto& [id, n] : counts) {
    weights.push_back({id, static_cast<double>(n)});
  }
  return Distribution::FromWeights(std::move(weights));
}

GuaranteeReport CheckGuarantees(Algorithm algorithm, const OracleProblem& problem,
                                const std::optional<EpsilonMixOptions>& options,
                                std::size_t n_runs, Rng& rng) {
  const ExplicitInstance& instance = problem.instance;
  CheckExplicit(instance);
  if (problem.space.size() > kOracleMaxSolutions) {
    throw ScaleError("solution space exceeds the oracle cap");
  }
  const Distribution& prior = *instance.prior().explicit_law();
  const ExplicitValue& value = instance.value();

  GuaranteeReport report;
  report.algorithm = algorithm;
  report.alpha = instance.alpha();
  report.lambda = instance.mechanism().lambda();
  report.v_p_opt =
      VPOpt(BuildPOpt(prior, value, instance.alpha(), problem.space), value);
  if (algorithm == Algorithm::kEpsilonMix) {
    if (!options) throw ParameterError("epsilon_mix needs an epsilon");
    report.epsilon = options->epsilon;
    report.bound = report.lambda * (1.0 - options->epsilon);
  } else {
    report.bound = SimpleMixLowerBound(report.lambda, report.alpha);
  }

  const double k = static_cast<double>(
      std::max(problem.space.size(), prior.support_size()));
  auto evaluate = [&](std::size_t runs) {
    const Distribution law =
        EstimateOutputLaw(algorithm, instance, options, runs, rng);
    report.n_runs = runs;
    report.tv_emp = TvDistance(law, prior);
    report.tv_slack = 3.0 * std::sqrt(k / static_cast<double>(runs));
    double mean = 0.0;
    double second = 0.0;
    for (const auto& e : law) {
      const double v = value(e.id);
      mean += e.probability * v;
      second += e.probability * v * v;
    }
    report.welfare_emp = mean;
    report.welfare_se = std::sqrt(std::max(0.0, second - mean * mean) /
                                  static_cast<double>(runs));
    report.fairness_ok = report.tv_emp <= report.alpha + report.tv_slack;
    report.welfare_ok = report.welfare_emp >=
                        report.bound * report.v_p_opt -
                            3.0 * report.welfare_se - 1e-12;
  };

  evaluate(n_runs);
  if (!report.fairness_ok || !report.welfare_ok) {
    evaluate(4 * n_runs);
    report.reran = true;
  }
  return report;
}

std::string FormatReport(const GuaranteeReport& report) {
  std::string out;
  auto line = [&](std::string_view key, double v) {
    out += key;
    out += '=';
    out += FormatNumber(v);
    out += '\n';
  };
  line("epsilon_mix", report.algorithm == Algorithm::kEpsilonMix ? 1 : 0);
  line("alpha", report.alpha);
  line("lambda", report.lambda);
  line("epsilon", report.epsilon);
  line("n_runs", static_cast<double>(report.n_runs));
  line("tv_emp", report.tv_emp);
  line("tv_slack", report.tv_slack);
  line("welfare_emp", report.welfare_emp);
  line("welfare_se", report.welfare_se);
  line("v_p_opt", report.v_p_opt);
  line("welfare_ratio", report.welfare_ratio());
  line("bound", report.bound);
  line("fairness_ok", report.fairness_ok ? 1 : 0);
  line("welfare_ok", report.welfare_ok ? 1 : 0);
  line("reran", report.reran ? 1 : 0);
  return out;
}

bool CheckIndividualFairness(
    const Distribution& prior, SolutionId a, double alpha,
    std::optional<std::span<const ExplicitValue>> utilities) {
  CheckAlpha(alpha);
  const Distribution mixed = SimpleMixDistribution(prior, a, alpha);
  for (const auto& e : prior) {
    const double floor = (1.0 - alpha) * e.probability;
    const double p = mixed[e.id];
    if (e.id == a ? p < floor : p != floor) return false;
  }
  if (utilities) {
    for (const ExplicitValue& u : *utilities) {
      const double after = ExpectedValue(mixed, u);
      const double before = (1.0 - alpha) * ExpectedValue(prior, u);
      if (after < before - 1e-12 * std::max(1.0, std::abs(before))) {
        return false;
      }
    }
  }
  return true;
}

namespace {

std::vector<SolutionId> Ids(std::size_t n) {
  std::vector<SolutionId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = SolutionId{i};
  return ids;
}

ExplicitValue TableValue(std::vector<double> values) {
  return ExplicitValue([v = std::move(values)](const SolutionId& id) {
    return id.value < v.size() ? v[id.value] : 0.0;
  });
}

}  // namespace

OracleProblem MakeTwoSolutionProblem(double alpha) {
  CheckAlpha(alpha);
  std::vector<Distribution::Entry> prior;
  if (alpha < 1.0) prior.push_back({SolutionId{0}, 1.0 - alpha});
  if (alpha > 0.0) prior.push_back({SolutionId{1}, alpha});
  return {ExplicitInstance(
              TableValue({1.0, 0.0}),
              FairPrior<SolutionId>::FromDistribution(
                  Distribution::FromEntries(std::move(prior))),
              WelfareMechanism<SolutionId>::Fixed(SolutionId{0}, 1.0), alpha),
          Ids(2)};
}

OracleProblem MakeZeroPriorProblem(double alpha, double lambda) {
  CheckAlpha(alpha);
  // S0, S1: prior support; S2: Opt; S3: the mechanism's output when lambda < 1.
  const bool exact = lambda == 1.0;
  return {ExplicitInstance(
              TableValue({0.0, 0.0, 1.0, lambda}),
              FairPrior<SolutionId>::FromDistribution(Distribution::FromEntries(
                  {{SolutionId{0}, 0.5}, {SolutionId{1}, 0.5}})),
              WelfareMechanism<SolutionId>::Fixed(
                  SolutionId{exact ? 2u : 3u}, lambda),
              alpha),
          Ids(exact ? 3 : 4)};
}

OracleProblem MakeRandomProblem(std::size_t n_solutions, double alpha,
                                double lambda, Rng& rng) {
  if (n_solutions == 0 || n_solutions > kOracleMaxSolutions) {
    throw ParameterError("random problem size out of range");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(n_solutions);
  for (double& v : values) v = unit(rng);

  std::vector<Distribution::Entry> weights;
  for (std::size_t i = 0; i < n_solutions; ++i) {
    if (std::bernoulli_distribution(0.7)(rng)) {
      weights.push_back({SolutionId{i}, unit(rng) + 1e-3});
    }
  }
  if (weights.empty()) {
    const auto pick =
        std::uniform_int_distribution<std::size_t>(0, n_solutions - 1)(rng);
    weights.push_back({SolutionId{pick}, 1.0});
  }

  const double best = *std::max_element(values.begin(), values.end());
  std::size_t chosen = 0;
  double chosen_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_solutions; ++i) {
    if (values[i] >= lambda * best && values[i] < chosen_value) {
      chosen = i;
      chosen_value = values[i];
    }
  }
  return {ExplicitInstance(
              TableValue(std::move(values)),
              FairPrior<SolutionId>::FromDistribution(
                  Distribution::FromWeights(std::move(weights))),
              WelfareMechanism<SolutionId>::Fixed(SolutionId{chosen}, lambda),
              alpha),
          Ids(n_solutions)};
}

}  // namespace fwi
