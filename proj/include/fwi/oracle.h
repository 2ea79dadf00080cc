#ifndef FWI_ORACLE_H_
#define FWI_ORACLE_H_

// Exact constructions and guarantee checks for instances whose prior is
// explicit and whose solution space is small enough to enumerate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fwi/core.h"
#include "fwi/mix.h"

namespace fwi {

// Explicit solution spaces larger than this are refused.
inline constexpr std::size_t kOracleMaxSolutions = 100'000;

enum class Algorithm { kSimpleMix, kEpsilonMix };

std::string_view AlgorithmName(Algorithm algorithm);
// Accepts "simple_mix" / "epsilon_mix".
Algorithm ParseAlgorithm(std::string_view name);

// The optimal alpha-fair distribution and the pieces of the prior it is built
// from. With r the prior after removing alpha mass from its lowest-valued
// solutions:
//   p_opt = r + alpha * 1{Opt},  p_alpha = r / (1 - alpha),
//   p_alpha_tilde = (prior - r) / alpha,
// so prior = (1 - alpha) p_alpha + alpha p_alpha_tilde.
struct OptDecomposition {
  double alpha = 0.0;
  SolutionId opt_solution;
  Distribution p_opt;
  std::optional<Distribution> p_alpha;        // absent when alpha == 1
  std::optional<Distribution> p_alpha_tilde;  // absent when alpha == 0
  std::vector<Distribution::Entry> residual;  // r; sums to 1 - alpha
};

// Removal walks the prior's support by (value ascending, id ascending). Opt is
// the argmax of V over `space` together with supp(prior), lowest id on ties;
// pass the full solution space whenever Opt may lie outside the support.
OptDecomposition BuildPOpt(const Distribution& prior, const ExplicitValue& value,
                           double alpha, std::span<const SolutionId> space = {});

// alpha V(Opt) + (1 - alpha) V(p_alpha).
double VPOpt(const OptDecomposition& decomposition, const ExplicitValue& value);

// min(lambda, alpha lambda + (1 - alpha)^2).
double SimpleMixLowerBound(double lambda, double alpha);

// Empirical law of n_runs independent invocations. Runs are cut into fixed
// chunks, each with its own substream split from one draw of `rng`, so the
// result does not depend on the number of worker threads. `options` is
// required for kEpsilonMix. The prior must be explicit.
Distribution EstimateOutputLaw(Algorithm algorithm,
                               const ExplicitInstance& instance,
                               const std::optional<EpsilonMixOptions>& options,
                               std::size_t n_runs, Rng& rng);

// An explicit instance plus its enumerated solution space.
struct OracleProblem {
  ExplicitInstance instance;
  std::vector<SolutionId> space;
};

struct GuaranteeReport {
  Algorithm algorithm = Algorithm::kSimpleMix;
  double alpha = 0.0;
  double lambda = 1.0;
  double epsilon = 0.0;  // 0 for Simple-Mix
  std::size_t n_runs = 0;
  double tv_emp = 0.0;
  double tv_slack = 0.0;
  double welfare_emp = 0.0;
  double welfare_se = 0.0;
  double v_p_opt = 0.0;
  double bound = 0.0;  // guaranteed welfare factor
  bool fairness_ok = false;
  bool welfare_ok = false;
  bool reran = false;

  double welfare_ratio() const {
    return v_p_opt > 0.0 ? welfare_emp / v_p_opt : 0.0;
  }
};

// Monte Carlo check of alpha-fairness (TV <= alpha + 3 sqrt(|S| / n)) and of
// the welfare guarantee (mean >= bound * V(p^Opt) - 3 standard errors), with
// bound = lambda (1 - eps) for Epsilon-Mix and SimpleMixLowerBound otherwise.
// A failing check is re-run once with 4x the runs before it is reported.
GuaranteeReport CheckGuarantees(Algorithm algorithm, const OracleProblem& problem,
                                const std::optional<EpsilonMixOptions>& options,
                                std::size_t n_runs, Rng& rng);

// Flat "key=value" lines, one per field, numbers only.
std::string FormatReport(const GuaranteeReport& report);

// p^s_i >= (1 - alpha) p^f_i for every i (equality off `a`), and, when given,
// u(p^s) >= (1 - alpha) u(p^f) for every agent utility u.
bool CheckIndividualFairness(
    const Distribution& prior, SolutionId a, double alpha,
    std::optional<std::span<const ExplicitValue>> utilities = std::nullopt);

// Ready-made oracle problems. Mechanisms are fixed outputs.
//
// Two solutions, V = (1, 0); the prior puts 1 - alpha on the valuable one and
// the mechanism returns it (lambda = 1).
OracleProblem MakeTwoSolutionProblem(double alpha);

// Prior uniform over two solutions of value 0; Opt has value 1 and lies
// outside the support; the mechanism returns a solution of value lambda
// (Opt itself when lambda = 1).
OracleProblem MakeZeroPriorProblem(double alpha, double lambda);

// n_solutions solutions with Uniform[0,1) values and a random prior over a
// random non-empty subset. The mechanism returns the lowest-valued solution
// with V >= lambda V(Opt) (ties to lower id), so lambda = 1 gives Opt.
OracleProblem MakeRandomProblem(std::size_t n_solutions, double alpha,
                                double lambda, Rng& rng);

}  // namespace fwi

#endif  // FWI_ORACLE_H_
