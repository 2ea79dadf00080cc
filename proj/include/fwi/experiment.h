#ifndef FWI_EXPERIMENT_H_
#define FWI_EXPERIMENT_H_

// Alpha sweeps over the assignment and sortition scenarios: batched Monte
// Carlo rounds of Simple-Mix or Epsilon-Mix, summarized as CSV.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwi/assignment.h"
#include "fwi/oracle.h"

namespace fwi::experiment {

enum class Scenario { kSynthetic, kBids, kSortition };

std::string_view ScenarioName(Scenario scenario);
// Accepts "synthetic", "bids", "sortition".
Scenario ParseScenario(std::string_view name);

// {1/20, 2/20, ..., 19/20}.
std::vector<double> DefaultAlphaGrid();

struct ExperimentConfig {
  Scenario scenario = Scenario::kSynthetic;
  Algorithm algorithm = Algorithm::kSimpleMix;
  std::vector<double> alpha_grid = DefaultAlphaGrid();
  std::optional<double> epsilon;
  // Unset counts take the defaults of ApplyDefaultCounts.
  std::optional<int> n_rounds;
  std::optional<int> n_batches;
  // Prior samples per Epsilon-Mix call. Defaults: ceil(SampleSize(0, eps) /
  // (1 - alpha)) for synthetic, 50 otherwise.
  std::optional<std::size_t> n_eps_override;
  std::uint64_t seed = 0;
  std::optional<std::string> input_path;
  std::string output_path;

  // Synthetic shape.
  int n_left = 100;
  int n_right = 5;
  // Bid scenario: reviewers per paper and per-reviewer cap (default
  // ceil(3 n_papers / n_reviewers)).
  int demand = 3;
  std::optional<int> load_cap;
  // Default: max matching for synthetic, greedy for bids.
  std::optional<assignment::MechanismKind> mechanism;
  // Sortition panel size, and whether numeric features are standardized.
  int panel_size = 600;
  bool scale_features = false;
  double lambda = 1.0;
};

// Fills unset round and batch counts: Simple-Mix 100x10 and Epsilon-Mix 50x5
// for the assignment scenarios, 20x5 and 10x5 for sortition.
void ApplyDefaultCounts(ExperimentConfig& config);

// Throws ParameterError on any invalid field.
void Validate(const ExperimentConfig& config);

// Prior samples Epsilon-Mix draws at this alpha.
std::size_t EffectiveSampleCount(const ExperimentConfig& config, double alpha);

struct SweepRow {
  double alpha = 0.0;
  double mean = 0.0;       // grand mean of all round values
  double std_dev = 0.0;    // sample standard deviation of the batch means
  std::vector<double> batch_means;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Deterministic given config.seed. Round (alpha, b, r) draws from the
// substream SplitSeed(SplitSeed(SplitSeed(seed, alpha), b), r); the scenario
// instance from SplitSeed(seed, kInstanceStream).
SweepResult RunSweep(const ExperimentConfig& config);

inline constexpr std::uint64_t kInstanceStream = 0x1a57a9ce;

// "alpha,means,variance" header, then one row per alpha with 10 significant
// digits. "variance" holds the batch-mean standard deviation.
std::string FormatCsv(const SweepResult& result);
void EmitCsv(const SweepResult& result, const std::string& path);
// Reads alpha, mean and std_dev back (batch means are not stored).
SweepResult ParseCsv(std::string_view text);

}  // namespace fwi::experiment

#endif  // FWI_EXPERIMENT_H_
