#include "fwi/experiment.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>

#include "fwi/ingest.h"
#include "fwi/mix.h"
#include "fwi/parallel.h"
#include "fwi/sortition.h"

namespace fwi::experiment {
namespace {

constexpr std::size_t kFixedSampleCount = 50;

template <typename S>
std::vector<double> RunCell(const FwiInstance<S>& instance,
                            const ExperimentConfig& config, double alpha,
                            std::uint64_t cell_seed) {
  const int rounds = *config.n_rounds;
  std::optional<EpsilonMixOptions> options;
  if (config.algorithm == Algorithm::kEpsilonMix) {
    options = EpsilonMixOptions{*config.epsilon,
                                EffectiveSampleCount(config, alpha)};
  }
  std::vector<double> values(rounds);
  for (int r = 0; r < rounds; ++r) {
    Rng rng = MakeRng(SplitSeed(cell_seed, static_cast<std::uint64_t>(r)));
    const S out = options ? EpsilonMix(instance, *options, rng)
                          : SimpleMix(instance, rng);
    values[r] = instance.value()(out);
  }
  return values;
}

template <typename S>
SweepResult Sweep(const FwiInstance<S>& base, const ExperimentConfig& config) {
  const std::size_t n_alpha = config.alpha_grid.size();
  const std::size_t n_batches = static_cast<std::size_t>(*config.n_batches);
  std::vector<FwiInstance<S>> instances;
  instances.reserve(n_alpha);
  for (double alpha : config.alpha_grid) instances.push_back(base.WithAlpha(alpha));

  std::vector<double> batch_means(n_alpha * n_batches);
  ParallelFor(n_alpha * n_batches, [&](std::size_t cell) {
    const std::size_t a = cell / n_batches;
    const std::size_t b = cell % n_batches;
    const double alpha = config.alpha_grid[a];
    const std::uint64_t seed =
        SplitSeed(SplitSeed(config.seed, alpha), static_cast<std::uint64_t>(b));
    const std::vector<double> values =
        RunCell(instances[a], config, alpha, seed);
    batch_means[cell] = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
  });

  SweepResult result;
  for (std::size_t a = 0; a < n_alpha; ++a) {
    SweepRow row;
    row.alpha = config.alpha_grid[a];
    row.batch_means.assign(batch_means.begin() + a * n_batches,
                           batch_means.begin() + (a + 1) * n_batches);
    row.mean = std::accumulate(row.batch_means.begin(), row.batch_means.end(),
                               0.0) /
               static_cast<double>(n_batches);
    if (n_batches > 1) {
      double ss = 0.0;
      for (double m : row.batch_means) ss += (m - row.mean) * (m - row.mean);
      row.std_dev = std::sqrt(ss / static_cast<double>(n_batches - 1));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace

std::string_view ScenarioName(Scenario scenario) {
  switch (scenario) {
    case Scenario::kSynthetic:
      return "synthetic";
    case Scenario::kBids:
      return "bids";
    case Scenario::kSortition:
      return "sortition";
  }
  return "synthetic";
}

Scenario ParseScenario(std::string_view name) {
  if (name == "synthetic") return Scenario::kSynthetic;
  if (name == "bids") return Scenario::kBids;
  if (name == "sortition") return Scenario::kSortition;
  throw ParameterError("unknown scenario '" + std::string(name) +
                       "' (expected synthetic, bids or sortition)");
}

std::vector<double> DefaultAlphaGrid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
  return grid;
}

void ApplyDefaultCounts(ExperimentConfig& config) {
  const bool simple = config.algorithm == Algorithm::kSimpleMix;
  if (config.scenario == Scenario::kSortition) {
    if (!config.n_rounds) config.n_rounds = simple ? 20 : 10;
    if (!config.n_batches) config.n_batches = 5;
  } else {
    if (!config.n_rounds) config.n_rounds = simple ? 100 : 50;
    if (!config.n_batches) config.n_batches = simple ? 10 : 5;
  }
}

void Validate(const ExperimentConfig& config) {
  if (config.alpha_grid.empty()) throw ParameterError("alpha grid is empty");
  for (double alpha : config.alpha_grid) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw ParameterError("alpha grid values must lie in (0, 1], got " +
                           std::to_string(alpha));
    }
  }
  const bool eps_mix = config.algorithm == Algorithm::kEpsilonMix;
  if (eps_mix && !config.epsilon) {
    throw ParameterError("epsilon_mix requires --epsilon");
  }
  if (!eps_mix && config.epsilon) {
    throw ParameterError("--epsilon only applies to epsilon_mix");
  }
  if (config.epsilon) ValidateEpsilonMixOptions({*config.epsilon, std::nullopt});
  if (config.n_rounds && *config.n_rounds < 1) {
    throw ParameterError("rounds must be positive");
  }
  if (config.n_batches && *config.n_batches < 1) {
    throw ParameterError("batches must be positive");
  }
  if (config.n_eps_override && *config.n_eps_override == 0) {
    throw ParameterError("samples must be positive");
  }
  if (config.scenario != Scenario::kSynthetic && !config.input_path) {
    throw ParameterError(std::string(ScenarioName(config.scenario)) +
                         " scenario requires --input");
  }
  if (config.n_left < 1 || config.n_right < 1) {
    throw ParameterError("n-left and n-right must be positive");
  }
  if (config.demand < 1) throw ParameterError("demand must be positive");
  if (config.load_cap && *config.load_cap < 1) {
    throw ParameterError("load cap must be positive");
  }
  if (config.panel_size < 1) throw ParameterError("panel size must be positive");
  if (!(config.lambda > 0.0 && config.lambda <= 1.0)) {
    throw ParameterError("lambda must lie in (0, 1]");
  }
}

std::size_t EffectiveSampleCount(const ExperimentConfig& config, double alpha) {
  if (config.n_eps_override) return *config.n_eps_override;
  // Epsilon-Mix never samples the prior at alpha = 1.
  if (alpha >= 1.0) return 1;
  if (config.scenario == Scenario::kSynthetic) {
    return TabulatedSampleSize(alpha, config.epsilon.value_or(0.1));
  }
  return kFixedSampleCount;
}

SweepResult RunSweep(const ExperimentConfig& input) {
  ExperimentConfig config = input;
  ApplyDefaultCounts(config);
  Validate(config);
  const std::uint64_t instance_seed = SplitSeed(config.seed, kInstanceStream);
  const double first_alpha = config.alpha_grid.front();

  switch (config.scenario) {
    case Scenario::kSynthetic: {
      Rng rng = MakeRng(instance_seed);
      auto instance = std::make_shared<const assignment::BipartiteInstance>(
          assignment::SyntheticInstance(config.n_left, config.n_right, rng));
      return Sweep(assignment::MakeAssignmentInstance(
                       instance,
                       config.mechanism.value_or(
                           assignment::MechanismKind::kMaxMatching),
                       config.lambda, first_alpha),
                   config);
    }
    case Scenario::kBids: {
      const ingest::BidCorpus corpus = ingest::ParseBids(*config.input_path);
      const int cap = config.load_cap.value_or(ingest::DefaultLoadCap(
          static_cast<int>(corpus.reviewers.size()),
          static_cast<int>(corpus.papers.size())));
      auto instance = std::make_shared<const assignment::BipartiteInstance>(
          ingest::BidsToInstance(corpus, config.demand, cap));
      return Sweep(assignment::MakeAssignmentInstance(
                       instance,
                       config.mechanism.value_or(
                           assignment::MechanismKind::kGreedy),
                       config.lambda, first_alpha),
                   config);
    }
    case Scenario::kSortition: {
      ingest::FeatureConfig features = ingest::FeatureConfig::Adult();
      features.scale = config.scale_features;
      auto points = std::make_shared<const sortition::PointSet>(
          ingest::ParseDemographics(*config.input_path, features));
      if (static_cast<std::size_t>(config.panel_size) > points->size()) {
        throw ParameterError("panel size " + std::to_string(config.panel_size) +
                             " exceeds the " + std::to_string(points->size()) +
                             " distinct individuals");
      }
      return Sweep(sortition::MakeSortitionInstance(points, config.panel_size,
                                                    first_alpha, instance_seed,
                                                    config.lambda),
                   config);
    }
  }
  throw ParameterError("unknown scenario");
}

std::string FormatCsv(const SweepResult& result) {
  if (result.rows.empty()) throw ParameterError("sweep result is empty");
  std::string out = "alpha,means,variance\n";
  char buf[96];
  for (const SweepRow& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", row.alpha, row.mean,
                  row.std_dev);
    out += buf;
  }
  return out;
}

void EmitCsv(const SweepResult& result, const std::string& path) {
  const std::string text = FormatCsv(result);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write '" + path + "'");
}

SweepResult ParseCsv(std::string_view text) {
  const std::vector<ingest::CsvRecord> records = ingest::SplitCsv(text);
  SweepResult result;
  bool header = true;
  for (const auto& record : records) {
    if (record.fields.size() == 1 && record.fields[0].empty()) continue;
    if (header) {
      if (record.fields !=
          std::vector<std::string>{"alpha", "means", "variance"}) {
        throw ParseError("expected header alpha,means,variance", record.line);
      }
      header = false;
      continue;
    }
    if (record.fields.size() != 3) {
      throw ParseError("expected 3 fields", record.line);
    }
    SweepRow row;
    try {
      std::size_t used = 0;
      double* slots[] = {&row.alpha, &row.mean, &row.std_dev};
      for (int k = 0; k < 3; ++k) {
        *slots[k] = std::stod(record.fields[k], &used);
        if (used != record.fields[k].size()) throw std::invalid_argument("");
      }
    } catch (const std::logic_error&) {
      throw ParseError("non-numeric field", record.line);
    }
    result.rows.push_back(std::move(row));
  }
  if (header) throw ParseError("missing header", 0);
  return result;
}

}  // namespace fwi::experiment
