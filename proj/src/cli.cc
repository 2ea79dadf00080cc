#include "fwi/cli.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fwi/errors.h"
#include "fwi/experiment.h"
#include "fwi/ingest.h"
#include "fwi/mix.h"
#include "fwi/oracle.h"

namespace fwi::cli {
namespace {

struct Flags {
  std::string config;
  std::string scenario;
  std::string algorithm = "simple_mix";
  std::string alpha_grid;
  std::optional<double> epsilon;
  std::optional<int> rounds;
  std::optional<int> batches;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
  int n_left = 100;
  int n_right = 5;
  int demand = 3;
  std::optional<int> load_cap;
  std::string mechanism;
  int panel_size = 600;
  bool scale = false;
  double lambda = 1.0;
  // oracle-check
  std::string preset = "random";
  double alpha = 0.5;
  std::size_t runs = 100000;
  std::size_t solutions = 10;
};

// Reads `key=value` lines ('#' starts a comment) and turns them into
// `--key=value` arguments.
std::vector<std::string> ConfigArguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value in config file", number);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key in config file", number);
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::vector<double> ParseGrid(const std::string& text) {
  if (text.empty() || text == "default") return experiment::DefaultAlphaGrid();
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError("bad alpha grid entry '" + item + "'");
    }
  }
  return grid;
}

std::string DefaultOutputPath(const std::string& name) {
  const char* dir = std::getenv(kOutputDirEnv);
  const std::filesystem::path base = dir && *dir ? dir : ".";
  return (base / name).string();
}

void WriteText(const std::string& text, const std::string& path,
               std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("cannot write '" + path + "'");
}

std::string FormatValue(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

int RunSweepVerb(const Flags& flags, std::ostream& out) {
  experiment::ExperimentConfig config;
  config.scenario = experiment::ParseScenario(
      flags.scenario.empty() ? "synthetic" : flags.scenario);
  config.algorithm = ParseAlgorithm(flags.algorithm);
  config.alpha_grid = ParseGrid(flags.alpha_grid);
  config.epsilon = flags.epsilon;
  config.n_rounds = flags.rounds;
  config.n_batches = flags.batches;
  config.n_eps_override = flags.samples;
  config.seed = flags.seed;
  if (!flags.input.empty()) config.input_path = flags.input;
  config.n_left = flags.n_left;
  config.n_right = flags.n_right;
  config.demand = flags.demand;
  config.load_cap = flags.load_cap;
  if (flags.mechanism == "max_matching") {
    config.mechanism = assignment::MechanismKind::kMaxMatching;
  } else if (flags.mechanism == "greedy") {
    config.mechanism = assignment::MechanismKind::kGreedy;
  } else if (!flags.mechanism.empty()) {
    throw ParameterError("unknown mechanism '" + flags.mechanism +
                         "' (expected max_matching or greedy)");
  }
  config.panel_size = flags.panel_size;
  config.scale_features = flags.scale;
  config.lambda = flags.lambda;
  config.output_path =
      flags.output.empty()
          ? DefaultOutputPath("sweep_" +
                              std::string(experiment::ScenarioName(config.scenario)) +
                              "_" + std::string(AlgorithmName(config.algorithm)) +
                              ".csv")
          : flags.output;
  experiment::ApplyDefaultCounts(config);
  experiment::Validate(config);

  const experiment::SweepResult result = experiment::RunSweep(config);
  experiment::EmitCsv(result, config.output_path);
  out << "wrote " << result.rows.size() << " rows to " << config.output_path
      << "\n";
  return kExitOk;
}

int RunOracleVerb(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (!flags.scenario.empty() && flags.scenario != "explicit") {
    experiment::ParseScenario(flags.scenario);
    err << "oracle unavailable: the " << flags.scenario
        << " scenario has no enumerable solution space or explicit prior\n";
    return kExitUsage;
  }
  const Algorithm algorithm = ParseAlgorithm(flags.algorithm);
  std::optional<EpsilonMixOptions> options;
  if (algorithm == Algorithm::kEpsilonMix) {
    if (!flags.epsilon) throw ParameterError("epsilon_mix requires --epsilon");
    options = EpsilonMixOptions{*flags.epsilon, flags.samples};
    ValidateEpsilonMixOptions(*options);
  } else if (flags.epsilon) {
    throw ParameterError("--epsilon only applies to epsilon_mix");
  }
  if (flags.runs == 0) throw ParameterError("runs must be positive");

  Rng rng = MakeRng(flags.seed);
  std::optional<OracleProblem> problem;
  if (flags.preset == "tight") {
    problem = MakeTwoSolutionProblem(flags.alpha);
  } else if (flags.preset == "zero-prior") {
    problem = MakeZeroPriorProblem(flags.alpha, flags.lambda);
  } else if (flags.preset == "alpha-zero") {
    problem = MakeRandomProblem(flags.solutions, 0.0, flags.lambda, rng);
  } else if (flags.preset == "random") {
    problem = MakeRandomProblem(flags.solutions, flags.alpha, flags.lambda, rng);
  } else {
    throw ParameterError("unknown preset '" + flags.preset +
                         "' (expected tight, zero-prior, alpha-zero, random)");
  }

  const GuaranteeReport report =
      CheckGuarantees(algorithm, *problem, options, flags.runs, rng);
  std::string text = "preset=" + flags.preset + "\n" + FormatReport(report);
  const ExplicitInstance& instance = problem->instance;
  const Distribution& prior = *instance.prior().explicit_law();
  text += "v_prior=" + FormatValue(ExpectedValue(prior, instance.value())) + "\n";
  if (algorithm == Algorithm::kSimpleMix) {
    // The mechanism presets are deterministic, so one run names A.
    const SolutionId a = instance.mechanism().Run(rng);
    const double exact = ExpectedValue(
        SimpleMixDistribution(prior, a, instance.alpha()), instance.value());
    text += "exact_welfare_ratio=" +
            FormatValue(report.v_p_opt > 0.0 ? exact / report.v_p_opt : 0.0) +
            "\n";
  }
  WriteText(text, flags.output, out);
  return report.fairness_ok && report.welfare_ok ? kExitOk : kExitCheckFailed;
}

int RunIngestVerb(const Flags& flags, std::ostream& out) {
  if (flags.input.empty()) throw ParameterError("ingest-check requires --input");
  const std::string kind = flags.scenario.empty() ? "bids" : flags.scenario;
  std::string text;
  auto line = [&](const std::string& key, const std::string& value) {
    text += key + "=" + value + "\n";
  };
  if (kind == "bids") {
    const ingest::BidCorpus corpus = ingest::ParseBids(flags.input);
    std::size_t counts[4] = {0, 0, 0, 0};
    for (const auto& bid : corpus.bids) ++counts[static_cast<int>(bid.label)];
    const int n_left = static_cast<int>(corpus.reviewers.size());
    const int n_right = static_cast<int>(corpus.papers.size());
    const int cap =
        flags.load_cap.value_or(ingest::DefaultLoadCap(n_left, n_right));
    const auto instance = ingest::BidsToInstance(corpus, flags.demand, cap);
    line("reviewers", std::to_string(n_left));
    line("papers", std::to_string(n_right));
    line("bids", std::to_string(corpus.bids.size()));
    for (auto label : {ingest::BidLabel::kYes, ingest::BidLabel::kMaybe,
                       ingest::BidLabel::kNoResponse, ingest::BidLabel::kNo}) {
      line(std::string(ingest::LabelName(label)),
           std::to_string(counts[static_cast<int>(label)]));
    }
    line("demand", std::to_string(instance.demand()));
    line("load_cap", std::to_string(instance.load_cap()));
    double total = 0.0;
    for (double w : instance.weights()) total += w;
    line("total_weight", FormatValue(total));
  } else if (kind == "sortition") {
    ingest::FeatureConfig features = ingest::FeatureConfig::Adult();
    features.scale = flags.scale;
    const auto table = ingest::ReadDemographics(flags.input, features);
    const auto points = ingest::ToPointSet(table);
    line("rows", std::to_string(table.rows.size()));
    line("dropped_missing", std::to_string(table.dropped_missing));
    line("dropped_duplicates", std::to_string(table.dropped_duplicates));
    line("points", std::to_string(points.size()));
    line("dim", std::to_string(points.dim()));
  } else {
    throw ParameterError("ingest-check supports --scenario bids or sortition");
  }
  WriteText(text, flags.output, out);
  return kExitOk;
}

void AddCommon(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key=value file; flags override it");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--output", f.output, "output file");
  sub->add_option("--algorithm", f.algorithm, "simple_mix or epsilon_mix");
  sub->add_option("--epsilon", f.epsilon, "epsilon for epsilon_mix");
  sub->add_option("--samples", f.samples, "prior samples per epsilon_mix call");
  sub->add_option("--lambda", f.lambda, "mechanism approximation factor");
  sub->add_option("--input", f.input, "input data file");
  sub->add_option("--demand", f.demand, "reviewers per paper");
  sub->add_option("--load-cap", f.load_cap, "papers per reviewer");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Flags flags;
  CLI::App app{"Fairness-to-welfare interpolation experiments", "fwi"};
  app.require_subcommand(1);

  CLI::App* sweep = app.add_subcommand("sweep", "run an alpha sweep");
  CLI::App* oracle =
      app.add_subcommand("oracle-check", "check guarantees on an explicit problem");
  CLI::App* ingest_check =
      app.add_subcommand("ingest-check", "parse and summarize an input file");
  for (CLI::App* sub : {sweep, oracle, ingest_check}) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    AddCommon(sub, flags);
    sub->add_option("--scenario", flags.scenario,
                    "synthetic, bids or sortition");
    sub->add_flag("--scale", flags.scale,
                  "standardize numeric demographic features");
  }
  sweep->add_option("--alpha-grid", flags.alpha_grid,
                    "comma-separated alphas (default 1/20..19/20)");
  sweep->add_option("--rounds", flags.rounds, "rounds per batch");
  sweep->add_option("--batches", flags.batches, "batches per alpha");
  sweep->add_option("--n-left", flags.n_left, "synthetic agents");
  sweep->add_option("--n-right", flags.n_right, "synthetic items");
  sweep->add_option("--mechanism", flags.mechanism, "max_matching or greedy");
  sweep->add_option("--panel-size", flags.panel_size, "sortition panel size");
  oracle->add_option("--preset", flags.preset,
                     "tight, zero-prior, alpha-zero or random");
  oracle->add_option("--alpha", flags.alpha, "fairness budget");
  oracle->add_option("--runs", flags.runs, "Monte Carlo runs");
  oracle->add_option("--solutions", flags.solutions,
                     "solution count for random presets");

  try {
    // Config entries go right after the verb so that explicit flags, which
    // come later, take precedence.
    std::vector<std::string> argv = args;
    for (std::size_t i = 1; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
      }
      if (!path.empty()) {
        auto extra = ConfigArguments(path);
        argv.insert(argv.begin() + 1, extra.begin(), extra.end());
        break;
      }
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }

  try {
    if (sweep->parsed()) return RunSweepVerb(flags, out);
    if (oracle->parsed()) return RunOracleVerb(flags, out, err);
    return RunIngestVerb(flags, out);
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace fwi::cli
