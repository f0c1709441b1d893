// Experiment harness: regret accounting, statistics, tuning recipes, and the
// config-driven runner behind the command-line tool.
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothcb/config.hpp"
#include "smoothcb/core.hpp"
#include "smoothcb/environments.hpp"
#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

enum class MetricKind { smooth_regret, standard_regret, progressive_loss };

struct RegretCurve {
  /// (t, cumulative value), t = 1, 2, ...
  std::vector<std::pair<std::uint64_t, double>> points;
  std::string config_hash;
  std::uint64_t seed = 0;

  double final_value() const { return points.empty() ? 0.0 : points.back().second; }
  /// Cumulative value at round t. Throws std::out_of_range if absent.
  double at(std::uint64_t t) const;
};

/// Regret metrics: running sum of mean_loss - benchmark (conditional means,
/// not realized losses). progressive_loss: running average of realized loss.
/// Throws std::invalid_argument when a needed mean or benchmark is missing.
RegretCurve compute_regret_curve(const std::vector<RoundLog>& logs, MetricKind metric);

/// Mean computed around the first value, so a constant sample gives that
/// constant exactly. Requires a nonempty sample.
double sample_mean(std::span<const double> values);

/// Percentile bootstrap interval for the mean. Requires a nonempty sample,
/// level in (0, 1) and at least 1000 resamples.
std::pair<double, double> bootstrap_ci(std::span<const double> values, double level, std::size_t resamples,
                                       Rng& rng);

/// Least-squares slope of log(value) against log(t) over the checkpoints.
/// Needs at least 3 checkpoints with positive values.
double fit_loglog_slope(const RegretCurve& curve, std::span<const std::uint64_t> checkpoints);

/// Powers of two from T/64 up to T (T itself appended if not a power of two).
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);

/// min(1, L^(-2/(2a+1)) T^(-1/(2a+1)) regsq^(1/(2a+1))).
SmoothingCap tune_h_holder(double lipschitz, double exponent, std::uint64_t horizon, double regsq);

/// T^(-beta), beta in [0, 1].
double tune_eta_pareto(std::uint64_t horizon, double beta);

// ---------------------------------------------------------------------------
// Config-driven experiments

enum class LearnerKind { smooth_igw, corral, epsilon_greedy_baseline, uniform_baseline };
enum class OracleKind { tabular, aggregation, parametric, parametric_rff };
enum class EnvironmentKind { multiple_best_arms, constant, holder, arm_dataset, regression_dataset };
enum class CorralGrid { dyadic, gamma_h };

struct EnvironmentConfig {
  EnvironmentKind kind = EnvironmentKind::multiple_best_arms;
  MultipleBestArmsSpec best_arms;
  double constant_loss = 0.5;
  std::size_t constant_arms = 2;
  HolderSpec holder;
  std::size_t context_dim = 4;
  std::filesystem::path dataset;
  RegressionDatasetOptions regression;
};

struct ExperimentConfig {
  RunConfig run;
  bool regsq_given = false;
  LearnerKind learner = LearnerKind::smooth_igw;
  OracleKind oracle = OracleKind::tabular;
  EnvironmentConfig environment;
  MetricKind metric = MetricKind::standard_regret;
  std::size_t replicates = 1;
  std::filesystem::path output_dir;

  double epsilon = 0.05;
  double tabular_prior_loss = 0.5;
  double tabular_prior_count = 1.0;
  ParametricOptions parametric;
  std::size_t aggregation_experts = 16;
  bool aggregation_include_truth = true;
  CorralGrid corral_grid = CorralGrid::dyadic;
  double gamma_h_lo = 1e3;
  double gamma_h_hi = 1e6;
  std::size_t gamma_h_count = 8;
  double ci_level = 0.95;
  std::size_t bootstrap_resamples = 1000;
  std::size_t threads = 0;

  /// Canonical key=value text the config was read from.
  std::string canonical_text;
  /// 16 hex digits identifying canonical_text.
  std::string hash() const;
};

/// Reads and validates an experiment config. All problems found are reported
/// together in one ConfigError. Relative dataset paths resolve against
/// `base_dir`.
ExperimentConfig read_experiment_config(const KeyValueConfig& config, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ReplicateSummary {
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::optional<double> final_smooth_regret;
  double final_standard_regret = 0.0;
  double final_progressive_loss = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct ReplicateResult {
  ReplicateSummary summary;
  std::vector<RoundLog> logs;  // benchmark holds the metric's benchmark
  RegretCurve standard_curve;
  std::optional<RegretCurve> smooth_curve;
};

/// Runs one replicate entirely in memory.
ReplicateResult run_replicate(const ExperimentConfig& config, std::uint64_t seed);

struct ExperimentResult {
  std::vector<ReplicateSummary> replicates;
  std::filesystem::path summary_csv;
  std::vector<std::filesystem::path> round_csvs;
  std::filesystem::path manifest;
};

/// Runs every replicate (seeds seed, seed+1, ...) and writes per-round CSVs,
/// realized-loss CSVs, summary.csv and manifest.json under output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr const char* kRoundCsvHeader =
    "t,base_index,action,realized_loss,mean_loss,benchmark,cum_smooth_regret,cum_standard_regret";
inline constexpr const char* kSummaryCsvHeader =
    "config_hash,seed,T,final_smooth_regret,final_standard_regret,final_progressive_loss,ci_lo,ci_hi";

struct DirectoryReport {
  std::string config_hash;
  std::vector<ReplicateSummary> replicates;
  double mean_standard_regret = 0.0;
  std::optional<double> mean_smooth_regret;
  double mean_progressive_loss = 0.0;
};

/// Reads summary.csv from an output directory. Throws std::runtime_error.
DirectoryReport summarize_directory(const std::filesystem::path& dir);

/// Shortest round-trip decimal rendering used in every CSV.
std::string format_number(double value);

}  // namespace smoothcb
