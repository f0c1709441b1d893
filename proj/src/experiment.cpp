#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "smoothcb/corral.hpp"
#include "smoothcb/harness.hpp"
#include "smoothcb/smooth_igw.hpp"

#ifndef SMOOTHCB_VERSION
#define SMOOTHCB_VERSION "unknown"
#endif

namespace smoothcb {

std::string format_number(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string ExperimentConfig::hash() const {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_text)));
  return buffer;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

template <class Enum>
std::optional<Enum> parse_choice(const KeyValueConfig& config, const std::string& key,
                                 const std::map<std::string, Enum>& choices) {
  const auto text = config.get_string(key);
  if (!text) return std::nullopt;
  const auto it = choices.find(*text);
  if (it != choices.end()) return it->second;
  std::string allowed;
  for (const auto& [name, value] : choices) allowed += (allowed.empty() ? "" : ", ") + name;
  config.add_problem("key '" + key + "': '" + *text + "' is not one of {" + allowed + "}");
  return std::nullopt;
}

bool is_finite_env(EnvironmentKind kind) {
  return kind == EnvironmentKind::multiple_best_arms || kind == EnvironmentKind::constant ||
         kind == EnvironmentKind::arm_dataset;
}

}  // namespace

ExperimentConfig read_experiment_config(const KeyValueConfig& config, const std::filesystem::path& base_dir) {
  ExperimentConfig exp;
  exp.canonical_text = config.canonical_text();
  exp.run = read_run_config(config);
  exp.regsq_given = config.has("regsq_estimate");

  const auto learner = parse_choice<LearnerKind>(config, "learner",
                                                 {{"smooth_igw", LearnerKind::smooth_igw},
                                                  {"corral", LearnerKind::corral},
                                                  {"epsilon_greedy_baseline", LearnerKind::epsilon_greedy_baseline},
                                                  {"uniform_baseline", LearnerKind::uniform_baseline}});
  if (learner) exp.learner = *learner;
  else if (!config.has("learner")) config.add_problem("missing required key 'learner'");

  const auto env_kind = parse_choice<EnvironmentKind>(config, "environment",
                                                      {{"multiple_best_arms", EnvironmentKind::multiple_best_arms},
                                                       {"constant", EnvironmentKind::constant},
                                                       {"holder", EnvironmentKind::holder},
                                                       {"arm_dataset", EnvironmentKind::arm_dataset},
                                                       {"regression_dataset", EnvironmentKind::regression_dataset}});
  if (env_kind) exp.environment.kind = *env_kind;
  else if (!config.has("environment")) config.add_problem("missing required key 'environment'");

  const bool finite = is_finite_env(exp.environment.kind);
  exp.oracle = finite ? OracleKind::tabular : OracleKind::parametric;
  if (const auto oracle = parse_choice<OracleKind>(config, "oracle",
                                                   {{"tabular", OracleKind::tabular},
                                                    {"aggregation", OracleKind::aggregation},
                                                    {"parametric", OracleKind::parametric},
                                                    {"parametric_rff", OracleKind::parametric_rff}}))
    exp.oracle = *oracle;

  if (const auto metric = parse_choice<MetricKind>(config, "metric",
                                                   {{"smooth_regret", MetricKind::smooth_regret},
                                                    {"standard_regret", MetricKind::standard_regret},
                                                    {"progressive_loss", MetricKind::progressive_loss}}))
    exp.metric = *metric;

  exp.replicates = config.uint_or("replicates", 1);
  if (exp.replicates < 1) config.add_problem("replicates must be >= 1");
  if (const auto dir = config.get_string("output_dir")) {
    exp.output_dir = *dir;
    if (exp.output_dir.is_relative() && !base_dir.empty()) exp.output_dir = base_dir / exp.output_dir;
  } else {
    config.add_problem("missing required key 'output_dir'");
  }

  // Environment parameters.
  auto& env = exp.environment;
  env.best_arms.arms = config.uint_or("arms", env.best_arms.arms);
  env.best_arms.optimal_arms = config.uint_or("optimal_arms", env.best_arms.optimal_arms);
  env.best_arms.optimal_mean = config.double_or("optimal_mean", env.best_arms.optimal_mean);
  env.best_arms.suboptimal_means = {config.double_or("suboptimal_mean", env.best_arms.suboptimal_means.front())};
  env.constant_loss = config.double_or("constant_loss", env.constant_loss);
  env.constant_arms = config.uint_or("constant_arms", env.constant_arms);
  env.holder.lipschitz = config.double_or("holder_lipschitz", env.holder.lipschitz);
  env.holder.exponent = config.double_or("holder_exponent", env.holder.exponent);
  env.context_dim = config.uint_or("context_dim", env.context_dim);
  env.regression.shuffle = config.bool_or("shuffle", env.regression.shuffle);
  env.regression.add_intercept = config.bool_or("add_intercept", env.regression.add_intercept);
  env.regression.rff_count = config.uint_or("rff_features", env.regression.rff_count);
  env.regression.rff_bandwidth = config.double_or("rff_bandwidth", env.regression.rff_bandwidth);
  env.regression.benchmark_grid = config.uint_or("benchmark_grid", env.regression.benchmark_grid);
  if (const auto path = config.get_string("dataset")) {
    env.dataset = *path;
    if (env.dataset.is_relative() && !base_dir.empty()) env.dataset = base_dir / env.dataset;
  }

  exp.epsilon = config.double_or("epsilon", exp.epsilon);
  exp.tabular_prior_loss = config.double_or("tabular_prior_loss", exp.tabular_prior_loss);
  exp.tabular_prior_count = config.double_or("tabular_prior_count", exp.tabular_prior_count);
  exp.parametric.step_size = config.double_or("step_size", exp.parametric.step_size);
  exp.parametric.inverse_sqrt_decay = config.bool_or("step_decay", exp.parametric.inverse_sqrt_decay);
  exp.parametric.initial_w = config.double_or("initial_w", exp.parametric.initial_w);
  exp.parametric.initial_xi = config.double_or("initial_xi", exp.parametric.initial_xi);
  exp.aggregation_experts = config.uint_or("aggregation_experts", exp.aggregation_experts);
  exp.aggregation_include_truth = config.bool_or("aggregation_include_truth", exp.aggregation_include_truth);
  if (const auto grid = parse_choice<CorralGrid>(config, "corral_grid",
                                                 {{"dyadic", CorralGrid::dyadic}, {"gamma_h", CorralGrid::gamma_h}}))
    exp.corral_grid = *grid;
  exp.gamma_h_lo = config.double_or("gamma_h_lo", exp.gamma_h_lo);
  exp.gamma_h_hi = config.double_or("gamma_h_hi", exp.gamma_h_hi);
  exp.gamma_h_count = config.uint_or("gamma_h_count", exp.gamma_h_count);
  exp.ci_level = config.double_or("ci_level", exp.ci_level);
  exp.bootstrap_resamples = config.uint_or("bootstrap_resamples", exp.bootstrap_resamples);
  exp.threads = config.uint_or("threads", exp.threads);

  for (const auto& key : config.unused_keys()) config.add_problem("unknown key '" + key + "'");

  // Cross-field checks.
  const bool needs_oracle = exp.learner != LearnerKind::uniform_baseline;
  if (needs_oracle) {
    if ((exp.oracle == OracleKind::tabular) && !finite)
      config.add_problem("oracle 'tabular' needs a finite-armed environment");
    if ((exp.oracle == OracleKind::parametric || exp.oracle == OracleKind::parametric_rff) && finite)
      config.add_problem("parametric oracles need a continuous-action environment");
    if (exp.oracle == OracleKind::parametric_rff && env.kind != EnvironmentKind::regression_dataset)
      config.add_problem("oracle 'parametric_rff' needs environment 'regression_dataset'");
    if (exp.oracle == OracleKind::aggregation && env.kind == EnvironmentKind::regression_dataset)
      config.add_problem("oracle 'aggregation' is not available for regression datasets");
    if (exp.oracle == OracleKind::aggregation && exp.aggregation_experts < 1)
      config.add_problem("aggregation_experts must be >= 1");
  }
  if (exp.metric == MetricKind::smooth_regret && !exp.run.smoothing)
    config.add_problem("metric 'smooth_regret' needs 'smoothing'");
  if (exp.learner == LearnerKind::smooth_igw && !exp.run.smoothing)
    config.add_problem("learner 'smooth_igw' needs 'smoothing'");
  const bool gamma_from_regsq = (exp.learner == LearnerKind::smooth_igw && !exp.run.gamma_override) ||
                                (exp.learner == LearnerKind::corral && exp.corral_grid == CorralGrid::dyadic);
  if (gamma_from_regsq && !exp.regsq_given &&
      (exp.oracle == OracleKind::parametric || exp.oracle == OracleKind::parametric_rff))
    config.add_problem("parametric oracles need an explicit 'regsq_estimate'");
  if (exp.learner == LearnerKind::corral) {
    if (exp.run.horizon < 2) config.add_problem("learner 'corral' needs horizon >= 2");
    if (exp.corral_grid == CorralGrid::gamma_h &&
        (!(exp.gamma_h_lo > 0.0) || !(exp.gamma_h_hi >= exp.gamma_h_lo) || exp.gamma_h_count < 1))
      config.add_problem("gamma_h grid needs 0 < gamma_h_lo <= gamma_h_hi and gamma_h_count >= 1");
  }
  if (exp.learner == LearnerKind::epsilon_greedy_baseline && !(exp.epsilon >= 0.0 && exp.epsilon <= 1.0))
    config.add_problem("epsilon must lie in [0, 1]");
  if (!(exp.ci_level > 0.0 && exp.ci_level < 1.0)) config.add_problem("ci_level must lie in (0, 1)");
  if (exp.bootstrap_resamples < 1000) config.add_problem("bootstrap_resamples must be >= 1000");
  if (!(exp.parametric.step_size > 0.0)) config.add_problem("step_size must be > 0");
  if (!(exp.tabular_prior_loss >= 0.0 && exp.tabular_prior_loss <= 1.0))
    config.add_problem("tabular_prior_loss must lie in [0, 1]");
  if (!(exp.tabular_prior_count >= 0.0)) config.add_problem("tabular_prior_count must be >= 0");

  switch (env.kind) {
    case EnvironmentKind::multiple_best_arms:
      try {
        env.best_arms.validate();
      } catch (const std::exception& e) {
        config.add_problem(e.what());
      }
      break;
    case EnvironmentKind::constant:
      if (!(env.constant_loss >= 0.0 && env.constant_loss <= 1.0)) config.add_problem("constant_loss must lie in [0, 1]");
      if (env.constant_arms < 1) config.add_problem("constant_arms must be >= 1");
      break;
    case EnvironmentKind::holder:
      try {
        env.holder.validate();
      } catch (const std::exception& e) {
        config.add_problem(e.what());
      }
      if (env.context_dim < 1) config.add_problem("context_dim must be >= 1");
      break;
    case EnvironmentKind::arm_dataset:
    case EnvironmentKind::regression_dataset:
      if (env.dataset.empty())
        config.add_problem("environment needs 'dataset'");
      else if (!std::filesystem::exists(env.dataset))
        config.add_problem("dataset '" + env.dataset.string() + "' does not exist");
      break;
  }
  if (exp.oracle == OracleKind::parametric_rff) env.regression.random_fourier_features = true;

  if (!config.problems().empty()) {
    std::string msg = "invalid experiment configuration:";
    for (const auto& p : config.problems()) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
  return exp;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  const auto config = KeyValueConfig::load(path);
  return read_experiment_config(config, path.parent_path());
}

// ---------------------------------------------------------------------------
// Replicates

namespace {

std::unique_ptr<Environment> build_environment(const ExperimentConfig& config, Rng rng) {
  const auto& env = config.environment;
  switch (env.kind) {
    case EnvironmentKind::multiple_best_arms:
      return make_multiple_best_arms(env.best_arms, std::move(rng));
    case EnvironmentKind::constant:
      return std::make_unique<FiniteArmEnvironment>(std::vector<double>(env.constant_arms, env.constant_loss),
                                                    NoiseModel::none, std::move(rng));
    case EnvironmentKind::holder:
      return make_holder_env(env.holder, env.context_dim, std::move(rng));
    case EnvironmentKind::arm_dataset:
      return load_arm_dataset(env.dataset, std::move(rng));
    case EnvironmentKind::regression_dataset:
      return load_regression_dataset(env.dataset, std::move(rng), env.regression);
  }
  throw std::logic_error("unknown environment kind");
}

std::vector<AggregationOracle::Expert> make_experts(const ExperimentConfig& config, const Environment& env,
                                                    Rng& rng) {
  std::vector<AggregationOracle::Expert> experts;
  std::size_t random_count = config.aggregation_experts;
  if (const auto* finite = dynamic_cast<const FiniteArmEnvironment*>(&env)) {
    if (config.aggregation_include_truth && random_count > 0) {
      auto truth = std::make_shared<const std::vector<double>>(finite->means());
      experts.push_back([truth](const Context&, const Action& a) { return (*truth)[std::get<Arm>(a).index]; });
      --random_count;
    }
    for (std::size_t k = 0; k < random_count; ++k) {
      auto means = std::make_shared<std::vector<double>>(finite->means().size());
      for (double& m : *means) m = uniform01(rng);
      experts.push_back([means](const Context&, const Action& a) { return (*means)[std::get<Arm>(a).index]; });
    }
    return experts;
  }
  const auto* holder = dynamic_cast<const HolderEnvironment*>(&env);
  if (!holder) throw std::invalid_argument("aggregation experts are only defined for finite and Hölder environments");
  const HolderSpec spec = holder->spec();
  auto make = [spec](std::vector<double> direction) {
    return [spec, direction = std::move(direction)](const Context& x, const Action& a) {
      const double center =
          sigmoid(std::inner_product(direction.begin(), direction.end(), x.features.begin(), 0.0));
      return std::min(1.0, spec.lipschitz * std::pow(std::abs(std::get<Point>(a).value - center), spec.exponent));
    };
  };
  if (config.aggregation_include_truth && random_count > 0) {
    experts.push_back(make(holder->direction()));
    --random_count;
  }
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(holder->context_dim())));
  for (std::size_t k = 0; k < random_count; ++k) {
    std::vector<double> direction(holder->context_dim());
    for (double& v : direction) v = normal(rng);
    experts.push_back(make(std::move(direction)));
  }
  return experts;
}

double default_regsq(const ExperimentConfig& config, const Environment& env) {
  if (config.regsq_given) return config.run.regsq_estimate;
  switch (config.oracle) {
    case OracleKind::tabular:
      return std::log(static_cast<double>(env.space().size()) * static_cast<double>(config.run.horizon)) +
             (env.space().size() * config.run.horizon == 1 ? 1.0 : 0.0);
    case OracleKind::aggregation:
      return std::log(static_cast<double>(std::max<std::size_t>(2, config.aggregation_experts)));
    default:
      return config.run.regsq_estimate;
  }
}

using Stepper = std::function<RoundLog(const Context&, const LossCallback&)>;

std::vector<RoundLog> drive(Environment& env, std::uint64_t horizon, const Stepper& step,
                            const RoundObserver& observer) {
  std::vector<RoundLog> logs;
  logs.reserve(horizon);
  for (std::uint64_t i = 0; i < horizon; ++i) {
    const Context context = env.next_context();
    RoundLog log = step(context, [&](const Action& a) { return env.sample_loss(context, a); });
    log.t = i + 1;
    log.mean_loss = env.mean_loss(context, log.action);
    if (observer) observer(context, log);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace

ReplicateResult run_replicate(const ExperimentConfig& config, std::uint64_t seed) {
  auto env = build_environment(config, seeded_rng(seed, "env"));
  const ActionSpace space = env->space();
  const std::uint64_t horizon = config.run.horizon;
  const double regsq = default_regsq(config, *env);
  auto oracle_rng = std::make_shared<Rng>(seeded_rng(seed, "oracle"));

  OracleFactory make_oracle = [&, oracle_rng](std::size_t) -> std::unique_ptr<RegressionOracle> {
    switch (config.oracle) {
      case OracleKind::tabular:
        return std::make_unique<TabularOracle>(space.size(), config.tabular_prior_loss, config.tabular_prior_count);
      case OracleKind::aggregation:
        return std::make_unique<AggregationOracle>(make_experts(config, *env, *oracle_rng));
      case OracleKind::parametric:
      case OracleKind::parametric_rff:
        return std::make_unique<ParametricOracle>(env->context_dim(), config.parametric);
    }
    throw std::logic_error("unknown oracle kind");
  };

  std::vector<double> best;
  best.reserve(horizon);
  const auto h = config.run.smoothing;
  RoundObserver observer = [&](const Context& context, RoundLog& log) {
    if (h) log.benchmark = env->smooth_benchmark(context, *h);
    best.push_back(env->best_mean(context));
  };

  std::vector<RoundLog> logs;
  switch (config.learner) {
    case LearnerKind::smooth_igw: {
      const double gamma = config.run.gamma_override.value_or(gamma_for_horizon(horizon, *h, regsq));
      SmoothIgwLearner learner(make_oracle(0), space, *h, gamma, seeded_rng(seed, "policy"));
      logs = run(learner, *env, horizon, observer);
      break;
    }
    case LearnerKind::corral: {
      AdaptiveOptions options;
      options.horizon = horizon;
      options.eta = config.run.corral_eta.value_or(1.0);
      options.regsq = regsq;
      options.seed = seed;
      options.base_count_override = config.run.base_count_override;
      if (config.corral_grid == CorralGrid::gamma_h)
        options.gamma_h_products = gamma_h_grid(config.gamma_h_lo, config.gamma_h_hi, config.gamma_h_count);
      logs = run_adaptive(space, make_oracle, *env, options, observer);
      break;
    }
    case LearnerKind::epsilon_greedy_baseline: {
      auto oracle = make_oracle(0);
      Rng rng = seeded_rng(seed, "policy");
      logs = drive(*env, horizon,
                   [&](const Context& context, const LossCallback& loss) {
                     RoundLog log;
                     const bool explore = bernoulli(rng, config.epsilon);
                     log.action = explore ? space.sample_base(rng) : oracle->argmin_action(context, space);
                     log.realized_loss = loss(log.action);
                     oracle->update(WeightedExample{1.0, context, log.action, log.realized_loss});
                     return log;
                   },
                   observer);
      break;
    }
    case LearnerKind::uniform_baseline: {
      Rng rng = seeded_rng(seed, "policy");
      logs = drive(*env, horizon,
                   [&](const Context&, const LossCallback& loss) {
                     RoundLog log;
                     log.action = space.sample_base(rng);
                     log.realized_loss = loss(log.action);
                     return log;
                   },
                   observer);
      break;
    }
  }

  ReplicateResult result;
  const std::string hash = config.hash();
  if (h) {
    result.smooth_curve = compute_regret_curve(logs, MetricKind::smooth_regret);
    result.smooth_curve->config_hash = hash;
    result.smooth_curve->seed = seed;
  }
  for (std::size_t i = 0; i < logs.size(); ++i)
    if (config.metric != MetricKind::smooth_regret) logs[i].benchmark = best[i];
  {
    std::vector<RoundLog> standard = logs;
    for (std::size_t i = 0; i < standard.size(); ++i) standard[i].benchmark = best[i];
    result.standard_curve = compute_regret_curve(standard, MetricKind::standard_regret);
    result.standard_curve.config_hash = hash;
    result.standard_curve.seed = seed;
  }

  ReplicateSummary& summary = result.summary;
  summary.seed = seed;
  summary.horizon = horizon;
  summary.final_standard_regret = result.standard_curve.final_value();
  if (result.smooth_curve) summary.final_smooth_regret = result.smooth_curve->final_value();
  std::vector<double> realized(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) realized[i] = logs[i].realized_loss;
  if (!realized.empty()) {
    summary.final_progressive_loss = sample_mean(realized);
    Rng boot = seeded_rng(seed, "bootstrap");
    std::tie(summary.ci_lo, summary.ci_hi) = bootstrap_ci(realized, config.ci_level, config.bootstrap_resamples, boot);
  }
  result.logs = std::move(logs);
  return result;
}

// ---------------------------------------------------------------------------
// Output files

namespace {

void write_round_csv(const std::filesystem::path& path, const ReplicateResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kRoundCsvHeader << '\n';
  for (std::size_t i = 0; i < result.logs.size(); ++i) {
    const RoundLog& log = result.logs[i];
    out << log.t << ',';
    if (log.base_index) out << *log.base_index;
    out << ',' << to_string(log.action) << ',' << format_number(log.realized_loss) << ','
        << format_number(log.mean_loss.value_or(0.0)) << ',';
    if (log.benchmark) out << format_number(*log.benchmark);
    out << ',';
    if (result.smooth_curve) out << format_number(result.smooth_curve->points[i].second);
    out << ',' << format_number(result.standard_curve.points[i].second) << '\n';
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_realized_csv(const std::filesystem::path& path, const ReplicateResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,realized_loss,cum_realized_loss,progressive_loss\n";
  double running = 0.0;
  for (const RoundLog& log : result.logs) {
    running += log.realized_loss;
    out << log.t << ',' << format_number(log.realized_loss) << ',' << format_number(running) << ','
        << format_number(running / static_cast<double>(log.t)) << '\n';
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::string round_csv_name(std::uint64_t seed) { return "rounds_seed" + std::to_string(seed) + ".csv"; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  ExperimentResult result;
  result.replicates.resize(config.replicates);
  result.round_csvs.resize(config.replicates);

  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.replicates);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(config.replicates);
  auto work = [&] {
    for (std::size_t r = next++; r < config.replicates; r = next++) {
      try {
        const std::uint64_t seed = config.run.seed + r;
        const ReplicateResult rep = run_replicate(config, seed);
        const auto rounds = config.output_dir / round_csv_name(seed);
        write_round_csv(rounds, rep);
        write_realized_csv(config.output_dir / ("rounds_seed" + std::to_string(seed) + "_realized.csv"), rep);
        result.replicates[r] = rep.summary;
        result.round_csvs[r] = rounds;
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  result.summary_csv = config.output_dir / "summary.csv";
  {
    std::ofstream out(result.summary_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + result.summary_csv.string());
    out << kSummaryCsvHeader << '\n';
    const std::string hash = config.hash();
    for (const auto& s : result.replicates) {
      out << hash << ',' << s.seed << ',' << s.horizon << ','
          << (s.final_smooth_regret ? format_number(*s.final_smooth_regret) : "") << ','
          << format_number(s.final_standard_regret) << ',' << format_number(s.final_progressive_loss) << ','
          << format_number(s.ci_lo) << ',' << format_number(s.ci_hi) << '\n';
    }
  }

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = config.hash();
  manifest["code_version"] = SMOOTHCB_VERSION;
  manifest["created_at"] = utc_timestamp();
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  {
    std::istringstream lines(config.canonical_text);
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find('=');
      entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  manifest["config"] = entries;
  manifest["replicates"] = config.replicates;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& path : result.round_csvs) files.push_back(path.filename().string());
  manifest["round_files"] = files;
  manifest["summary_file"] = result.summary_csv.filename().string();
  result.manifest = config.output_dir / "manifest.json";
  std::ofstream(result.manifest) << manifest.dump(2) << '\n';
  return result;
}

// ---------------------------------------------------------------------------

DirectoryReport summarize_directory(const std::filesystem::path& dir) {
  const auto path = dir / "summary.csv";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kSummaryCsvHeader)
    throw std::runtime_error(path.string() + ": unexpected header");
  auto number = [&](const std::string& cell) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
      throw std::runtime_error(path.string() + ": bad number '" + cell + "'");
    return value;
  };
  DirectoryReport report;
  bool all_smooth = true;
  double smooth_sum = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() == 7) cells.emplace_back();
    if (cells.size() != 8) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    report.config_hash = cells[0];
    ReplicateSummary s;
    s.seed = static_cast<std::uint64_t>(number(cells[1]));
    s.horizon = static_cast<std::uint64_t>(number(cells[2]));
    if (!cells[3].empty()) {
      s.final_smooth_regret = number(cells[3]);
      smooth_sum += *s.final_smooth_regret;
    } else {
      all_smooth = false;
    }
    s.final_standard_regret = number(cells[4]);
    s.final_progressive_loss = number(cells[5]);
    s.ci_lo = number(cells[6]);
    s.ci_hi = number(cells[7]);
    report.mean_standard_regret += s.final_standard_regret;
    report.mean_progressive_loss += s.final_progressive_loss;
    report.replicates.push_back(s);
  }
  if (report.replicates.empty()) throw std::runtime_error(path.string() + ": no replicates");
  const double n = static_cast<double>(report.replicates.size());
  report.mean_standard_regret /= n;
  report.mean_progressive_loss /= n;
  if (all_smooth) report.mean_smooth_regret = smooth_sum / n;
  return report;
}

}  // namespace smoothcb
