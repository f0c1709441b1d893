// smoothcb: run experiments, sanity-check the samplers, summarize outputs.
//
//   smoothcb run --config exp.cfg
//   smoothcb bench --suite sampling
//   smoothcb report --dir out/
//
// Exit codes: 0 ok, 2 bad configuration or usage, 3 runtime failure.
#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "smoothcb/harness.hpp"
#include "smoothcb/sampling.hpp"
#include "smoothcb/smooth_igw.hpp"
#include "verify.hpp"

using namespace smoothcb;

namespace {

constexpr int kConfigExit = 2;
constexpr int kRuntimeExit = 3;

int run_command(const std::string& path) {
  const ExperimentConfig config = load_experiment_config(path);
  const ExperimentResult result = run_experiment(config);
  std::cout << "config " << config.hash() << ", " << result.replicates.size() << " replicate(s)\n";
  for (const auto& s : result.replicates) {
    std::cout << "  seed " << s.seed << ": standard " << format_number(s.final_standard_regret);
    if (s.final_smooth_regret) std::cout << ", smooth " << format_number(*s.final_smooth_regret);
    std::cout << ", progressive " << format_number(s.final_progressive_loss) << " [" << format_number(s.ci_lo)
              << ", " << format_number(s.ci_hi) << "]\n";
  }
  std::cout << "wrote " << result.summary_csv.string() << '\n';
  return 0;
}

std::vector<double> random_predictions(std::size_t k, Rng& rng) {
  std::vector<double> f(k);
  for (double& v : f) v = uniform01(rng);
  return f;
}

IgwParams params_for(const std::vector<double>& f, double h, double gamma) {
  const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  return IgwParams{SmoothingCap(h), gamma, Arm{best}, f[best]};
}

void bench_sampling() {
  Rng rng = seeded_rng(1, "bench-sampling");
  constexpr std::size_t kDraws = 200000;
  std::printf("%4s %8s %8s %10s\n", "K", "h", "gamma", "tv");
  for (int i = 0; i < 10; ++i) {
    const std::size_t k = 2 + uniform_index(rng, 15);
    const double h = std::array{1.0 / static_cast<double>(k), 0.25, 1.0}[uniform_index(rng, 3)];
    const double gamma = std::array{1.0, 10.0, 100.0}[uniform_index(rng, 3)];
    TabularOracle oracle(k);
    const auto f = random_predictions(k, rng);
    for (std::size_t a = 0; a < k; ++a) oracle.update(WeightedExample{1e9, Context{}, Arm{a}, f[a]});
    const ActionSpace space = ActionSpace::finite(k);
    const IgwParams params = make_igw_params(oracle, Context{}, space, SmoothingCap(h), gamma);
    const auto exact = exact_finite_distribution(oracle, Context{}, space, params);
    std::vector<std::size_t> draws(kDraws);
    for (auto& d : draws) d = std::get<Arm>(rejection_sample(oracle, Context{}, space, params, rng)).index;
    std::printf("%4zu %8.4f %8.0f %10.6f\n", k, h, gamma,
                verify::total_variation(verify::empirical_law(draws, k), exact.probabilities));
  }
}

void bench_dec() {
  Rng rng = seeded_rng(1, "bench-dec");
  double worst = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + uniform_index(rng, 7);
    const double h = 0.05 + 0.95 * uniform01(rng);
    const double gamma = std::pow(10.0, 3.0 * uniform01(rng));
    const auto estimate = random_predictions(k, rng);
    const auto truth = random_predictions(k, rng);
    const auto play = exact_finite_distribution(estimate, params_for(estimate, h, gamma)).probabilities;
    const auto q = verify::random_capped_kernel(k, h, rng);
    worst = std::max(worst, verify::dec_objective(play, q, truth, estimate, gamma) - 2.0 / (h * gamma));
  }
  std::printf("max (objective - 2/(h gamma)) over 1000 instances: %.3e\n", worst);
}

void bench_regret() {
  std::printf("%8s %14s %14s\n", "T", "smooth_regret", "bound");
  const double h = 1.0 / 16.0;
  MultipleBestArmsSpec spec{256, 16, 0.0, {0.5}};
  for (std::uint64_t horizon = 1024; horizon <= 16384; horizon *= 2) {
    auto env = make_multiple_best_arms(spec, seeded_rng(horizon, "env"));
    const double regsq = std::log(static_cast<double>(spec.arms * horizon));
    SmoothIgwLearner learner(std::make_unique<TabularOracle>(spec.arms), env->space(), SmoothingCap(h),
                             gamma_for_horizon(horizon, SmoothingCap(h), regsq), seeded_rng(horizon, "policy"));
    auto logs = run(learner, *env, horizon,
                    [&](const Context& x, RoundLog& log) { log.benchmark = env->smooth_benchmark(x, SmoothingCap(h)); });
    const double regret = compute_regret_curve(logs, MetricKind::smooth_regret).final_value();
    std::printf("%8llu %14.2f %14.2f\n", static_cast<unsigned long long>(horizon), regret,
                std::sqrt(4.0 * static_cast<double>(horizon) * regsq / h));
  }
}

int report_command(const std::string& dir) {
  const DirectoryReport report = summarize_directory(dir);
  std::cout << "config " << report.config_hash << ", " << report.replicates.size() << " replicate(s)\n"
            << "mean standard regret  " << format_number(report.mean_standard_regret) << '\n';
  if (report.mean_smooth_regret) std::cout << "mean smooth regret    " << format_number(*report.mean_smooth_regret) << '\n';
  std::cout << "mean progressive loss " << format_number(report.mean_progressive_loss) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual bandits under smooth regret"};
  app.set_version_flag("--version", std::string(SMOOTHCB_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config_path, "Experiment config file")->required();

  std::string suite;
  auto* bench = app.add_subcommand("bench", "Print reference checks");
  bench->add_option("--suite", suite, "Which checks")->required()->check(CLI::IsMember({"sampling", "dec", "regret"}));

  std::string dir;
  auto* report = app.add_subcommand("report", "Summarize an output directory");
  report->add_option("--dir", dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) return run_command(config_path);
    if (*bench) {
      if (suite == "sampling") bench_sampling();
      else if (suite == "dec") bench_dec();
      else bench_regret();
      return 0;
    }
    return report_command(dir);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeExit;
  }
}
