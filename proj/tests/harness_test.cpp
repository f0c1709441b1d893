#include <cmath>
#include <sstream>

#include "doctest.h"
#include "smoothcb/harness.hpp"
#include "support.hpp"

using namespace smoothcb;

namespace {

RoundLog round(std::uint64_t t, double mean, double benchmark, double realized = 0.0) {
  RoundLog log;
  log.t = t;
  log.action = Arm{0};
  log.mean_loss = mean;
  log.benchmark = benchmark;
  log.realized_loss = realized;
  return log;
}

RegretCurve power_curve(double exponent, std::vector<std::uint64_t> ts) {
  RegretCurve curve;
  for (auto t : ts) curve.points.emplace_back(t, 3.0 * std::pow(static_cast<double>(t), exponent));
  return curve;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("regret curves") {
  const auto flat = compute_regret_curve({round(1, 0.3, 0.3), round(2, 0.6, 0.6)}, MetricKind::standard_regret);
  CHECK(flat.points[0].second == 0.0);
  CHECK(flat.points[1].second == 0.0);

  const auto sum = compute_regret_curve({round(1, 0.3, 0.2), round(2, 0.7, 0.5)}, MetricKind::smooth_regret);
  CHECK(sum.points[0].second == doctest::Approx(0.1));
  CHECK(sum.points[1].second == doctest::Approx(0.3));
  CHECK(sum.at(2) == doctest::Approx(0.3));
  CHECK_THROWS_AS(sum.at(3), std::out_of_range);

  const auto negative = compute_regret_curve({round(1, 0.1, 0.5)}, MetricKind::smooth_regret);
  CHECK(negative.final_value() < 0.0);

  const auto progressive =
      compute_regret_curve({round(1, 0, 0, 1.0), round(2, 0, 0, 0.0), round(3, 0, 0, 0.5)}, MetricKind::progressive_loss);
  CHECK(progressive.final_value() == doctest::Approx(0.5));

  RoundLog missing = round(1, 0.2, 0.1);
  missing.benchmark.reset();
  CHECK_THROWS_AS(compute_regret_curve({missing}, MetricKind::standard_regret), std::invalid_argument);
}

TEST_CASE("bootstrap intervals") {
  Rng rng = seeded_rng(1, "boot");
  const std::vector<double> constant(50, 0.42);
  const auto [clo, chi] = bootstrap_ci(constant, 0.95, 1000, rng);
  CHECK(clo == 0.42);
  CHECK(chi == 0.42);

  std::vector<double> coin(10000);
  for (std::size_t i = 0; i < coin.size(); ++i) coin[i] = i % 2;
  const auto [lo, hi] = bootstrap_ci(coin, 0.95, 2000, rng);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(std::abs((hi - lo) - 0.0196) <= 0.2 * 0.0196);
  const auto [nlo, nhi] = bootstrap_ci(coin, 0.38, 2000, rng);
  CHECK(nhi - nlo < hi - lo);

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> skewed(3 + uniform_index(rng, 20));
    for (double& v : skewed) v = std::pow(uniform01(rng), 8.0);
    const double mean = std::accumulate(skewed.begin(), skewed.end(), 0.0) / static_cast<double>(skewed.size());
    const auto [a, b] = bootstrap_ci(skewed, 0.2, 1000, rng);
    CHECK(a <= mean);
    CHECK(mean <= b);
  }
  CHECK_THROWS(bootstrap_ci(std::vector<double>{}, 0.95, 1000, rng));
  CHECK_THROWS(bootstrap_ci(coin, 1.0, 1000, rng));
  CHECK_THROWS(bootstrap_ci(coin, 0.95, 999, rng));
}

TEST_CASE("log-log slopes") {
  const std::vector<std::uint64_t> ts{8, 16, 32, 64, 128};
  CHECK(fit_loglog_slope(power_curve(1.0, ts), ts) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_loglog_slope(power_curve(0.5, ts), ts) == doctest::Approx(0.5).epsilon(1e-12));
  const std::vector<std::uint64_t> decades{1000, 10000, 100000};
  CHECK(std::abs(fit_loglog_slope(power_curve(2.0 / 3.0, decades), decades) - 2.0 / 3.0) <= 1e-6);
  CHECK_THROWS(fit_loglog_slope(power_curve(1.0, ts), std::vector<std::uint64_t>{8, 16}));
  RegretCurve zero;
  for (auto t : ts) zero.points.emplace_back(t, 0.0);
  CHECK_THROWS(fit_loglog_slope(zero, ts));
}

TEST_CASE("default checkpoints") {
  CHECK(default_checkpoints(1024) == std::vector<std::uint64_t>{16, 32, 64, 128, 256, 512, 1024});
  const auto odd = default_checkpoints(1000);
  CHECK(odd.front() == 16);
  CHECK(odd.back() == 1000);
}

TEST_CASE("tuning recipes") {
  CHECK(tune_h_holder(1.0, 1.0, 1000, 1.0).value() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(tune_h_holder(100.0, 1.0, 1000, 1.0).value() < tune_h_holder(1.0, 1.0, 1000, 1.0).value());
  CHECK(tune_h_holder(1e-6, 1.0, 10, 5.0).value() == 1.0);
  CHECK_THROWS(tune_h_holder(0.0, 1.0, 10, 1.0));
  CHECK(tune_eta_pareto(100, 0.0) == 1.0);
  CHECK(tune_eta_pareto(100, 1.0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(tune_eta_pareto(10000, 0.5) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK_THROWS(tune_eta_pareto(100, 1.5));
}

TEST_CASE("format_number round trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("experiment config errors are reported together") {
  std::istringstream in("learner = nope\nenvironment = holder\nsmoothing = 3\nmetric = smooth_regret\ntypo = 1\n");
  const auto kv = KeyValueConfig::parse(in);
  try {
    read_experiment_config(kv);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* needle : {"horizon", "learner", "smoothing", "typo", "output_dir"})
      CHECK_MESSAGE(msg.find(needle) != std::string::npos, needle);
  }

  std::istringstream mixed("horizon = 10\nlearner = smooth_igw\nenvironment = holder\noracle = tabular\n"
                           "output_dir = out\n");
  CHECK_THROWS_AS(read_experiment_config(KeyValueConfig::parse(mixed)), ConfigError);
  std::istringstream no_regsq("horizon = 10\nlearner = smooth_igw\nenvironment = holder\nsmoothing = 0.1\n"
                              "output_dir = out\n");
  CHECK_THROWS_AS(read_experiment_config(KeyValueConfig::parse(no_regsq)), ConfigError);
  std::istringstream missing_data("horizon = 10\nlearner = uniform_baseline\nenvironment = arm_dataset\n"
                                  "dataset = nowhere.csv\noutput_dir = out\n");
  CHECK_THROWS_AS(read_experiment_config(KeyValueConfig::parse(missing_data)), ConfigError);
}

TEST_CASE("experiment outputs") {
  testing::TempDir dir("exp");
  dir.write("exp.cfg",
            "horizon = 10\nseed = 4\nlearner = smooth_igw\nenvironment = multiple_best_arms\narms = 8\n"
            "optimal_arms = 2\nsuboptimal_mean = 0.5\nsmoothing = 0.25\nreplicates = 3\noutput_dir = out\n"
            "threads = 2\n");
  const auto config = load_experiment_config(dir.path() / "exp.cfg");
  CHECK(config.output_dir == dir.path() / "out");
  CHECK(config.hash().size() == 16);
  const auto result = run_experiment(config);
  REQUIRE(result.round_csvs.size() == 3);

  for (std::size_t r = 0; r < 3; ++r) {
    const auto rows = read_csv(result.round_csvs[r]);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0].size() == 8);
    std::ostringstream header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) header << (i ? "," : "") << rows[0][i];
    CHECK(header.str() == kRoundCsvHeader);
    CHECK(rows[1][1].empty());

    const auto realized = read_csv(dir.path() / "out" / ("rounds_seed" + std::to_string(4 + r) + "_realized.csv"));
    REQUIRE(realized.size() == 11);
    double sum = 0.0;
    for (std::size_t i = 1; i < realized.size(); ++i) sum += std::stod(realized[i][1]);
    const auto& s = result.replicates[r];
    CHECK(s.seed == 4 + r);
    CHECK(std::abs(sum / 10.0 - s.final_progressive_loss) <= 1e-12);
    CHECK(std::stod(rows.back()[7]) == s.final_standard_regret);
    CHECK(std::stod(rows.back()[6]) == *s.final_smooth_regret);
  }

  const auto report = summarize_directory(dir.path() / "out");
  CHECK(report.config_hash == config.hash());
  CHECK(report.replicates.size() == 3);
  double mean = 0.0;
  for (const auto& s : result.replicates) mean += s.final_standard_regret / 3.0;
  CHECK(report.mean_standard_regret == doctest::Approx(mean).epsilon(1e-12));

  // Byte-identical on re-run, manifest aside.
  std::vector<std::string> before;
  for (const auto& p : result.round_csvs) before.push_back(testing::slurp(p));
  const std::string summary_before = testing::slurp(result.summary_csv);
  const auto again = run_experiment(config);
  for (std::size_t r = 0; r < 3; ++r) CHECK(testing::slurp(again.round_csvs[r]) == before[r]);
  CHECK(testing::slurp(again.summary_csv) == summary_before);
  CHECK(std::filesystem::exists(again.manifest));
}

TEST_CASE("uniform baseline on a constant environment") {
  testing::TempDir dir("const");
  std::istringstream in("horizon = 4000\nlearner = uniform_baseline\nenvironment = constant\nconstant_loss = 0.3\n"
                        "constant_arms = 5\noutput_dir = " + (dir.path() / "o").string() + "\n");
  const auto config = read_experiment_config(KeyValueConfig::parse(in));
  const auto rep = run_replicate(config, 1);
  CHECK(std::abs(rep.summary.final_progressive_loss - 0.3) < 0.03);
  CHECK(rep.summary.ci_lo <= rep.summary.final_progressive_loss);
  CHECK(rep.summary.final_progressive_loss <= rep.summary.ci_hi);
}

TEST_CASE("every learner and oracle combination runs") {
  testing::TempDir dir("combos");
  dir.write("arms.csv", "arm_id,rating\na,0.9\nb,0.1\nc,0.5\n");
  dir.write("reg.csv", "x1,x2,target\n0.1,1,0.3\n0.5,2,0.9\n0.9,0.5,0.2\n0.3,0.3,0.5\n");
  const std::vector<std::string> configs{
      "learner = smooth_igw\nenvironment = multiple_best_arms\noracle = aggregation\nsmoothing = 0.5\n",
      "learner = corral\nenvironment = multiple_best_arms\n",
      "learner = corral\nenvironment = arm_dataset\ndataset = arms.csv\ncorral_grid = gamma_h\ngamma_h_count = 3\n",
      "learner = epsilon_greedy_baseline\nenvironment = constant\n",
      "learner = smooth_igw\nenvironment = holder\nsmoothing = 0.1\nregsq_estimate = 2\n",
      "learner = smooth_igw\nenvironment = holder\noracle = aggregation\nsmoothing = 0.1\nmetric = smooth_regret\n",
      "learner = corral\nenvironment = holder\nregsq_estimate = 2\n",
      "learner = smooth_igw\nenvironment = regression_dataset\ndataset = reg.csv\nsmoothing = 0.2\n"
      "regsq_estimate = 1\nmetric = progressive_loss\n",
      "learner = smooth_igw\nenvironment = regression_dataset\ndataset = reg.csv\noracle = parametric_rff\n"
      "rff_features = 8\nsmoothing = 0.2\nregsq_estimate = 1\n",
  };
  for (std::size_t i = 0; i < configs.size(); ++i) {
    CAPTURE(configs[i]);
    const auto path = dir.write("c" + std::to_string(i) + ".cfg",
                                configs[i] + "horizon = 50\noutput_dir = out" + std::to_string(i) + "\n");
    const auto result = run_experiment(load_experiment_config(path));
    CHECK(result.replicates.size() == 1);
  }
}

TEST_CASE("shipped configs load") {
  const std::filesystem::path dir = SMOOTHCB_CONFIG_DIR;
  CHECK_NOTHROW(load_experiment_config(dir / "multiple_best_arms.cfg"));
  CHECK_NOTHROW(load_experiment_config(dir / "holder.cfg"));
  for (const char* name : {"caption_contest.cfg", "regression_dataset.cfg"}) {
    try {
      load_experiment_config(dir / name);
      FAIL("dataset should be missing");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("does not exist") != std::string::npos);
    }
  }
}

TEST_CASE("thread count does not change outputs") {
  testing::TempDir dir("threads");
  const std::string base =
      "horizon = 200\nseed = 9\nlearner = corral\nenvironment = multiple_best_arms\narms = 8\nreplicates = 3\n";
  dir.write("one.cfg", base + "threads = 1\noutput_dir = one\n");
  dir.write("many.cfg", base + "threads = 3\noutput_dir = many\n");
  const auto one = run_experiment(load_experiment_config(dir.path() / "one.cfg"));
  const auto many = run_experiment(load_experiment_config(dir.path() / "many.cfg"));
  REQUIRE(one.round_csvs.size() == many.round_csvs.size());
  for (std::size_t r = 0; r < one.round_csvs.size(); ++r)
    CHECK(testing::slurp(one.round_csvs[r]) == testing::slurp(many.round_csvs[r]));
}
