#include <cmath>

#include "doctest.h"
#include "smoothcb/regression_oracles.hpp"
#include "support.hpp"

using namespace smoothcb;

namespace {

const Context kEmpty{};

void feed(RegressionOracle& oracle, std::size_t arm, double loss, double weight = 1.0) {
  oracle.update(WeightedExample{weight, kEmpty, Arm{arm}, loss});
}

// Square-loss of the substitution prediction computed straight from the
// definition, without the library's log-sum-exp bookkeeping.
double direct_substitution(const std::vector<double>& weights, const std::vector<double>& preds, double eta) {
  auto g = [&](double y) {
    double s = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) s += weights[i] * std::exp(-eta * (preds[i] - y) * (preds[i] - y));
    return -std::log(s) / eta;
  };
  return 0.5 - (g(1.0) - g(0.0)) / 2.0;
}

}  // namespace

TEST_CASE("tabular prior and running mean") {
  TabularOracle oracle(8);
  CHECK(oracle.predict(kEmpty, Arm{3}) == 0.5);
  feed(oracle, 1, 0.0);
  feed(oracle, 1, 1.0);
  feed(oracle, 1, 1.0);
  CHECK(oracle.predict(kEmpty, Arm{1}) == doctest::Approx(0.625).epsilon(1e-15));

  feed(oracle, 5, 0.25, 2.0);
  CHECK(oracle.loss_sum(5) == 0.5);
  CHECK(oracle.weight_sum(5) == 2.0);
}

TEST_CASE("tabular without prior is the plain empirical mean") {
  TabularOracle oracle(2, 0.5, 0.0);
  Rng rng = seeded_rng(5, "tab");
  double sum = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double loss = uniform01(rng);
    sum += loss;
    feed(oracle, 0, loss);
    CHECK(oracle.predict(kEmpty, Arm{0}) == sum / i);
  }
  CHECK(oracle.predict(kEmpty, Arm{1}) == 0.5);
}

TEST_CASE("argmin scans with first-wins ties") {
  testing::FixedOracle oracle({0.3, 0.1, 0.5, 0.1});
  CHECK(std::get<Arm>(oracle.argmin_action(kEmpty, ActionSpace::finite(4))).index == 1);
  TabularOracle tab(4);
  feed(tab, 2, 0.0);
  feed(tab, 3, 0.0);
  CHECK(std::get<Arm>(tab.argmin_action(kEmpty, ActionSpace::finite(4))).index == 2);
}

TEST_CASE("update rejects bad input and ignores zero weight") {
  TabularOracle oracle(3);
  CHECK_THROWS_AS(feed(oracle, 0, 1.5), LossRangeError);
  CHECK_THROWS_AS(feed(oracle, 0, -0.01), LossRangeError);
  CHECK_THROWS_AS(feed(oracle, 0, 0.5, -1.0), std::invalid_argument);
  const std::string before = oracle.save_state();
  feed(oracle, 0, 0.9, 0.0);
  CHECK(oracle.save_state() == before);
}

TEST_CASE("predict is pure") {
  AggregationOracle agg({[](const Context&, const Action&) { return 0.2; },
                         [](const Context&, const Action&) { return 0.9; }});
  agg.update(WeightedExample{1.0, kEmpty, Arm{0}, 0.3});
  const double p = agg.predict(kEmpty, Arm{0});
  for (int i = 0; i < 100; ++i) CHECK(agg.predict(kEmpty, Arm{0}) == p);
}

TEST_CASE("aggregation substitution values") {
  auto constant = [](double v) { return [v](const Context&, const Action&) { return v; }; };
  AggregationOracle unanimous({constant(0.7), constant(0.7), constant(0.7)});
  CHECK(unanimous.mixture_predict(kEmpty, Arm{0}) == doctest::Approx(0.7).epsilon(1e-12));

  AggregationOracle split({constant(0.0), constant(1.0)});
  CHECK(split.mixture_predict(kEmpty, Arm{0}) == doctest::Approx(0.5).epsilon(1e-12));

  // Weights (0.9, 0.1): log-weight gap ln 9 reached by a weighted update of
  // the 0.8-expert.
  AggregationOracle skewed({constant(0.2), constant(0.8)});
  // Observing loss y shifts the gap by 2 w ((0.8-y)^2 - (0.2-y)^2) = 2w(0.6 - 1.2y).
  // y = 0: 1.2 w = ln 9.
  skewed.update(WeightedExample{std::log(9.0) / 1.2, kEmpty, Arm{0}, 0.0});
  const double w0 = std::exp(skewed.log_weights()[0]);
  CHECK(w0 == doctest::Approx(0.9).epsilon(1e-12));
  const double p = skewed.mixture_predict(kEmpty, Arm{0});
  CHECK(p == doctest::Approx(direct_substitution({0.9, 0.1}, {0.2, 0.8}, 2.0)).epsilon(1e-12));
  CHECK(p > 0.2);
  CHECK(p < 0.8);
}

TEST_CASE("aggregation update shifts log-weights") {
  auto constant = [](double v) { return [v](const Context&, const Action&) { return v; }; };
  AggregationOracle oracle({constant(0.0), constant(1.0)});
  const double gap0 = oracle.log_weights()[0] - oracle.log_weights()[1];
  oracle.update(WeightedExample{1.0, kEmpty, Arm{0}, 0.0});
  const double gap1 = oracle.log_weights()[0] - oracle.log_weights()[1];
  CHECK(gap1 - gap0 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("aggregation regret to the best expert is at most ln|F| / 2") {
  Rng rng = seeded_rng(11, "agg");
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 63);
    std::vector<double> values(n * 8);
    for (double& v : values) v = uniform01(rng);
    std::vector<AggregationOracle::Expert> experts;
    for (std::size_t i = 0; i < n; ++i)
      experts.push_back([&values, i](const Context&, const Action& a) { return values[i * 8 + std::get<Arm>(a).index]; });
    AggregationOracle oracle(experts);
    std::vector<double> expert_loss(n, 0.0);
    double learner_loss = 0.0;
    for (int t = 0; t < 2000; ++t) {
      const Action a = Arm{uniform_index(rng, 8)};
      const double y = trial % 2 ? (bernoulli(rng, 0.3) ? 1.0 : 0.0) : uniform01(rng);
      const double p = oracle.predict(kEmpty, a);
      learner_loss += (p - y) * (p - y);
      for (std::size_t i = 0; i < n; ++i) {
        const double e = values[i * 8 + std::get<Arm>(a).index] - y;
        expert_loss[i] += e * e;
      }
      oracle.update(WeightedExample{1.0, kEmpty, a, y});
    }
    const double best = *std::min_element(expert_loss.begin(), expert_loss.end());
    CHECK(learner_loss - best <= 0.5 * std::log(static_cast<double>(n)) + 1e-9);
  }
}

TEST_CASE("parametric defaults and closed-form minimizer") {
  ParametricOracle oracle(2);
  ParametricParams zero;
  zero.v = {0.0, 0.0};
  zero.w = 0.0;
  oracle.set_params(zero);
  const Context x{{0.3, -1.2}, std::nullopt};
  CHECK(oracle.predict(x, Point{0.1}) == 0.5);
  CHECK(oracle.predict(x, Point{0.9}) == 0.5);
  CHECK(std::get<Point>(oracle.argmin_action(x, ActionSpace::unit_interval())).value == 0.5);

  ParametricParams p;
  p.v = {2.0, 0.0};
  oracle.set_params(p);
  const Context y{{1.0, 5.0}, std::nullopt};
  CHECK(std::get<Point>(oracle.argmin_action(y, ActionSpace::unit_interval())).value ==
        doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(sigmoid(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-15));
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(sigmoid(800.0) == 1.0);
}

TEST_CASE("parametric gradient edge cases") {
  ParametricOracle oracle(3);
  ParametricParams p;
  p.v = {0.4, -0.3, 0.2};
  p.w = 1.5;
  p.xi = -0.4;
  oracle.set_params(p);
  const Context x{{0.5, 1.0, -2.0}, std::nullopt};
  const auto zero_weight = oracle.gradient(WeightedExample{0.0, x, Point{0.3}, 0.7});
  CHECK(zero_weight.w == 0.0);
  CHECK(zero_weight.xi == 0.0);
  for (double g : zero_weight.v) CHECK(g == 0.0);

  const double exact = oracle.predict(x, Point{0.3});
  const auto fitted = oracle.gradient(WeightedExample{1.0, x, Point{0.3}, exact});
  CHECK(fitted.w == 0.0);
  CHECK(fitted.xi == 0.0);
  for (double g : fitted.v) CHECK(g == 0.0);
}

TEST_CASE("parametric gradient matches central differences") {
  Rng rng = seeded_rng(9, "grad");
  std::normal_distribution<double> normal;
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + uniform_index(rng, 5);
    ParametricParams p;
    p.v.resize(d);
    for (double& v : p.v) v = normal(rng);
    p.w = (bernoulli(rng, 0.5) ? 1.0 : -1.0) * (0.2 + 2.0 * uniform01(rng));
    p.xi = normal(rng);
    Context x{std::vector<double>(d), std::nullopt};
    for (double& f : x.features) f = normal(rng);
    const double a = uniform01(rng);
    const double loss = uniform01(rng);
    const double weight = 0.1 + 3.0 * uniform01(rng);
    ParametricOracle oracle(d);
    oracle.set_params(p);
    const double z = sigmoid(std::inner_product(p.v.begin(), p.v.end(), x.features.begin(), 0.0)) - a;
    if (std::abs(z) < 1e-3) continue;  // stay off the |z| kink
    const auto g = oracle.gradient(WeightedExample{weight, x, Point{a}, loss});

    auto objective = [&](const ParametricParams& q) {
      oracle.set_params(q);
      const double r = oracle.predict(x, Point{a}) - loss;
      return weight * r * r;
    };
    const double eps = 1e-5;
    auto central = [&](auto&& perturb) {
      ParametricParams plus = p, minus = p;
      perturb(plus, eps);
      perturb(minus, -eps);
      return (objective(plus) - objective(minus)) / (2 * eps);
    };
    auto close = [](double analytic, double numeric) {
      return std::abs(analytic - numeric) <= 1e-4 * std::max(std::abs(numeric), 1e-6) + 1e-10;
    };
    CHECK(close(g.w, central([](ParametricParams& q, double e) { q.w += e; })));
    CHECK(close(g.xi, central([](ParametricParams& q, double e) { q.xi += e; })));
    for (std::size_t i = 0; i < d; ++i)
      CHECK(close(g.v[i], central([i](ParametricParams& q, double e) { q.v[i] += e; })));
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("parametric updates reduce loss on a fixed target") {
  ParametricOracle oracle(2, ParametricOptions{0.5, false, 1.0, 0.0});
  const Context x{{0.7, 1.0}, std::nullopt};
  const double before = std::pow(oracle.predict(x, Point{0.9}) - 0.1, 2);
  for (int i = 0; i < 200; ++i) oracle.update(WeightedExample{1.0, x, Point{0.9}, 0.1});
  CHECK(std::pow(oracle.predict(x, Point{0.9}) - 0.1, 2) < before);
  CHECK(oracle.update_count() == 200);
  CHECK_THROWS(oracle.update(WeightedExample{1.0, x, Arm{0}, 0.1}));
}

TEST_CASE("state round trips and kind checks") {
  TabularOracle tab(4);
  feed(tab, 2, 0.3, 2.0);
  TabularOracle tab2(4);
  tab2.load_state(tab.save_state());
  CHECK(tab2.predict(kEmpty, Arm{2}) == tab.predict(kEmpty, Arm{2}));
  CHECK_THROWS_AS(TabularOracle(5).load_state(tab.save_state()), std::invalid_argument);

  ParametricOracle par(3);
  const Context x{{1.0, 2.0, 3.0}, std::nullopt};
  par.update(WeightedExample{1.0, x, Point{0.2}, 0.8});
  ParametricOracle par2(3);
  par2.load_state(par.save_state());
  CHECK(par2.predict(x, Point{0.4}) == par.predict(x, Point{0.4}));
  CHECK(par2.update_count() == 1);
  CHECK_THROWS_AS(par2.load_state(tab.save_state()), std::invalid_argument);
  CHECK_THROWS_AS(par2.load_state("garbage"), std::invalid_argument);

  auto constant = [](double v) { return [v](const Context&, const Action&) { return v; }; };
  AggregationOracle agg({constant(0.1), constant(0.6)});
  agg.update(WeightedExample{1.0, kEmpty, Arm{0}, 0.0});
  auto copy = agg.clone();
  CHECK(copy->predict(kEmpty, Arm{0}) == agg.predict(kEmpty, Arm{0}));
  AggregationOracle agg2({constant(0.1), constant(0.6)});
  agg2.load_state(agg.save_state());
  CHECK(agg2.log_weights() == agg.log_weights());
}
