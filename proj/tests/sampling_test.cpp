#include <cmath>
#include <numeric>

#include "doctest.h"
#include "smoothcb/environments.hpp"
#include "smoothcb/sampling.hpp"
#include "support.hpp"
#include "verify.hpp"

using namespace smoothcb;
using testing::FixedOracle;

namespace {

const Context kEmpty{};

IgwParams params_for(const FixedOracle& oracle, std::size_t k, double h, double gamma) {
  return make_igw_params(oracle, kEmpty, ActionSpace::finite(k), SmoothingCap(h), gamma);
}

std::vector<double> exact(const std::vector<double>& f, double h, double gamma) {
  FixedOracle oracle(f);
  return exact_finite_distribution(oracle, kEmpty, ActionSpace::finite(f.size()), params_for(oracle, f.size(), h, gamma))
      .probabilities;
}

}  // namespace

TEST_CASE("density values") {
  FixedOracle oracle({0.0, 1.0});
  const auto params = params_for(oracle, 2, 0.5, 4.0);
  CHECK(igw_density(params, 0.0) == 1.0);
  CHECK(igw_density(params, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  const auto steep = params_for(oracle, 2, 1.0, 100.0);
  CHECK(igw_density(steep, 1.0) == doctest::Approx(1.0 / 101.0).epsilon(1e-15));
  CHECK(igw_density(steep, -1e-13) == 1.0);
  CHECK_THROWS_AS(igw_density(steep, -1e-6), std::logic_error);
  CHECK_THROWS_AS(params_for(oracle, 2, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("density is in (0, 1] and shrinks with gamma") {
  FixedOracle oracle({0.0});
  double previous = 1.0;
  for (double gamma : {0.1, 1.0, 10.0, 1e3, 1e6}) {
    const IgwParams params{SmoothingCap(0.3), gamma, Arm{0}, 0.0};
    const double m = igw_density(params, 0.4);
    CHECK(m > 0.0);
    CHECK(m <= previous);
    previous = m;
  }
}

TEST_CASE("exact finite laws") {
  const auto two = exact({0.0, 1.0}, 1.0, 1.0);
  CHECK(two[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(0.25).epsilon(1e-15));

  const auto three = exact({0.0, 0.5, 1.0}, 1.0, 2.0);
  CHECK(three[0] == doctest::Approx(13.0 / 18).epsilon(1e-14));
  CHECK(three[1] == doctest::Approx(3.0 / 18).epsilon(1e-14));
  CHECK(three[2] == doctest::Approx(2.0 / 18).epsilon(1e-14));

  for (double p : exact({0.4, 0.4, 0.4, 0.4, 0.4}, 0.2, 50.0)) CHECK(p == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("submeasure totals") {
  FixedOracle flat({0.3, 0.3, 0.3});
  CHECK(submeasure_total(flat, kEmpty, ActionSpace::finite(3), params_for(flat, 3, 0.5, 10.0)) == 1.0);
  FixedOracle two({0.0, 1.0});
  CHECK(submeasure_total(two, kEmpty, ActionSpace::finite(2), params_for(two, 2, 1.0, 1.0)) == doctest::Approx(0.75));
  FixedOracle spread({0.0, 0.2, 0.6, 1.0});
  CHECK(submeasure_total(spread, kEmpty, ActionSpace::finite(4), params_for(spread, 4, 1.0, 1e12)) ==
        doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("exact laws are probability vectors with greedy mass at least 1/K") {
  Rng rng = seeded_rng(4, "laws");
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + uniform_index(rng, 16);
    std::vector<double> f(k);
    for (double& v : f) v = uniform01(rng);
    const double h = 0.01 + 0.99 * uniform01(rng);
    const double gamma = std::pow(10.0, 4.0 * uniform01(rng) - 1.0);
    FixedOracle oracle(f);
    const auto params = params_for(oracle, k, h, gamma);
    const auto p = exact_finite_distribution(oracle, kEmpty, ActionSpace::finite(k), params).probabilities;
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : p) CHECK(v >= 0.0);
    const std::size_t greedy = std::get<Arm>(params.greedy_action).index;
    CHECK(igw_density(params, f[greedy]) == 1.0);
    CHECK(p[greedy] >= 1.0 / static_cast<double>(k) - 1e-15);
  }
}

TEST_CASE("rejection sampler matches the exact law") {
  FixedOracle oracle({0.0, 1.0});
  const auto space = ActionSpace::finite(2);
  const auto params = params_for(oracle, 2, 1.0, 1.0);
  Rng rng = seeded_rng(17, "rs");
  std::size_t greedy = 0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i)
    greedy += std::get<Arm>(rejection_sample(oracle, kEmpty, space, params, rng)).index == 0;
  CHECK(std::abs(static_cast<double>(greedy) / kDraws - 0.75) <= 0.003);
}

TEST_CASE("flat estimates sample the base measure") {
  FixedOracle oracle({0.2, 0.2, 0.2, 0.2});
  const auto space = ActionSpace::finite(4);
  Rng rng = seeded_rng(2, "flat");
  for (double gamma : {1e-9, 1e9}) {
    const auto params = params_for(oracle, 4, 0.5, gamma);
    std::vector<std::size_t> draws(200000);
    for (auto& d : draws) d = std::get<Arm>(rejection_sample(oracle, kEmpty, space, params, rng)).index;
    CHECK(verify::total_variation(verify::empirical_law(draws, 4), {0.25, 0.25, 0.25, 0.25}) < 0.005);
  }
}

TEST_CASE("interval sampling concentrates near the greedy point") {
  ParametricOracle oracle(1);
  ParametricParams p;
  p.v = {0.0};
  p.w = 5.0;
  oracle.set_params(p);
  const Context x{{1.0}, std::nullopt};
  const auto space = ActionSpace::unit_interval();
  const auto params = make_igw_params(oracle, x, space, SmoothingCap(0.1), 1000.0);
  CHECK(std::get<Point>(params.greedy_action).value == 0.5);
  Rng rng = seeded_rng(3, "interval");
  int near = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = std::get<Point>(rejection_sample(oracle, x, space, params, rng)).value;
    CHECK((a >= 0.0 && a <= 1.0));
    near += std::abs(a - 0.5) < 0.1;
  }
  CHECK(near > 9000);
}

TEST_CASE("decision-estimation certificate on random instances") {
  Rng rng = seeded_rng(23, "dec");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + uniform_index(rng, 8);
    const double h = 0.05 + 0.95 * uniform01(rng);
    const double gamma = std::pow(10.0, 3.0 * uniform01(rng));
    std::vector<double> estimate(k), truth(k);
    for (double& v : estimate) v = uniform01(rng);
    for (double& v : truth) v = uniform01(rng);
    const auto play = exact(estimate, h, gamma);
    const auto q = verify::random_capped_kernel(k, h, rng);
    CHECK(verify::dec_objective(play, q, truth, estimate, gamma) <= 2.0 / (h * gamma) + 1e-9);
  }
}

TEST_CASE("a perfect oracle pays at most 2/(h gamma) against the smoothed benchmark") {
  Rng rng = seeded_rng(29, "perfect");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + uniform_index(rng, 12);
    const double h = 0.05 + 0.95 * uniform01(rng);
    const double gamma = std::pow(10.0, 3.0 * uniform01(rng));
    std::vector<double> f(k);
    for (double& v : f) v = uniform01(rng);
    const auto play = exact(f, h, gamma);
    const double expected = std::inner_product(play.begin(), play.end(), f.begin(), 0.0);
    CHECK(expected - smooth_benchmark_finite(f, SmoothingCap(h)) <= 2.0 / (h * gamma) + 1e-12);
  }
}
