#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smoothcb::verify {

double kernel_cap(std::size_t arms, double h) {
  return std::min(1.0, 1.0 / (h * static_cast<double>(arms)));
}

double capped_simplex_lp(const std::vector<double>& means, double h) {
  const std::size_t k = means.size();
  if (k == 0 || k > 20) throw std::invalid_argument("capped_simplex_lp: need 1..20 arms");
  const double cap = kernel_cap(k, h);
  double best = std::numeric_limits<double>::infinity();
  // A vertex has every coordinate at 0 or cap except at most one.
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    double mass = 0.0;
    double value = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) {
        mass += cap;
        value += cap * means[i];
      }
    const double rest = 1.0 - mass;
    if (std::abs(rest) <= 1e-12) {
      best = std::min(best, value);
      continue;
    }
    if (rest < 0.0 || rest > cap + 1e-12) continue;
    for (std::size_t i = 0; i < k; ++i)
      if (!(mask >> i & 1u)) best = std::min(best, value + rest * means[i]);
  }
  return best;
}

std::vector<double> random_capped_kernel(std::size_t arms, double h, Rng& rng) {
  const double cap = kernel_cap(arms, h);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  const std::size_t pieces = 1 + uniform_index(rng, 4);
  std::vector<double> kernel(arms, 0.0);
  std::vector<double> weights(pieces);
  for (double& w : weights) w = gamma(rng);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> order(arms);
  for (std::size_t p = 0; p < pieces; ++p) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    double left = 1.0;
    for (std::size_t i : order) {
      const double take = std::min(cap, left);
      kernel[i] += weights[p] / total * take;
      left -= take;
      if (left <= 0.0) break;
    }
  }
  return kernel;
}

double dec_objective(const std::vector<double>& play, const std::vector<double>& comparator,
                     const std::vector<double>& truth, const std::vector<double>& estimate, double gamma) {
  double value = 0.0;
  for (std::size_t a = 0; a < play.size(); ++a) {
    const double err = estimate[a] - truth[a];
    value += play[a] * (truth[a] - gamma / 4.0 * err * err);
    value -= comparator[a] * truth[a];
  }
  return value;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return sum / 2.0;
}

std::vector<double> empirical_law(const std::vector<std::size_t>& draws, std::size_t arms) {
  std::vector<double> law(arms, 0.0);
  for (std::size_t d : draws) law.at(d) += 1.0;
  for (double& v : law) v /= static_cast<double>(draws.size());
  return law;
}

}  // namespace smoothcb::verify
