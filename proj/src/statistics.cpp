#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smoothcb/harness.hpp"

namespace smoothcb {

double RegretCurve::at(std::uint64_t t) const {
  const auto it = std::lower_bound(points.begin(), points.end(), t,
                                   [](const auto& p, std::uint64_t value) { return p.first < value; });
  if (it == points.end() || it->first != t) throw std::out_of_range("regret curve has no point at t=" + std::to_string(t));
  return it->second;
}

RegretCurve compute_regret_curve(const std::vector<RoundLog>& logs, MetricKind metric) {
  RegretCurve curve;
  curve.points.reserve(logs.size());
  double running = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const RoundLog& log = logs[i];
    if (metric == MetricKind::progressive_loss) {
      running += log.realized_loss;
      curve.points.emplace_back(log.t, running / static_cast<double>(i + 1));
      continue;
    }
    if (!log.mean_loss) throw std::invalid_argument("regret curve: round " + std::to_string(log.t) + " has no mean loss");
    if (!log.benchmark) throw std::invalid_argument("regret curve: round " + std::to_string(log.t) + " has no benchmark");
    running += *log.mean_loss - *log.benchmark;
    curve.points.emplace_back(log.t, running);
  }
  return curve;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sample_mean: empty sample");
  const double pivot = values.front();
  double shifted = 0.0;
  for (double v : values) shifted += v - pivot;
  return pivot + shifted / static_cast<double>(values.size());
}

std::pair<double, double> bootstrap_ci(std::span<const double> values, double level, std::size_t resamples,
                                       Rng& rng) {
  if (values.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap_ci: level must lie in (0, 1)");
  if (resamples < 1000) throw std::invalid_argument("bootstrap_ci: need at least 1000 resamples");
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
    return {values.front(), values.front()};

  const std::size_t n = values.size();
  const double mean = sample_mean(values);
  std::vector<double> means(resamples);
  for (double& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[uniform_index(rng, n)];
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  // The percentile band can miss the sample mean on very skewed data; widen
  // it so the point estimate always lies inside.
  return {std::min(quantile_sorted(means, tail), mean), std::max(quantile_sorted(means, 1.0 - tail), mean)};
}

double fit_loglog_slope(const RegretCurve& curve, std::span<const std::uint64_t> checkpoints) {
  if (checkpoints.size() < 3) throw std::invalid_argument("fit_loglog_slope: need at least 3 checkpoints");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint64_t t : checkpoints) {
    const double value = curve.at(t);
    if (!(value > 0.0))
      throw std::invalid_argument("fit_loglog_slope: nonpositive cumulative value at t=" + std::to_string(t));
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(value));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: checkpoints must be distinct");
  return sxy / sxx;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  std::vector<std::uint64_t> points;
  const std::uint64_t start = std::max<std::uint64_t>(1, horizon / 64);
  std::uint64_t p = 1;
  while (p < start) p <<= 1;
  for (; p <= horizon; p <<= 1) points.push_back(p);
  if (points.empty() || points.back() != horizon) points.push_back(horizon);
  return points;
}

SmoothingCap tune_h_holder(double lipschitz, double exponent, std::uint64_t horizon, double regsq) {
  if (!(lipschitz > 0.0) || !(exponent > 0.0) || horizon == 0 || !(regsq > 0.0))
    throw std::invalid_argument("tune_h_holder: arguments must be positive");
  const double p = 1.0 / (2.0 * exponent + 1.0);
  const double h = std::pow(lipschitz, -2.0 * p) * std::pow(static_cast<double>(horizon), -p) * std::pow(regsq, p);
  return SmoothingCap(std::min(1.0, h));
}

double tune_eta_pareto(std::uint64_t horizon, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("tune_eta_pareto: beta must lie in [0, 1]");
  if (horizon == 0) throw std::invalid_argument("tune_eta_pareto: horizon must be >= 1");
  return std::pow(static_cast<double>(horizon), -beta);
}

}  // namespace smoothcb
