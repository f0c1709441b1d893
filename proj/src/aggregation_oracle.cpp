#include <algorithm>
#include <cmath>
#include <limits>

#include "binary_io.hpp"
#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

namespace {

double log_sum_exp(const std::vector<double>& values) {
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

}  // namespace

AggregationOracle::AggregationOracle(std::vector<Expert> experts, double learning_rate)
    : experts_(std::move(experts)), rate_(learning_rate) {
  if (experts_.empty()) throw std::invalid_argument("AggregationOracle: needs at least one expert");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("AggregationOracle: learning rate must be > 0");
  log_weights_.assign(experts_.size(), -std::log(static_cast<double>(experts_.size())));
}

double AggregationOracle::predict(const Context& context, const Action& action) const {
  return mixture_predict(context, action);
}

double AggregationOracle::mixture_predict(const Context& context, const Action& action) const {
  std::vector<double> at_zero(experts_.size());
  std::vector<double> at_one(experts_.size());
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    const double p = experts_[i](context, action);
    at_zero[i] = log_weights_[i] - rate_ * p * p;
    at_one[i] = log_weights_[i] - rate_ * (p - 1.0) * (p - 1.0);
  }
  const double g0 = -log_sum_exp(at_zero) / rate_;
  const double g1 = -log_sum_exp(at_one) / rate_;
  return std::clamp(0.5 - (g1 - g0) / 2.0, 0.0, 1.0);
}

void AggregationOracle::apply_update(const WeightedExample& example) {
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    const double residual = experts_[i](example.context, example.action) - example.loss;
    log_weights_[i] -= rate_ * example.weight * residual * residual;
  }
  const double norm = log_sum_exp(log_weights_);
  for (double& lw : log_weights_) lw -= norm;
}

std::string AggregationOracle::save_state() const {
  detail::BlobWriter out(detail::OracleKind::aggregation);
  out.f64(rate_);
  out.doubles(log_weights_);
  return std::move(out).finish();
}

void AggregationOracle::load_state(std::string_view blob) {
  detail::BlobReader in(blob, detail::OracleKind::aggregation);
  const double rate = in.f64();
  auto log_weights = in.doubles();
  in.expect_end();
  if (log_weights.size() != experts_.size())
    throw std::invalid_argument("AggregationOracle: checkpoint has a different expert count");
  rate_ = rate;
  log_weights_ = std::move(log_weights);
}

std::unique_ptr<RegressionOracle> AggregationOracle::clone() const {
  return std::make_unique<AggregationOracle>(*this);
}

}  // namespace smoothcb
