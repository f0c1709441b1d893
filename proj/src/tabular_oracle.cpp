#include <algorithm>

#include "binary_io.hpp"
#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

TabularOracle::TabularOracle(std::size_t arms, double prior_loss, double prior_count)
    : prior_loss_(prior_loss), prior_count_(prior_count), sums_(arms, 0.0), counts_(arms, 0.0) {
  if (arms == 0) throw std::invalid_argument("TabularOracle: needs at least one arm");
  require_unit_loss(prior_loss, "TabularOracle prior");
  if (!(prior_count >= 0.0)) throw std::invalid_argument("TabularOracle: negative prior count");
}

double TabularOracle::estimate(std::size_t arm) const {
  const double denom = counts_[arm] + prior_count_;
  if (denom <= 0.0) return prior_loss_;
  const double value = (sums_[arm] + prior_loss_ * prior_count_) / denom;
  return std::clamp(value, 0.0, 1.0);
}

double TabularOracle::predict(const Context&, const Action& action) const {
  const auto* arm = std::get_if<Arm>(&action);
  if (!arm || arm->index >= sums_.size())
    throw std::invalid_argument("TabularOracle: action " + to_string(action) + " is not one of its arms");
  return estimate(arm->index);
}

Action TabularOracle::argmin_action(const Context&, const ActionSpace& space) const {
  if (!space.is_finite() || space.size() != sums_.size())
    throw std::invalid_argument("TabularOracle: action space does not match its arm count");
  std::size_t best = 0;
  double best_value = estimate(0);
  for (std::size_t i = 1; i < sums_.size(); ++i) {
    const double value = estimate(i);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  return Arm{best};
}

void TabularOracle::apply_update(const WeightedExample& example) {
  const auto* arm = std::get_if<Arm>(&example.action);
  if (!arm || arm->index >= sums_.size())
    throw std::invalid_argument("TabularOracle: update for an unknown arm");
  sums_[arm->index] += example.weight * example.loss;
  counts_[arm->index] += example.weight;
}

std::string TabularOracle::save_state() const {
  detail::BlobWriter out(detail::OracleKind::tabular);
  out.f64(prior_loss_);
  out.f64(prior_count_);
  out.doubles(sums_);
  out.doubles(counts_);
  return std::move(out).finish();
}

void TabularOracle::load_state(std::string_view blob) {
  detail::BlobReader in(blob, detail::OracleKind::tabular);
  const double prior_loss = in.f64();
  const double prior_count = in.f64();
  auto sums = in.doubles();
  auto counts = in.doubles();
  in.expect_end();
  if (sums.size() != sums_.size() || counts.size() != counts_.size())
    throw std::invalid_argument("TabularOracle: checkpoint has a different arm count");
  prior_loss_ = prior_loss;
  prior_count_ = prior_count;
  sums_ = std::move(sums);
  counts_ = std::move(counts);
}

std::unique_ptr<RegressionOracle> TabularOracle::clone() const {
  return std::make_unique<TabularOracle>(*this);
}

}  // namespace smoothcb
