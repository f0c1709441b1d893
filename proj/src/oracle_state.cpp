#include <cmath>

#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Action RegressionOracle::argmin_action(const Context& context, const ActionSpace& space) const {
  if (space.is_finite()) {
    std::size_t best = 0;
    double best_value = predict(context, Arm{0});
    for (std::size_t i = 1; i < space.size(); ++i) {
      const double value = predict(context, Arm{i});
      if (value < best_value) {
        best_value = value;
        best = i;
      }
    }
    return Arm{best};
  }
  const double step = 1.0 / static_cast<double>(kIntervalArgminGrid - 1);
  double best = 0.0;
  double best_value = predict(context, Point{0.0});
  for (std::size_t i = 1; i < kIntervalArgminGrid; ++i) {
    const double a = static_cast<double>(i) * step;
    const double value = predict(context, Point{a});
    if (value < best_value) {
      best_value = value;
      best = a;
    }
  }
  return Point{best};
}

void RegressionOracle::update(const WeightedExample& example) {
  require_unit_loss(example.loss, "oracle update");
  if (!(example.weight >= 0.0) || !std::isfinite(example.weight))
    throw std::invalid_argument("oracle update: weight must be finite and nonnegative");
  if (example.weight == 0.0) return;
  apply_update(example);
}

}  // namespace smoothcb
