// Online square-loss regression oracles with native weighted updates.
//
// An oracle predicts the conditional mean loss f(x, a) in [0, 1], reports the
// action minimizing its current prediction, and learns from weighted
// examples (w, x, a, loss) by treating w as a multiplier on the square loss.
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "smoothcb/core.hpp"

namespace smoothcb {

struct WeightedExample {
  double weight = 1.0;
  const Context& context;
  Action action;
  double loss = 0.0;
};

/// Number of grid points used by the default interval argmin.
inline constexpr std::size_t kIntervalArgminGrid = 1025;

class RegressionOracle {
 public:
  virtual ~RegressionOracle() = default;

  /// Prediction in [0, 1]. Pure.
  virtual double predict(const Context& context, const Action& action) const = 0;

  /// Minimizer of the current prediction. Finite spaces are scanned with
  /// first-wins ties; the interval is scanned on a uniform grid of
  /// kIntervalArgminGrid points unless an override knows better.
  virtual Action argmin_action(const Context& context, const ActionSpace& space) const;

  /// Throws LossRangeError for a loss outside [0, 1] and
  /// std::invalid_argument for a negative weight. Weight 0 is a no-op.
  void update(const WeightedExample& example);

  /// Versioned binary checkpoint of the learned state.
  virtual std::string save_state() const = 0;
  /// Restores a checkpoint produced by save_state on an oracle of the same
  /// kind and shape. Throws std::invalid_argument on mismatch.
  virtual void load_state(std::string_view blob) = 0;

  virtual std::unique_ptr<RegressionOracle> clone() const = 0;

 protected:
  virtual void apply_update(const WeightedExample& example) = 0;
};

/// Per-arm weighted running mean with a pseudo-observation prior; ignores
/// the context.
class TabularOracle final : public RegressionOracle {
 public:
  explicit TabularOracle(std::size_t arms, double prior_loss = 0.5, double prior_count = 1.0);

  double predict(const Context& context, const Action& action) const override;
  Action argmin_action(const Context& context, const ActionSpace& space) const override;
  std::string save_state() const override;
  void load_state(std::string_view blob) override;
  std::unique_ptr<RegressionOracle> clone() const override;

  std::size_t arms() const noexcept { return sums_.size(); }
  double loss_sum(std::size_t arm) const { return sums_.at(arm); }
  double weight_sum(std::size_t arm) const { return counts_.at(arm); }

 private:
  void apply_update(const WeightedExample& example) override;
  double estimate(std::size_t arm) const;

  double prior_loss_;
  double prior_count_;
  std::vector<double> sums_;
  std::vector<double> counts_;
};

/// Vovk's aggregating algorithm over a finite class of fixed predictors,
/// specialised to square loss on [0, 1] (mixable at rate 2).
class AggregationOracle final : public RegressionOracle {
 public:
  using Expert = std::function<double(const Context&, const Action&)>;

  static constexpr double kMixableRate = 2.0;

  explicit AggregationOracle(std::vector<Expert> experts, double learning_rate = kMixableRate);

  /// Substitution-function prediction; same as mixture_predict.
  double predict(const Context& context, const Action& action) const override;
  std::string save_state() const override;
  void load_state(std::string_view blob) override;
  std::unique_ptr<RegressionOracle> clone() const override;

  /// p = 1/2 - (G(1) - G(0)) / 2 with
  /// G(y) = -(1/eta) log sum_f w_f exp(-eta (f(x,a) - y)^2).
  double mixture_predict(const Context& context, const Action& action) const;

  std::size_t expert_count() const noexcept { return experts_.size(); }
  /// Normalized log-weights (log-sum-exp is zero).
  const std::vector<double>& log_weights() const noexcept { return log_weights_; }
  double learning_rate() const noexcept { return rate_; }

 private:
  void apply_update(const WeightedExample& example) override;

  std::vector<Expert> experts_;
  std::vector<double> log_weights_;
  double rate_;
};

/// Parameters of the parametric loss model
///   f(x, a) = sigmoid(|w| * |sigmoid(v . x) - a| + xi).
struct ParametricParams {
  std::vector<double> v;
  double w = 1.0;
  double xi = 0.0;
};

struct ParametricGradient {
  std::vector<double> v;
  double w = 0.0;
  double xi = 0.0;
};

struct ParametricOptions {
  double step_size = 0.05;
  /// Step at update n (1-based) is step_size / sqrt(n) when enabled.
  bool inverse_sqrt_decay = true;
  double initial_w = 1.0;
  double initial_xi = 0.0;
};

/// Loss predictor whose minimizer is available in closed form: the model is
/// minimized at a = sigmoid(v . x) for every parameter value. Intended for
/// the unit interval.
class ParametricOracle final : public RegressionOracle {
 public:
  ParametricOracle(std::size_t feature_dim, ParametricOptions options = {});

  double predict(const Context& context, const Action& action) const override;
  /// Interval: sigmoid(v . x). Finite spaces fall back to a scan.
  Action argmin_action(const Context& context, const ActionSpace& space) const override;
  std::string save_state() const override;
  void load_state(std::string_view blob) override;
  std::unique_ptr<RegressionOracle> clone() const override;

  /// Gradient of weight * (f(x, a) - loss)^2 with respect to (v, w, xi).
  /// The kinks of |w| and |z| use subgradient 0.
  ParametricGradient gradient(const WeightedExample& example) const;

  const ParametricParams& params() const noexcept { return params_; }
  void set_params(ParametricParams params);
  std::size_t feature_dim() const noexcept { return params_.v.size(); }
  std::uint64_t update_count() const noexcept { return updates_; }

 private:
  void apply_update(const WeightedExample& example) override;
  double point_of(const Action& action) const;

  ParametricOptions options_;
  ParametricParams params_;
  std::uint64_t updates_ = 0;
};

double sigmoid(double z);

}  // namespace smoothcb
