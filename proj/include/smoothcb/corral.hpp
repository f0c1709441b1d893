// Adaptivity to unknown smoothness.
//
// B stable base learners, each a smoothed-IGW learner for a fixed
// smoothness level, run under a CORRAL master: the master keeps a
// distribution q over bases, samples one base per round, feeds it the
// importance-weighted loss, and updates q by log-barrier mirror descent
// whose per-base learning rates grow each time a base's probability hits a
// new low. Bases shrink their exploration parameter as 1/sqrt(rho) where
// rho = 1 / (smallest probability they have been sampled with), and update
// their oracle with weight gamma / q.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "smoothcb/core.hpp"
#include "smoothcb/environments.hpp"
#include "smoothcb/regression_oracles.hpp"
#include "smoothcb/sampling.hpp"
#include "smoothcb/smooth_igw.hpp"

namespace smoothcb {

/// [2^-1, ..., 2^-B] with B = ceil(log2 T). Requires T >= 2.
std::vector<SmoothingCap> grid_init(std::uint64_t horizon);

/// count values of gamma * h geometrically spaced from lo to hi inclusive.
std::vector<double> gamma_h_grid(double lo, double hi, std::size_t count);

/// gamma = sqrt(8 T / (h * rho * regsq)). Requires rho >= 1.
double base_gamma(std::uint64_t horizon, SmoothingCap h, double rho, double regsq);

/// Smoothed-IGW learner driven by the master. Two parameterizations:
///   - smoothness level h: gamma_t = base_gamma(T, h, rho_t, regsq);
///   - exploration product c = gamma * h (with h = 1): gamma_t = c / sqrt(rho_t).
class StableBase {
 public:
  StableBase(SmoothingCap h, std::uint64_t horizon, double regsq, std::unique_ptr<RegressionOracle> oracle,
             ActionSpace space, Rng rng);

  static StableBase with_gamma_h(double gamma_h, std::unique_ptr<RegressionOracle> oracle, ActionSpace space,
                                 Rng rng);

  struct Step {
    Action action;
    double loss;
    double gamma;
    double weight;
  };

  double gamma(double rho) const;

  /// Plays one round on behalf of the master: samples from the smoothed IGW
  /// law with gamma(rho), observes the loss, and updates the oracle with
  /// weight gamma(rho) / q. Requires q in (0, 1] and rho >= 1.
  Step step(const Context& context, double q, double rho, const LossCallback& loss);

  SmoothingCap smoothing() const noexcept { return h_; }
  const RegressionOracle& oracle() const noexcept { return *oracle_; }
  const ActionSpace& space() const noexcept { return space_; }

 private:
  StableBase(SmoothingCap h, std::uint64_t horizon, double regsq, double gamma_h,
             std::unique_ptr<RegressionOracle> oracle, ActionSpace space, Rng rng);

  SmoothingCap h_;
  std::uint64_t horizon_;
  double regsq_;
  double gamma_h_;  // > 0 only for the product parameterization
  std::unique_ptr<RegressionOracle> oracle_;
  ActionSpace space_;
  Rng rng_;
};

/// The master's distribution and learning-rate state.
class CorralMaster {
 public:
  static constexpr double kBisectionTolerance = 1e-12;
  static constexpr int kBisectionMaxIterations = 200;

  /// q uniform, every rate eta, rho = B, thresholds 2B. Requires T >= 2.
  CorralMaster(std::size_t bases, std::uint64_t horizon, double eta);

  /// Categorical draw from q.
  std::size_t sample(Rng& rng) const;

  /// Log-barrier step on the importance-weighted loss of `chosen`, mixing
  /// with the uniform distribution at rate 1/T, then threshold doubling.
  /// Throws LossRangeError for a loss outside [0, 1] and std::runtime_error
  /// if the normalization solve fails.
  void update(std::size_t chosen, double loss);

  std::size_t size() const noexcept { return q_.size(); }
  const std::vector<double>& q() const noexcept { return q_; }
  /// 1 / min over past rounds of q_b, including the current one.
  const std::vector<double>& rho() const noexcept { return rho_; }
  const std::vector<double>& eta() const noexcept { return eta_; }
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }
  double rate_growth() const noexcept { return beta_; }

 private:
  std::uint64_t horizon_;
  double beta_;
  std::vector<double> q_;
  std::vector<double> rho_;
  std::vector<double> eta_;
  std::vector<double> thresholds_;
};

using OracleFactory = std::function<std::unique_ptr<RegressionOracle>(std::size_t base)>;

struct AdaptiveOptions {
  std::uint64_t horizon = 2;
  double eta = 1.0;
  double regsq = 1.0;
  std::uint64_t seed = 0;
  /// Use only the first n dyadic levels.
  std::optional<std::size_t> base_count_override;
  /// When set, bases are parameterized by these gamma * h products instead of
  /// the dyadic smoothness grid.
  std::optional<std::vector<double>> gamma_h_products;
};

/// Master plus bases. Streams: "corral" for base selection, "base-<b>" for
/// base b's sampling.
class AdaptiveLearner {
 public:
  AdaptiveLearner(const ActionSpace& space, const OracleFactory& make_oracle, const AdaptiveOptions& options);

  RoundLog step(const Context& context, const LossCallback& loss);

  const CorralMaster& master() const noexcept { return master_; }
  const std::vector<StableBase>& bases() const noexcept { return bases_; }
  const ActionSpace& space() const noexcept { return space_; }
  /// Details of the most recent round, for inspection.
  const StableBase::Step& last_step() const { return last_step_.value(); }
  double last_q() const noexcept { return last_q_; }
  double last_rho() const noexcept { return last_rho_; }

 private:
  ActionSpace space_;
  std::vector<StableBase> bases_;
  CorralMaster master_;
  Rng rng_;
  std::uint64_t t_ = 0;
  std::optional<StableBase::Step> last_step_;
  double last_q_ = 1.0;
  double last_rho_ = 1.0;
};

std::vector<RoundLog> run_adaptive(AdaptiveLearner& learner, Environment& env, std::uint64_t horizon,
                                   const RoundObserver& observer = {});

std::vector<RoundLog> run_adaptive(const ActionSpace& space, const OracleFactory& make_oracle, Environment& env,
                                   const AdaptiveOptions& options, const RoundObserver& observer = {});

}  // namespace smoothcb
