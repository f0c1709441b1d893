// Fixed-smoothness learner: each round queries the oracle's greedy action,
// draws from the smoothed IGW law by rejection sampling, observes the loss
// of the played action only, and feeds it back to the oracle.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "smoothcb/core.hpp"
#include "smoothcb/environments.hpp"
#include "smoothcb/regression_oracles.hpp"
#include "smoothcb/sampling.hpp"

namespace smoothcb {

using LossCallback = std::function<double(const Action&)>;

/// Called once per round after the loss is observed, with the round's
/// context; the harness uses it to fill benchmark values.
using RoundObserver = std::function<void(const Context&, RoundLog&)>;

/// gamma = sqrt(8 T / (h * regsq)).
double gamma_for_horizon(std::uint64_t horizon, SmoothingCap h, double regsq);

class SmoothIgwLearner {
 public:
  SmoothIgwLearner(std::unique_ptr<RegressionOracle> oracle, ActionSpace space, SmoothingCap h, double gamma,
                   Rng rng);

  /// Plays one round. The callback is invoked exactly once and must return a
  /// loss in [0, 1]; the oracle receives one weight-1 update.
  RoundLog step(const Context& context, const LossCallback& loss);

  const RegressionOracle& oracle() const noexcept { return *oracle_; }
  const ActionSpace& space() const noexcept { return space_; }
  SmoothingCap smoothing() const noexcept { return h_; }
  double gamma() const noexcept { return gamma_; }
  std::uint64_t rounds() const noexcept { return t_; }

 private:
  std::unique_ptr<RegressionOracle> oracle_;
  ActionSpace space_;
  SmoothingCap h_;
  double gamma_;
  Rng rng_;
  std::uint64_t t_ = 0;
};

/// Runs T rounds against `env`, filling mean_loss from the environment.
/// Benchmarks are left to `observer`.
std::vector<RoundLog> run(SmoothIgwLearner& learner, Environment& env, std::uint64_t horizon,
                          const RoundObserver& observer = {});

}  // namespace smoothcb
