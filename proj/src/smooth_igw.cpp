#include "smoothcb/smooth_igw.hpp"

#include <cmath>
#include <stdexcept>

namespace smoothcb {

double gamma_for_horizon(std::uint64_t horizon, SmoothingCap h, double regsq) {
  if (horizon == 0 || !(regsq > 0.0)) throw std::invalid_argument("gamma_for_horizon: arguments must be positive");
  return std::sqrt(8.0 * static_cast<double>(horizon) / (h.value() * regsq));
}

SmoothIgwLearner::SmoothIgwLearner(std::unique_ptr<RegressionOracle> oracle, ActionSpace space, SmoothingCap h,
                                   double gamma, Rng rng)
    : oracle_(std::move(oracle)), space_(space), h_(h), gamma_(gamma), rng_(std::move(rng)) {
  if (!oracle_) throw std::invalid_argument("SmoothIgwLearner: null oracle");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("SmoothIgwLearner: gamma must be > 0");
}

RoundLog SmoothIgwLearner::step(const Context& context, const LossCallback& loss) {
  const IgwParams params = make_igw_params(*oracle_, context, space_, h_, gamma_);
  Action action = rejection_sample(*oracle_, context, space_, params, rng_);
  const double observed = loss(action);
  require_unit_loss(observed, "loss callback");
  oracle_->update(WeightedExample{1.0, context, action, observed});
  ++t_;
  RoundLog log;
  log.t = t_;
  log.action = action;
  log.realized_loss = observed;
  return log;
}

std::vector<RoundLog> run(SmoothIgwLearner& learner, Environment& env, std::uint64_t horizon,
                          const RoundObserver& observer) {
  if (!(learner.space() == env.space())) throw std::invalid_argument("run: learner and environment spaces differ");
  std::vector<RoundLog> logs;
  logs.reserve(horizon);
  for (std::uint64_t i = 0; i < horizon; ++i) {
    const Context context = env.next_context();
    RoundLog log = learner.step(context, [&](const Action& a) { return env.sample_loss(context, a); });
    log.mean_loss = env.mean_loss(context, log.action);
    if (observer) observer(context, log);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace smoothcb
