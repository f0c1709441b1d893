#include "smoothcb/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace smoothcb {

namespace {

std::vector<double> finite_predictions(const RegressionOracle& oracle, const Context& context,
                                       const ActionSpace& space) {
  if (!space.is_finite()) throw std::invalid_argument("exact IGW law requires a finite action space");
  std::vector<double> predictions(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) predictions[i] = oracle.predict(context, Arm{i});
  return predictions;
}

}  // namespace

IgwParams make_igw_params(const RegressionOracle& oracle, const Context& context,
                          const ActionSpace& space, SmoothingCap h, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("IGW: gamma must be positive and finite");
  Action greedy = oracle.argmin_action(context, space);
  const double value = oracle.predict(context, greedy);
  return IgwParams{h, gamma, greedy, value};
}

double igw_density(const IgwParams& params, double predicted) {
  double gap = predicted - params.greedy_value;
  if (gap < -kGapTolerance)
    throw std::logic_error("IGW: greedy action is not a minimizer of the loss estimate");
  if (gap < 0.0) gap = 0.0;
  return 1.0 / (1.0 + params.h.value() * params.gamma * gap);
}

Action rejection_sample(const RegressionOracle& oracle, const Context& context,
                        const ActionSpace& space, const IgwParams& params, Rng& rng) {
  Action proposal = space.sample_base(rng);
  const double accept = igw_density(params, oracle.predict(context, proposal));
  // Always consume the Bernoulli draw so the stream position does not
  // depend on the proposal.
  const bool keep = bernoulli(rng, accept);
  return keep ? proposal : params.greedy_action;
}

FiniteDistribution exact_finite_distribution(const std::vector<double>& predictions,
                                             const IgwParams& params) {
  const auto* greedy = std::get_if<Arm>(&params.greedy_action);
  if (!greedy || greedy->index >= predictions.size())
    throw std::invalid_argument("exact IGW law: greedy action is not an arm of the space");
  const double k = static_cast<double>(predictions.size());
  FiniteDistribution dist;
  dist.probabilities.resize(predictions.size());
  double submeasure = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    dist.probabilities[i] = igw_density(params, predictions[i]) / k;
    submeasure += dist.probabilities[i];
  }
  dist.probabilities[greedy->index] += 1.0 - submeasure;
  return dist;
}

FiniteDistribution exact_finite_distribution(const RegressionOracle& oracle, const Context& context,
                                             const ActionSpace& space, const IgwParams& params) {
  return exact_finite_distribution(finite_predictions(oracle, context, space), params);
}

double submeasure_total(const RegressionOracle& oracle, const Context& context,
                        const ActionSpace& space, const IgwParams& params) {
  const auto predictions = finite_predictions(oracle, context, space);
  double total = 0.0;
  for (double p : predictions) total += igw_density(params, p);
  return total / static_cast<double>(predictions.size());
}

}  // namespace smoothcb
