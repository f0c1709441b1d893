// Smoothed inverse-gap-weighted exploration.
//
// Given the greedy action a_hat of the current loss estimate f_hat, the
// density
//
//     m(a) = 1 / (1 + h * gamma * (f_hat(a) - f_hat(a_hat)))
//
// relative to the base measure defines a sub-probability measure M. The
// played law is M plus the missing mass 1 - M(A) placed on a_hat. It is
// sampled with one base-measure draw and one Bernoulli acceptance, so the
// law never has to be materialized; finite spaces also get an exact form
// for checking the sampler.
#pragma once

#include <vector>

#include "smoothcb/core.hpp"
#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

/// Negative gaps down to this magnitude are treated as zero.
inline constexpr double kGapTolerance = 1e-12;

struct IgwParams {
  SmoothingCap h;
  double gamma;
  Action greedy_action;
  double greedy_value;
};

/// Queries the oracle's argmin and its value. Throws std::invalid_argument
/// when gamma is not positive.
IgwParams make_igw_params(const RegressionOracle& oracle, const Context& context,
                          const ActionSpace& space, SmoothingCap h, double gamma);

/// m = 1 / (1 + h * gamma * (predicted - greedy_value)), in (0, 1].
/// Throws std::logic_error when the gap is below -kGapTolerance, which means
/// greedy_action was not a minimizer.
double igw_density(const IgwParams& params, double predicted);

/// One draw from the smoothed IGW law: a base-measure proposal accepted with
/// probability m(proposal), otherwise the greedy action.
Action rejection_sample(const RegressionOracle& oracle, const Context& context,
                        const ActionSpace& space, const IgwParams& params, Rng& rng);

struct FiniteDistribution {
  std::vector<double> probabilities;
};

/// Exact law of rejection_sample on a finite space:
/// P(a) = m(a)/K for a != a_hat and P(a_hat) = m(a_hat)/K + 1 - M(A).
FiniteDistribution exact_finite_distribution(const RegressionOracle& oracle, const Context& context,
                                             const ActionSpace& space, const IgwParams& params);

/// Finite form taking the predictions directly.
FiniteDistribution exact_finite_distribution(const std::vector<double>& predictions,
                                             const IgwParams& params);

/// M(A) = (1/K) sum_a m(a).
double submeasure_total(const RegressionOracle& oracle, const Context& context,
                        const ActionSpace& space, const IgwParams& params);

}  // namespace smoothcb
