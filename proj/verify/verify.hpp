// Slow, obviously-correct reference computations used to check the library.
#pragma once

#include <cstddef>
#include <vector>

#include "smoothcb/core.hpp"

namespace smoothcb::verify {

/// Per-arm probability cap of an h-smoothed kernel on K arms: min(1, 1/(hK)).
double kernel_cap(std::size_t arms, double h);

/// min over kernels q (sum 1, 0 <= q_i <= cap) of sum_i q_i means_i, found by
/// enumerating every vertex of the capped simplex. Exponential in K.
double capped_simplex_lp(const std::vector<double>& means, double h);

/// A random h-smoothed kernel on K arms: a Dirichlet mixture of randomly
/// ordered water-filling vertices.
std::vector<double> random_capped_kernel(std::size_t arms, double h, Rng& rng);

/// E_{a~P, a*~Q}[f(a) - f(a*) - (gamma/4)(fhat(a) - f(a))^2].
double dec_objective(const std::vector<double>& play, const std::vector<double>& comparator,
                     const std::vector<double>& truth, const std::vector<double>& estimate, double gamma);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// Normalized histogram of arm indices.
std::vector<double> empirical_law(const std::vector<std::size_t>& draws, std::size_t arms);

}  // namespace smoothcb::verify
