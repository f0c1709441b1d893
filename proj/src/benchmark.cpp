#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smoothcb/environments.hpp"

namespace smoothcb {

double smooth_benchmark_sorted(const std::vector<double>& sorted_means, SmoothingCap h) {
  if (sorted_means.empty()) throw std::invalid_argument("smooth benchmark: no arms");
  const double k = static_cast<double>(sorted_means.size());
  const double cap = std::min(1.0, 1.0 / (h.value() * k));
  double remaining = 1.0;
  double value = 0.0;
  for (double mean : sorted_means) {
    if (remaining <= 0.0) break;
    const double take = std::min(cap, remaining);
    value += take * mean;
    remaining -= take;
  }
  return value;
}

double smooth_benchmark_finite(const std::vector<double>& means, SmoothingCap h) {
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  return smooth_benchmark_sorted(sorted, h);
}

double smooth_benchmark_interval(const std::function<double(double)>& mean_fn, SmoothingCap h,
                                 std::size_t grid_size) {
  const auto minimum = static_cast<std::size_t>(std::ceil(2.0 / h.value()));
  if (grid_size < minimum)
    throw std::invalid_argument("smooth benchmark: grid of " + std::to_string(grid_size) +
                                " points is too coarse for h; need at least " + std::to_string(minimum));
  std::vector<double> values(grid_size);
  const double spacing = 1.0 / static_cast<double>(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) values[i] = mean_fn((static_cast<double>(i) + 0.5) * spacing);
  return smooth_benchmark_finite(values, h);
}

}  // namespace smoothcb
