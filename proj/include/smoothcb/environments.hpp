// Ground-truth environments and the smoothed benchmark.
//
// An environment owns the true mean loss f*(x, a), a context source, and a
// noise model. It also answers the two benchmark queries used for regret
// accounting: the best h-smoothed kernel value Smooth_h(x) and the best
// single-action value min_a f*(x, a).
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "smoothcb/core.hpp"

namespace smoothcb {

/// Grid resolution used for interval benchmarks unless overridden.
inline constexpr std::size_t kDefaultBenchmarkGrid = 4096;

enum class NoiseModel {
  none,
  /// Loss is Bernoulli(mean).
  bernoulli,
  /// Loss is mean + U(-r, r) with r = min(0.05, mean, 1 - mean).
  uniform_bounded,
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual const ActionSpace& space() const = 0;
  virtual std::size_t context_dim() const = 0;

  /// Next context of the stream.
  virtual Context next_context() = 0;

  /// f*(x, a). Pure.
  virtual double mean_loss(const Context& context, const Action& action) const = 0;

  /// A noisy realization of the loss with mean f*(x, a). Throws
  /// LossRangeError if the realization leaves [0, 1].
  double sample_loss(const Context& context, const Action& action);

  /// min over actions of f*(x, .).
  virtual double best_mean(const Context& context) const = 0;

  /// Smooth_h(x): the smallest expected loss over kernels whose density
  /// w.r.t. the base measure is at most 1/h.
  virtual double smooth_benchmark(const Context& context, SmoothingCap h) const = 0;

 protected:
  Environment(NoiseModel noise, Rng rng) : noise_(noise), rng_(std::move(rng)) {}
  Rng& rng() { return rng_; }

 private:
  NoiseModel noise_;
  Rng rng_;
};

/// Water-filling value of the best capped kernel on K arms with uniform base
/// measure: cap c = min(1, 1/(hK)) on the lowest means until mass 1.
double smooth_benchmark_finite(const std::vector<double>& means, SmoothingCap h);

/// Same, for means already sorted ascending.
double smooth_benchmark_sorted(const std::vector<double>& sorted_means, SmoothingCap h);

/// Smooth_h on [0, 1] approximated by a uniform grid of `grid_size` cell
/// midpoints, each carrying base mass 1/grid_size. Error is O(L * spacing^alpha)
/// for a Hölder truth. Requires grid_size >= ceil(2/h).
double smooth_benchmark_interval(const std::function<double(double)>& mean_fn, SmoothingCap h,
                                 std::size_t grid_size = kDefaultBenchmarkGrid);

/// Non-contextual finite-armed environment with fixed per-arm mean losses.
class FiniteArmEnvironment final : public Environment {
 public:
  FiniteArmEnvironment(std::vector<double> means, NoiseModel noise, Rng rng);

  const ActionSpace& space() const override { return space_; }
  std::size_t context_dim() const override { return 0; }
  Context next_context() override { return {}; }
  double mean_loss(const Context& context, const Action& action) const override;
  double best_mean(const Context&) const override { return sorted_.front(); }
  double smooth_benchmark(const Context& context, SmoothingCap h) const override;

  const std::vector<double>& means() const noexcept { return means_; }

 private:
  ActionSpace space_;
  std::vector<double> means_;
  std::vector<double> sorted_;
};

struct MultipleBestArmsSpec {
  std::size_t arms = 2;
  std::size_t optimal_arms = 1;
  double optimal_mean = 0.0;
  /// One entry per suboptimal arm, or a single entry used for all of them.
  std::vector<double> suboptimal_means{1.0};

  void validate() const;
};

/// Optimal arms come first; Bernoulli losses. `rng` becomes the noise stream.
std::unique_ptr<FiniteArmEnvironment> make_multiple_best_arms(const MultipleBestArmsSpec& spec, Rng rng);

/// Reads `arm_id,rating` rows (rating in [0, 1]) into a Bernoulli
/// environment with mean loss 1 - rating, in file order. Throws
/// std::runtime_error naming the offending line.
std::unique_ptr<FiniteArmEnvironment> load_arm_dataset(const std::filesystem::path& path, Rng rng);

struct HolderSpec {
  double lipschitz = 1.0;
  double exponent = 1.0;

  void validate() const;
};

/// Contextual problem on [0, 1] with f*(x, a) = min(1, L |a - m(x)|^alpha)
/// and m(x) = sigmoid(v . x). Contexts are i.i.d. standard normal in all
/// coordinates but the last, which is a constant 1 (intercept).
class HolderEnvironment final : public Environment {
 public:
  HolderEnvironment(HolderSpec spec, std::vector<double> direction, Rng rng,
                    std::size_t benchmark_grid = kDefaultBenchmarkGrid);

  const ActionSpace& space() const override { return space_; }
  std::size_t context_dim() const override { return direction_.size(); }
  Context next_context() override;
  double mean_loss(const Context& context, const Action& action) const override;
  double best_mean(const Context&) const override { return 0.0; }
  double smooth_benchmark(const Context& context, SmoothingCap h) const override;

  double minimizer(const Context& context) const;
  const HolderSpec& spec() const noexcept { return spec_; }
  const std::vector<double>& direction() const noexcept { return direction_; }

 private:
  HolderSpec spec_;
  std::vector<double> direction_;
  ActionSpace space_;
  std::size_t grid_;
};

/// Draws the minimizer direction v ~ N(0, I/d) from `rng` and hands the same
/// generator to the environment as its context and noise stream.
std::unique_ptr<HolderEnvironment> make_holder_env(const HolderSpec& spec, std::size_t context_dim, Rng rng);

/// Random Fourier features for the Laplace kernel exp(-|x - y|_1 / bandwidth):
/// phi(x) = sqrt(2/D) cos(W x + b) with Cauchy(0, 1/bandwidth) entries in W.
class RandomFourierFeatures {
 public:
  RandomFourierFeatures(std::size_t input_dim, std::size_t feature_count, double bandwidth, Rng& rng);
  std::vector<double> transform(const std::vector<double>& x) const;
  std::size_t output_dim() const noexcept { return offsets_.size(); }

 private:
  std::size_t input_dim_;
  std::vector<double> weights_;  // row-major, feature_count x input_dim
  std::vector<double> offsets_;
};

struct RegressionDatasetOptions {
  bool shuffle = false;
  /// Append a constant 1 feature after any preprocessing.
  bool add_intercept = true;
  bool random_fourier_features = false;
  std::size_t rff_count = 256;
  double rff_bandwidth = 1.0;
  std::size_t benchmark_grid = kDefaultBenchmarkGrid;
};

/// Regression rows turned into a continuous-action problem: playing a on a
/// row with (min-max rescaled) target y costs |y - a|, deterministically.
/// Contexts cycle through the rows; the context id is the row index.
class RegressionDatasetEnvironment final : public Environment {
 public:
  RegressionDatasetEnvironment(std::vector<std::vector<double>> features, std::vector<double> targets,
                               RegressionDatasetOptions options, Rng rng);

  const ActionSpace& space() const override { return space_; }
  std::size_t context_dim() const override;
  Context next_context() override;
  double mean_loss(const Context& context, const Action& action) const override;
  double best_mean(const Context&) const override { return 0.0; }
  double smooth_benchmark(const Context& context, SmoothingCap h) const override;

  std::size_t rows() const noexcept { return targets_.size(); }
  /// Target after rescaling to [0, 1].
  double target(std::size_t row) const { return targets_.at(row); }

 private:
  std::size_t row_of(const Context& context) const;

  ActionSpace space_;
  std::vector<std::vector<double>> features_;
  std::vector<double> targets_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::size_t grid_;
};

/// Reads a CSV whose header is `f1,...,fd,target`. Targets are min-max
/// rescaled to [0, 1]. Throws std::runtime_error on an empty file or a
/// non-numeric cell.
std::unique_ptr<RegressionDatasetEnvironment> load_regression_dataset(
    const std::filesystem::path& path, Rng rng, RegressionDatasetOptions options = {});

}  // namespace smoothcb
