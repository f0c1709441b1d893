#include "smoothcb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

double Environment::sample_loss(const Context& context, const Action& action) {
  const double mean = mean_loss(context, action);
  double loss = mean;
  switch (noise_) {
    case NoiseModel::none:
      break;
    case NoiseModel::bernoulli:
      loss = bernoulli(rng_, mean) ? 1.0 : 0.0;
      break;
    case NoiseModel::uniform_bounded: {
      const double radius = std::min({0.05, mean, 1.0 - mean});
      loss = mean + (2.0 * uniform01(rng_) - 1.0) * radius;
      break;
    }
  }
  require_unit_loss(loss, "environment");
  return loss;
}

// ---------------------------------------------------------------------------

FiniteArmEnvironment::FiniteArmEnvironment(std::vector<double> means, NoiseModel noise, Rng rng)
    : Environment(noise, std::move(rng)),
      space_(ActionSpace::finite(means.size())),
      means_(std::move(means)) {
  for (double m : means_) require_unit_loss(m, "arm mean");
  sorted_ = means_;
  std::sort(sorted_.begin(), sorted_.end());
}

double FiniteArmEnvironment::mean_loss(const Context&, const Action& action) const {
  space_.require(action);
  return means_[std::get<Arm>(action).index];
}

double FiniteArmEnvironment::smooth_benchmark(const Context&, SmoothingCap h) const {
  return smooth_benchmark_sorted(sorted_, h);
}

void MultipleBestArmsSpec::validate() const {
  if (optimal_arms < 1 || optimal_arms > arms)
    throw std::invalid_argument("multiple best arms: need 1 <= optimal_arms <= arms");
  const std::size_t rest = arms - optimal_arms;
  if (rest > 0) {
    if (suboptimal_means.size() != 1 && suboptimal_means.size() != rest)
      throw std::invalid_argument("multiple best arms: suboptimal_means needs 1 or arms - optimal_arms entries");
    for (double m : suboptimal_means) {
      require_unit_loss(m, "suboptimal mean");
      if (!(optimal_mean < m))
        throw std::invalid_argument("multiple best arms: optimal_mean must be below every suboptimal mean");
    }
  }
  require_unit_loss(optimal_mean, "optimal mean");
}

std::unique_ptr<FiniteArmEnvironment> make_multiple_best_arms(const MultipleBestArmsSpec& spec, Rng rng) {
  spec.validate();
  std::vector<double> means(spec.arms, spec.optimal_mean);
  for (std::size_t i = spec.optimal_arms; i < spec.arms; ++i) {
    const std::size_t j = i - spec.optimal_arms;
    means[i] = spec.suboptimal_means.size() == 1 ? spec.suboptimal_means[0] : spec.suboptimal_means[j];
  }
  return std::make_unique<FiniteArmEnvironment>(std::move(means), NoiseModel::bernoulli, std::move(rng));
}

// ---------------------------------------------------------------------------

void HolderSpec::validate() const {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("Hölder spec: L must be > 0");
  if (!(exponent > 0.0 && exponent <= 1.0)) throw std::invalid_argument("Hölder spec: alpha must lie in (0, 1]");
}

HolderEnvironment::HolderEnvironment(HolderSpec spec, std::vector<double> direction, Rng rng,
                                     std::size_t benchmark_grid)
    : Environment(NoiseModel::uniform_bounded, std::move(rng)),
      spec_(spec),
      direction_(std::move(direction)),
      space_(ActionSpace::unit_interval()),
      grid_(benchmark_grid) {
  spec_.validate();
  if (direction_.empty()) throw std::invalid_argument("Hölder environment: context dimension must be >= 1");
}

Context HolderEnvironment::next_context() {
  std::normal_distribution<double> normal(0.0, 1.0);
  Context context;
  context.features.resize(direction_.size());
  for (std::size_t i = 0; i + 1 < direction_.size(); ++i) context.features[i] = normal(rng());
  context.features.back() = 1.0;
  return context;
}

double HolderEnvironment::minimizer(const Context& context) const {
  if (context.features.size() != direction_.size())
    throw std::invalid_argument("Hölder environment: context dimension mismatch");
  return sigmoid(std::inner_product(direction_.begin(), direction_.end(), context.features.begin(), 0.0));
}

double HolderEnvironment::mean_loss(const Context& context, const Action& action) const {
  space_.require(action);
  const double a = std::get<Point>(action).value;
  return std::min(1.0, spec_.lipschitz * std::pow(std::abs(a - minimizer(context)), spec_.exponent));
}

double HolderEnvironment::smooth_benchmark(const Context& context, SmoothingCap h) const {
  const double center = minimizer(context);
  return smooth_benchmark_interval(
      [&](double a) { return std::min(1.0, spec_.lipschitz * std::pow(std::abs(a - center), spec_.exponent)); },
      h, std::max(grid_, static_cast<std::size_t>(std::ceil(2.0 / h.value()))));
}

std::unique_ptr<HolderEnvironment> make_holder_env(const HolderSpec& spec, std::size_t context_dim, Rng rng) {
  if (context_dim == 0) throw std::invalid_argument("Hölder environment: context dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(context_dim)));
  std::vector<double> direction(context_dim);
  for (double& v : direction) v = normal(rng);
  return std::make_unique<HolderEnvironment>(spec, std::move(direction), std::move(rng));
}

// ---------------------------------------------------------------------------

RandomFourierFeatures::RandomFourierFeatures(std::size_t input_dim, std::size_t feature_count,
                                             double bandwidth, Rng& rng)
    : input_dim_(input_dim), weights_(input_dim * feature_count), offsets_(feature_count) {
  if (feature_count == 0) throw std::invalid_argument("random features: need at least one feature");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("random features: bandwidth must be > 0");
  for (double& w : weights_) w = std::tan(std::numbers::pi * (uniform01(rng) - 0.5)) / bandwidth;
  for (double& b : offsets_) b = 2.0 * std::numbers::pi * uniform01(rng);
}

std::vector<double> RandomFourierFeatures::transform(const std::vector<double>& x) const {
  if (x.size() != input_dim_) throw std::invalid_argument("random features: input dimension mismatch");
  const double scale = std::sqrt(2.0 / static_cast<double>(offsets_.size()));
  std::vector<double> out(offsets_.size());
  for (std::size_t j = 0; j < offsets_.size(); ++j) {
    const double* row = weights_.data() + j * input_dim_;
    out[j] = scale * std::cos(std::inner_product(row, row + input_dim_, x.begin(), offsets_[j]));
  }
  return out;
}

// ---------------------------------------------------------------------------

RegressionDatasetEnvironment::RegressionDatasetEnvironment(std::vector<std::vector<double>> features,
                                                           std::vector<double> targets,
                                                           RegressionDatasetOptions options, Rng rng)
    : Environment(NoiseModel::none, std::move(rng)),
      space_(ActionSpace::unit_interval()),
      features_(std::move(features)),
      targets_(std::move(targets)),
      grid_(options.benchmark_grid) {
  if (targets_.empty()) throw std::invalid_argument("regression dataset: no rows");
  if (features_.size() != targets_.size())
    throw std::invalid_argument("regression dataset: feature and target row counts differ");
  for (double y : targets_) require_unit_loss(y, "rescaled target");
  if (options.random_fourier_features) {
    const RandomFourierFeatures rff(features_.front().size(), options.rff_count, options.rff_bandwidth, this->rng());
    for (auto& row : features_) row = rff.transform(row);
  }
  if (options.add_intercept)
    for (auto& row : features_) row.push_back(1.0);
  order_.resize(targets_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (options.shuffle)
    for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[uniform_index(this->rng(), i)]);
}

std::size_t RegressionDatasetEnvironment::context_dim() const { return features_.front().size(); }

Context RegressionDatasetEnvironment::next_context() {
  const std::size_t row = order_[cursor_ % order_.size()];
  ++cursor_;
  return Context{features_[row], row};
}

std::size_t RegressionDatasetEnvironment::row_of(const Context& context) const {
  if (!context.id || *context.id >= targets_.size())
    throw std::invalid_argument("regression dataset: context does not come from this dataset");
  return static_cast<std::size_t>(*context.id);
}

double RegressionDatasetEnvironment::mean_loss(const Context& context, const Action& action) const {
  space_.require(action);
  return std::abs(targets_[row_of(context)] - std::get<Point>(action).value);
}

double RegressionDatasetEnvironment::smooth_benchmark(const Context& context, SmoothingCap h) const {
  const double y = targets_[row_of(context)];
  return smooth_benchmark_interval([y](double a) { return std::abs(y - a); }, h,
                                   std::max(grid_, static_cast<std::size_t>(std::ceil(2.0 / h.value()))));
}

}  // namespace smoothcb
