#include <cmath>
#include <numeric>

#include "binary_io.hpp"
#include "smoothcb/regression_oracles.hpp"

namespace smoothcb {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

ParametricOracle::ParametricOracle(std::size_t feature_dim, ParametricOptions options)
    : options_(options) {
  if (!(options_.step_size > 0.0)) throw std::invalid_argument("ParametricOracle: step size must be > 0");
  params_.v.assign(feature_dim, 0.0);
  params_.w = options_.initial_w;
  params_.xi = options_.initial_xi;
}

void ParametricOracle::set_params(ParametricParams params) {
  if (params.v.size() != params_.v.size())
    throw std::invalid_argument("ParametricOracle: parameter dimension mismatch");
  params_ = std::move(params);
}

double ParametricOracle::point_of(const Action& action) const {
  const auto* point = std::get_if<Point>(&action);
  if (!point) throw std::invalid_argument("ParametricOracle: expects interval actions");
  return point->value;
}

double ParametricOracle::predict(const Context& context, const Action& action) const {
  if (context.features.size() != params_.v.size())
    throw std::invalid_argument("ParametricOracle: context dimension mismatch");
  const double a = point_of(action);
  const double center =
      sigmoid(std::inner_product(params_.v.begin(), params_.v.end(), context.features.begin(), 0.0));
  return sigmoid(std::abs(params_.w) * std::abs(center - a) + params_.xi);
}

Action ParametricOracle::argmin_action(const Context& context, const ActionSpace& space) const {
  if (space.is_finite()) throw std::invalid_argument("ParametricOracle: expects the unit interval");
  if (context.features.size() != params_.v.size())
    throw std::invalid_argument("ParametricOracle: context dimension mismatch");
  return Point{
      sigmoid(std::inner_product(params_.v.begin(), params_.v.end(), context.features.begin(), 0.0))};
}

ParametricGradient ParametricOracle::gradient(const WeightedExample& example) const {
  const auto& x = example.context.features;
  if (x.size() != params_.v.size())
    throw std::invalid_argument("ParametricOracle: context dimension mismatch");
  const double a = point_of(example.action);
  const double center = sigmoid(std::inner_product(params_.v.begin(), params_.v.end(), x.begin(), 0.0));
  const double z = center - a;
  const double f = sigmoid(std::abs(params_.w) * std::abs(z) + params_.xi);
  // d/du of weight * (sigmoid(u) - loss)^2
  const double outer = 2.0 * example.weight * (f - example.loss) * f * (1.0 - f);

  ParametricGradient g;
  g.xi = outer;
  g.w = outer * sign(params_.w) * std::abs(z);
  const double dv = outer * std::abs(params_.w) * sign(z) * center * (1.0 - center);
  g.v.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g.v[i] = dv * x[i];
  return g;
}

void ParametricOracle::apply_update(const WeightedExample& example) {
  const ParametricGradient g = gradient(example);
  ++updates_;
  double step = options_.step_size;
  if (options_.inverse_sqrt_decay) step /= std::sqrt(static_cast<double>(updates_));
  for (std::size_t i = 0; i < params_.v.size(); ++i) params_.v[i] -= step * g.v[i];
  params_.w -= step * g.w;
  params_.xi -= step * g.xi;
}

std::string ParametricOracle::save_state() const {
  detail::BlobWriter out(detail::OracleKind::parametric);
  out.doubles(params_.v);
  out.f64(params_.w);
  out.f64(params_.xi);
  out.u64(updates_);
  out.f64(options_.step_size);
  out.u32(options_.inverse_sqrt_decay ? 1 : 0);
  return std::move(out).finish();
}

void ParametricOracle::load_state(std::string_view blob) {
  detail::BlobReader in(blob, detail::OracleKind::parametric);
  ParametricParams params;
  params.v = in.doubles();
  params.w = in.f64();
  params.xi = in.f64();
  const std::uint64_t updates = in.u64();
  const double step = in.f64();
  const bool decay = in.u32() != 0;
  in.expect_end();
  if (params.v.size() != params_.v.size())
    throw std::invalid_argument("ParametricOracle: checkpoint has a different feature dimension");
  params_ = std::move(params);
  updates_ = updates;
  options_.step_size = step;
  options_.inverse_sqrt_decay = decay;
}

std::unique_ptr<RegressionOracle> ParametricOracle::clone() const {
  return std::make_unique<ParametricOracle>(*this);
}

}  // namespace smoothcb
