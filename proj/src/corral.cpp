#include "smoothcb/corral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smoothcb {

std::vector<SmoothingCap> grid_init(std::uint64_t horizon) {
  if (horizon < 2) throw std::invalid_argument("grid_init: horizon must be >= 2");
  std::size_t levels = 0;
  while ((std::uint64_t{1} << levels) < horizon) ++levels;
  std::vector<SmoothingCap> grid;
  grid.reserve(levels);
  for (std::size_t b = 1; b <= levels; ++b) grid.emplace_back(std::ldexp(1.0, -static_cast<int>(b)));
  return grid;
}

std::vector<double> gamma_h_grid(double lo, double hi, std::size_t count) {
  if (count == 0 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("gamma_h_grid: need count >= 1 and 0 < lo <= hi");
  std::vector<double> grid(count, lo);
  for (std::size_t i = 1; i < count; ++i)
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  if (count > 1) grid.back() = hi;
  return grid;
}

double base_gamma(std::uint64_t horizon, SmoothingCap h, double rho, double regsq) {
  if (!(rho >= 1.0)) throw std::invalid_argument("base_gamma: rho must be >= 1");
  if (horizon == 0 || !(regsq > 0.0)) throw std::invalid_argument("base_gamma: arguments must be positive");
  return std::sqrt(8.0 * static_cast<double>(horizon) / (h.value() * rho * regsq));
}

// ---------------------------------------------------------------------------

StableBase::StableBase(SmoothingCap h, std::uint64_t horizon, double regsq, double gamma_h,
                       std::unique_ptr<RegressionOracle> oracle, ActionSpace space, Rng rng)
    : h_(h),
      horizon_(horizon),
      regsq_(regsq),
      gamma_h_(gamma_h),
      oracle_(std::move(oracle)),
      space_(space),
      rng_(std::move(rng)) {
  if (!oracle_) throw std::invalid_argument("StableBase: null oracle");
}

StableBase::StableBase(SmoothingCap h, std::uint64_t horizon, double regsq, std::unique_ptr<RegressionOracle> oracle,
                       ActionSpace space, Rng rng)
    : StableBase(h, horizon, regsq, 0.0, std::move(oracle), space, std::move(rng)) {
  if (horizon == 0 || !(regsq > 0.0)) throw std::invalid_argument("StableBase: horizon and regsq must be positive");
}

StableBase StableBase::with_gamma_h(double gamma_h, std::unique_ptr<RegressionOracle> oracle, ActionSpace space,
                                    Rng rng) {
  if (!(gamma_h > 0.0)) throw std::invalid_argument("StableBase: gamma*h must be > 0");
  return StableBase(SmoothingCap(1.0), 0, 0.0, gamma_h, std::move(oracle), space, std::move(rng));
}

double StableBase::gamma(double rho) const {
  if (gamma_h_ > 0.0) {
    if (!(rho >= 1.0)) throw std::invalid_argument("StableBase: rho must be >= 1");
    return gamma_h_ / std::sqrt(rho);
  }
  return base_gamma(horizon_, h_, rho, regsq_);
}

StableBase::Step StableBase::step(const Context& context, double q, double rho, const LossCallback& loss) {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("StableBase: q must lie in (0, 1]");
  const double g = gamma(rho);
  const IgwParams params = make_igw_params(*oracle_, context, space_, h_, g);
  Action action = rejection_sample(*oracle_, context, space_, params, rng_);
  const double observed = loss(action);
  require_unit_loss(observed, "loss callback");
  const double weight = g / q;
  oracle_->update(WeightedExample{weight, context, action, observed});
  return Step{action, observed, g, weight};
}

// ---------------------------------------------------------------------------

CorralMaster::CorralMaster(std::size_t bases, std::uint64_t horizon, double eta) : horizon_(horizon) {
  if (bases == 0) throw std::invalid_argument("CorralMaster: needs at least one base");
  if (horizon < 2) throw std::invalid_argument("CorralMaster: horizon must be >= 2");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("CorralMaster: eta must lie in (0, 1]");
  const double b = static_cast<double>(bases);
  beta_ = std::exp(1.0 / std::log(static_cast<double>(horizon)));
  q_.assign(bases, 1.0 / b);
  rho_.assign(bases, b);
  eta_.assign(bases, eta);
  thresholds_.assign(bases, 2.0 * b);
}

std::size_t CorralMaster::sample(Rng& rng) const {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t b = 0; b + 1 < q_.size(); ++b) {
    cumulative += q_[b];
    if (u < cumulative) return b;
  }
  return q_.size() - 1;
}

void CorralMaster::update(std::size_t chosen, double loss) {
  require_unit_loss(loss, "CORRAL update");
  if (chosen >= q_.size()) throw std::invalid_argument("CORRAL update: base index out of range");
  const std::size_t n = q_.size();
  if (n == 1) return;

  std::vector<double> estimate(n, 0.0);
  estimate[chosen] = loss / q_[chosen];

  // Find lambda with sum_b 1 / (1/q_b + eta_b (estimate_b - lambda)) = 1.
  // The sum increases in lambda up to its first pole, so anything past a
  // nonpositive denominator counts as "too large".
  auto mass = [&](double lambda) {
    double total = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double denom = 1.0 / q_[b] + eta_[b] * (estimate[b] - lambda);
      if (denom <= 0.0) return std::numeric_limits<double>::infinity();
      total += 1.0 / denom;
    }
    return total;
  };
  double lo = *std::min_element(estimate.begin(), estimate.end());
  double hi = *std::max_element(estimate.begin(), estimate.end());
  double lambda = lo;
  if (hi > lo) {
    bool converged = false;
    for (int it = 0; it < kBisectionMaxIterations; ++it) {
      lambda = 0.5 * (lo + hi);
      const double total = mass(lambda);
      if (std::abs(total - 1.0) <= kBisectionTolerance || hi - lo <= kBisectionTolerance * std::max(1.0, hi)) {
        converged = true;
        break;
      }
      (total > 1.0 ? hi : lo) = lambda;
    }
    if (!converged) throw std::runtime_error("CORRAL update: normalization did not converge");
    if (!std::isfinite(mass(lambda))) lambda = lo;
  }

  double total = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    q_[b] = 1.0 / (1.0 / q_[b] + eta_[b] * (estimate[b] - lambda));
    total += q_[b];
  }
  const double mix = 1.0 / static_cast<double>(horizon_);
  const double uniform = 1.0 / static_cast<double>(n);
  double mixed_total = 0.0;
  for (double& p : q_) {
    p = (1.0 - mix) * (p / total) + mix * uniform;
    mixed_total += p;
  }
  for (std::size_t b = 0; b < n; ++b) {
    q_[b] /= mixed_total;
    rho_[b] = std::max(rho_[b], 1.0 / q_[b]);
    if (1.0 / q_[b] > thresholds_[b]) {
      thresholds_[b] = 2.0 / q_[b];
      eta_[b] *= beta_;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<StableBase> make_bases(const ActionSpace& space, const OracleFactory& make_oracle,
                                   const AdaptiveOptions& options) {
  std::vector<StableBase> bases;
  auto stream = [&](std::size_t b) { return seeded_rng(options.seed, "base-" + std::to_string(b)); };
  if (options.gamma_h_products) {
    const auto& products = *options.gamma_h_products;
    std::size_t count = products.size();
    if (options.base_count_override) count = std::min(count, *options.base_count_override);
    for (std::size_t b = 0; b < count; ++b)
      bases.push_back(StableBase::with_gamma_h(products[b], make_oracle(b), space, stream(b)));
  } else {
    auto grid = grid_init(options.horizon);
    if (options.base_count_override) {
      if (*options.base_count_override > grid.size()) {
        for (std::size_t b = grid.size() + 1; b <= *options.base_count_override; ++b)
          grid.emplace_back(std::ldexp(1.0, -static_cast<int>(b)));
      }
      grid.resize(*options.base_count_override, grid.front());
    }
    for (std::size_t b = 0; b < grid.size(); ++b)
      bases.emplace_back(grid[b], options.horizon, options.regsq, make_oracle(b), space, stream(b));
  }
  if (bases.empty()) throw std::invalid_argument("adaptive learner: no base learners");
  return bases;
}

}  // namespace

AdaptiveLearner::AdaptiveLearner(const ActionSpace& space, const OracleFactory& make_oracle,
                                 const AdaptiveOptions& options)
    : space_(space),
      bases_(make_bases(space, make_oracle, options)),
      master_(bases_.size(), options.horizon, options.eta),
      rng_(seeded_rng(options.seed, "corral")) {}

RoundLog AdaptiveLearner::step(const Context& context, const LossCallback& loss) {
  const std::size_t chosen = master_.sample(rng_);
  last_q_ = master_.q()[chosen];
  last_rho_ = master_.rho()[chosen];
  last_step_ = bases_[chosen].step(context, last_q_, last_rho_, loss);
  master_.update(chosen, last_step_->loss);
  ++t_;
  RoundLog log;
  log.t = t_;
  log.base_index = chosen;
  log.action = last_step_->action;
  log.realized_loss = last_step_->loss;
  return log;
}

std::vector<RoundLog> run_adaptive(AdaptiveLearner& learner, Environment& env, std::uint64_t horizon,
                                   const RoundObserver& observer) {
  if (!(learner.space() == env.space())) throw std::invalid_argument("run_adaptive: learner and environment spaces differ");
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

std::vector<RoundLog> run_adaptive(const ActionSpace& space, const OracleFactory& make_oracle, Environment& env,
                                   const AdaptiveOptions& options, const RoundObserver& observer) {
  AdaptiveLearner learner(space, make_oracle, options);
  return run_adaptive(learner, env, options.horizon, observer);
}

}  // namespace smoothcb
