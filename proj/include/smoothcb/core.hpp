// Shared domain types for the smooth-regret contextual bandit library.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smoothcb {

/// Thrown when a user-facing configuration is invalid.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a loss value crosses an API boundary outside [0, 1].
class LossRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Randomness

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a(std::string_view text);

using Rng = std::mt19937_64;

/// Deterministic generator for the stream `label` under `seed`. Equal
/// (seed, label) pairs give identical streams; different labels give
/// unrelated streams, so components never perturb each other's draws.
Rng seeded_rng(std::uint64_t seed, std::string_view label);

/// Uniform draw in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform index in [0, n). Requires n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

bool bernoulli(Rng& rng, double p);

// ---------------------------------------------------------------------------
// Actions

/// A discrete arm, zero-based.
struct Arm {
  std::size_t index = 0;
  friend bool operator==(const Arm&, const Arm&) = default;
};

/// A point of the unit interval.
struct Point {
  double value = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using Action = std::variant<Arm, Point>;

std::string to_string(const Action& action);

/// Action set with its base probability measure: uniform over K arms or
/// Lebesgue measure on [0, 1]. Also serves as the sampling oracle.
class ActionSpace {
 public:
  static ActionSpace finite(std::size_t count);
  static ActionSpace unit_interval();

  bool is_finite() const noexcept { return count_ > 0; }
  /// Number of arms; zero for the interval.
  std::size_t size() const noexcept { return count_; }

  bool contains(const Action& action) const noexcept;
  /// Throws std::invalid_argument when `action` does not belong here.
  void require(const Action& action) const;

  /// One draw from the base measure.
  Action sample_base(Rng& rng) const;

  friend bool operator==(const ActionSpace&, const ActionSpace&) = default;

 private:
  explicit ActionSpace(std::size_t count) : count_(count) {}
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------

struct Context {
  std::vector<double> features;
  std::optional<std::uint64_t> id;
};

/// Smoothness level h in (0, 1]: kernels may put density at most 1/h on
/// any action relative to the base measure.
class SmoothingCap {
 public:
  explicit SmoothingCap(double h);
  double value() const noexcept { return h_; }
  friend bool operator==(const SmoothingCap&, const SmoothingCap&) = default;

 private:
  double h_;
};

/// Throws LossRangeError unless 0 <= loss <= 1.
void require_unit_loss(double loss, std::string_view what);

struct RunConfig {
  std::uint64_t horizon = 1;
  std::uint64_t seed = 0;
  std::optional<SmoothingCap> smoothing;
  std::optional<double> gamma_override;
  double regsq_estimate = 1.0;
  std::optional<double> corral_eta;
  std::optional<std::size_t> base_count_override;

  /// Throws ConfigError listing every violated invariant.
  void validate() const;
};

struct RoundLog {
  std::uint64_t t = 0;
  std::optional<std::size_t> base_index;
  Action action;
  double realized_loss = 0.0;
  std::optional<double> mean_loss;
  std::optional<double> benchmark;
};

}  // namespace smoothcb
