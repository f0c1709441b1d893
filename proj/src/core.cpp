#include "smoothcb/core.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace smoothcb {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng seeded_rng(std::uint64_t seed, std::string_view label) {
  std::uint64_t state = seed ^ fnv1a(label);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(fnv1a(label) >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

std::string to_string(const Action& action) {
  char buffer[32];
  const auto end = std::visit(
      [&](const auto& a) {
        if constexpr (std::is_same_v<std::decay_t<decltype(a)>, Arm>)
          return std::to_chars(buffer, buffer + sizeof buffer, a.index).ptr;
        else
          return std::to_chars(buffer, buffer + sizeof buffer, a.value).ptr;
      },
      action);
  return std::string(buffer, end);
}

ActionSpace ActionSpace::finite(std::size_t count) {
  if (count == 0) throw std::invalid_argument("ActionSpace: finite space needs at least one arm");
  return ActionSpace(count);
}

ActionSpace ActionSpace::unit_interval() { return ActionSpace(0); }

bool ActionSpace::contains(const Action& action) const noexcept {
  if (const auto* arm = std::get_if<Arm>(&action)) return is_finite() && arm->index < count_;
  const double v = std::get<Point>(action).value;
  return !is_finite() && v >= 0.0 && v <= 1.0;
}

void ActionSpace::require(const Action& action) const {
  if (!contains(action))
    throw std::invalid_argument("action " + to_string(action) + " does not belong to the " +
                                (is_finite() ? "finite" : "interval") + " action space");
}

Action ActionSpace::sample_base(Rng& rng) const {
  if (is_finite()) return Arm{uniform_index(rng, count_)};
  return Point{uniform01(rng)};
}

SmoothingCap::SmoothingCap(double h) : h_(h) {
  if (!(h > 0.0 && h <= 1.0))
    throw std::invalid_argument("SmoothingCap: h must lie in (0, 1], got " + std::to_string(h));
}

void require_unit_loss(double loss, std::string_view what) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": loss " << loss << " outside [0, 1]";
    throw LossRangeError(msg.str());
  }
}

void RunConfig::validate() const {
  std::vector<std::string> problems;
  if (horizon < 1) problems.emplace_back("horizon must be >= 1");
  if (!(regsq_estimate > 0.0)) problems.emplace_back("regsq_estimate must be > 0");
  if (gamma_override && !(*gamma_override > 0.0)) problems.emplace_back("gamma_override must be > 0");
  if (corral_eta && !(*corral_eta > 0.0 && *corral_eta <= 1.0))
    problems.emplace_back("corral_eta must lie in (0, 1]");
  if (base_count_override && *base_count_override < 1)
    problems.emplace_back("base_count_override must be >= 1");
  if (problems.empty()) return;
  std::string msg = "invalid run configuration:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ConfigError(msg);
}

}  // namespace smoothcb
