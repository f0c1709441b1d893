// Flat key=value configuration files.
//
//   # comment
//   horizon = 100000
//   seed = 7
//
// Keys are field names verbatim. Typed getters record problems instead of
// throwing so that every error in a file can be reported at once.
#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smoothcb/core.hpp"

namespace smoothcb {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::uint64_t> get_uint(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  std::string string_or(const std::string& key, std::string fallback) const;
  double double_or(const std::string& key, double fallback) const;
  std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) const;
  bool bool_or(const std::string& key, bool fallback) const;

  /// Keys present in the file that no getter has asked for.
  std::vector<std::string> unused_keys() const;

  const std::vector<std::string>& problems() const { return problems_; }
  void add_problem(std::string problem) const { problems_.push_back(std::move(problem)); }

  /// Canonical "key=value\n" rendering, sorted by key.
  std::string canonical_text() const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> touched_;
  mutable std::vector<std::string> problems_;
};

/// Reads the RunConfig fields (horizon, seed, smoothing, gamma_override,
/// regsq_estimate, corral_eta, base_count_override). Problems are recorded on
/// `config`; the returned value is only meaningful when there are none.
RunConfig read_run_config(const KeyValueConfig& config);

/// Loads and validates a RunConfig file. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace smoothcb
