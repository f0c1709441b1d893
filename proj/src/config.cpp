#include "smoothcb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace smoothcb {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      config.add_problem("line " + std::to_string(line_no) + ": expected key=value");
      continue;
    }
    std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) {
      config.add_problem("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (config.entries_.count(key))
      config.add_problem("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    config.entries_[key] = std::move(value);
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in);
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

void KeyValueConfig::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
  touched_.insert(key);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto text = get_string(key);
  if (!text) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc() || ptr != text->data() + text->size()) {
    add_problem("key '" + key + "': '" + *text + "' is not a number");
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> KeyValueConfig::get_uint(const std::string& key) const {
  const auto text = get_string(key);
  if (!text) return std::nullopt;
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc() || ptr != text->data() + text->size()) {
    add_problem("key '" + key + "': '" + *text + "' is not a nonnegative integer");
    return std::nullopt;
  }
  return value;
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
  const auto text = get_string(key);
  if (!text) return std::nullopt;
  if (*text == "true" || *text == "1" || *text == "yes") return true;
  if (*text == "false" || *text == "0" || *text == "no") return false;
  add_problem("key '" + key + "': '" + *text + "' is not a boolean");
  return std::nullopt;
}

std::string KeyValueConfig::string_or(const std::string& key, std::string fallback) const {
  return get_string(key).value_or(std::move(fallback));
}
double KeyValueConfig::double_or(const std::string& key, double fallback) const {
  return get_double(key).value_or(fallback);
}
std::uint64_t KeyValueConfig::uint_or(const std::string& key, std::uint64_t fallback) const {
  return get_uint(key).value_or(fallback);
}
bool KeyValueConfig::bool_or(const std::string& key, bool fallback) const {
  return get_bool(key).value_or(fallback);
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> unused;
  for (const auto& [key, value] : entries_)
    if (!touched_.count(key)) unused.push_back(key);
  return unused;
}

std::string KeyValueConfig::canonical_text() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + "=" + value + "\n";
  return out;
}

RunConfig read_run_config(const KeyValueConfig& config) {
  RunConfig run;
  if (const auto t = config.get_uint("horizon"))
    run.horizon = *t;
  else if (!config.has("horizon"))
    config.add_problem("missing required key 'horizon'");
  run.seed = config.uint_or("seed", 0);
  if (const auto h = config.get_double("smoothing")) {
    if (*h > 0.0 && *h <= 1.0)
      run.smoothing = SmoothingCap(*h);
    else
      config.add_problem("smoothing must lie in (0, 1]");
  }
  run.gamma_override = config.get_double("gamma_override");
  run.regsq_estimate = config.double_or("regsq_estimate", run.regsq_estimate);
  run.corral_eta = config.get_double("corral_eta");
  if (const auto b = config.get_uint("base_count_override")) run.base_count_override = *b;
  try {
    run.validate();
  } catch (const ConfigError& e) {
    std::istringstream lines(e.what());
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) config.add_problem(trim(line).substr(2));
  }
  return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto config = KeyValueConfig::load(path);
  RunConfig run = read_run_config(config);
  for (const auto& key : config.unused_keys()) config.add_problem("unknown key '" + key + "'");
  if (!config.problems().empty()) {
    std::string msg = "invalid run configuration in " + path.string() + ":";
    for (const auto& p : config.problems()) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
  return run;
}

}  // namespace smoothcb
