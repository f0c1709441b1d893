#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

#include "smoothcb/environments.hpp"

namespace smoothcb {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  for (auto& s : cells) {
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    s = first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  }
  return cells;
}

double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": '" + cell +
                             "' is not a number");
  return value;
}

std::ifstream open_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

std::unique_ptr<FiniteArmEnvironment> load_arm_dataset(const std::filesystem::path& path, Rng rng) {
  auto in = open_csv(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "arm_id" || header[1] != "rating")
    throw std::runtime_error(path.string() + ":1: expected header 'arm_id,rating'");
  std::vector<double> means;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2 || cells[0].empty())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 'arm_id,rating'");
    const double rating = parse_number(cells[1], path, line_no);
    if (!(rating >= 0.0 && rating <= 1.0))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": rating " + cells[1] +
                               " outside [0, 1]");
    means.push_back(1.0 - rating);
  }
  if (means.empty()) throw std::runtime_error(path.string() + ": no arms");
  return std::make_unique<FiniteArmEnvironment>(std::move(means), NoiseModel::bernoulli, std::move(rng));
}

std::unique_ptr<RegressionDatasetEnvironment> load_regression_dataset(const std::filesystem::path& path, Rng rng,
                                                                      RegressionDatasetOptions options) {
  auto in = open_csv(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "target")
    throw std::runtime_error(path.string() + ":1: expected header 'f1,...,fd,target'");
  const std::size_t dim = header.size() - 1;

  std::vector<std::vector<double>> features;
  std::vector<double> targets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != dim + 1)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(dim + 1) + " cells, got " + std::to_string(cells.size()));
    std::vector<double> row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = parse_number(cells[j], path, line_no);
    features.push_back(std::move(row));
    targets.push_back(parse_number(cells[dim], path, line_no));
  }
  if (targets.empty()) throw std::runtime_error(path.string() + ": no data rows");

  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& y : targets) y = range > 0.0 ? std::clamp((y - low) / range, 0.0, 1.0) : 0.5;

  return std::make_unique<RegressionDatasetEnvironment>(std::move(features), std::move(targets), options,
                                                        std::move(rng));
}

}  // namespace smoothcb
