#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "smoothcb/regression_oracles.hpp"

namespace testing {

// Predicts a fixed table per arm; learns nothing.
class FixedOracle final : public smoothcb::RegressionOracle {
 public:
  explicit FixedOracle(std::vector<double> values) : values_(std::move(values)) {}
  double predict(const smoothcb::Context&, const smoothcb::Action& a) const override {
    return values_.at(std::get<smoothcb::Arm>(a).index);
  }
  std::string save_state() const override { return {}; }
  void load_state(std::string_view) override {}
  std::unique_ptr<smoothcb::RegressionOracle> clone() const override { return std::make_unique<FixedOracle>(values_); }
  int updates = 0;

 private:
  void apply_update(const smoothcb::WeightedExample&) override { ++updates; }
  std::vector<double> values_;
};

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("smoothcb-" + name + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
