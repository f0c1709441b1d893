// Little-endian blob encoding for oracle checkpoints.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smoothcb::detail {

inline constexpr char kBlobMagic[4] = {'S', 'C', 'B', 'O'};
inline constexpr std::uint32_t kBlobVersion = 1;

enum class OracleKind : std::uint8_t { tabular = 1, aggregation = 2, parametric = 3 };

class BlobWriter {
 public:
  explicit BlobWriter(OracleKind kind) {
    out_.append(kBlobMagic, sizeof kBlobMagic);
    u32(kBlobVersion);
    out_.push_back(static_cast<char>(kind));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void doubles(const std::vector<double>& values) {
    u64(values.size());
    for (double v : values) f64(v);
  }
  std::string finish() && { return std::move(out_); }

 private:
  std::string out_;
};

class BlobReader {
 public:
  BlobReader(std::string_view blob, OracleKind expected) : in_(blob) {
    if (in_.size() < 9 || std::memcmp(in_.data(), kBlobMagic, 4) != 0)
      throw std::invalid_argument("oracle checkpoint: bad magic");
    pos_ = 4;
    if (u32() != kBlobVersion) throw std::invalid_argument("oracle checkpoint: unsupported version");
    if (static_cast<OracleKind>(in_[pos_++]) != expected)
      throw std::invalid_argument("oracle checkpoint: written by a different oracle kind");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::vector<double> doubles() {
    const std::uint64_t n = u64();
    if (n > (in_.size() - pos_) / 8) throw std::invalid_argument("oracle checkpoint: truncated");
    std::vector<double> values(n);
    for (auto& v : values) v = f64();
    return values;
  }
  void expect_end() const {
    if (pos_ != in_.size()) throw std::invalid_argument("oracle checkpoint: trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw std::invalid_argument("oracle checkpoint: truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace smoothcb::detail
