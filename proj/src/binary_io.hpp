#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "svp/error.hpp"

namespace svp::detail {

// Little-endian encoder/decoder shared by the grid and energy-table formats.
class ByteWriter {
 public:
  void Raw(std::string_view bytes) { out_.append(bytes); }
  void U8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v) { PutLe(v); }
  void U32(uint32_t v) { PutLe(v); }
  void U64(uint64_t v) { PutLe(v); }
  void F32(float v) { PutLe(std::bit_cast<uint32_t>(v)); }
  void F64(double v) { PutLe(std::bit_cast<uint64_t>(v)); }

  const std::string& bytes() const { return out_; }
  std::string Take() { return std::move(out_); }

 private:
  template <typename T>
  void PutLe(T v) {
    for (size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }

  std::string out_;
};

class ByteReader {
 public:
  // `truncated` is the error raised when the input ends early.
  ByteReader(std::string_view bytes, ErrorCode truncated)
      : in_(bytes), truncated_(truncated) {}

  std::string_view Raw(size_t n) {
    Need(n);
    std::string_view v = in_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  uint8_t U8() { return static_cast<uint8_t>(GetLe<uint8_t>()); }
  uint16_t U16() { return GetLe<uint16_t>(); }
  uint32_t U32() { return GetLe<uint32_t>(); }
  uint64_t U64() { return GetLe<uint64_t>(); }
  float F32() { return std::bit_cast<float>(GetLe<uint32_t>()); }
  double F64() { return std::bit_cast<double>(GetLe<uint64_t>()); }

  size_t remaining() const { return in_.size() - pos_; }

 private:
  void Need(size_t n) {
    if (in_.size() - pos_ < n) {
      throw Error(truncated_, "unexpected end of data");
    }
  }

  template <typename T>
  T GetLe() {
    Need(sizeof(T));
    T v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<uint8_t>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string_view in_;
  size_t pos_ = 0;
  ErrorCode truncated_;
};

std::string ReadFile(const std::string& path);
// Writes to a sibling temp file and renames it into place.
void WriteFileAtomic(const std::string& path, const std::string& bytes);

}  // namespace svp::detail
