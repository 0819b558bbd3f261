#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "k2t/serialize.h"

namespace k2t {

// Fixed-width unsigned integers packed back to back into 64-bit words.
class PackedInts {
 public:
  PackedInts() = default;
  PackedInts(std::span<const std::uint64_t> values, unsigned width);

  std::uint64_t size() const { return size_; }
  unsigned width() const { return width_; }
  std::uint64_t operator[](std::uint64_t i) const;
  std::uint64_t payload_bytes() const { return words_.size() * sizeof(std::uint64_t); }

  void serialize(BinaryWriter& out) const;
  static PackedInts load(BinaryReader& in);

  friend bool operator==(const PackedInts&, const PackedInts&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
  unsigned width_ = 1;
};

// Number of bits needed to write `v` (at least 1).
inline unsigned bit_width_of(std::uint64_t v) {
  unsigned w = 1;
  while (w < 64 && (v >> w) != 0) ++w;
  return w;
}

}  // namespace k2t
