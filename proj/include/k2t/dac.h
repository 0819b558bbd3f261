#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "k2t/bit_sequence.h"
#include "k2t/packed_ints.h"

namespace k2t {

// Directly Addressable Codes.
//
// Each value is cut into b-bit chunks, least significant chunk first, using as
// few chunks as needed (at least one). Level l stores the l-th chunk of every
// value that has one, plus a continuation bitmap with 1 where the value goes
// on to level l+1. access(i) follows the chain with one rank per level.
class DacSequence {
 public:
  struct Level {
    PackedInts chunks;
    BitSequence more;
  };

  DacSequence() = default;
  DacSequence(std::span<const std::uint64_t> values, unsigned chunk_width);

  std::uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  unsigned chunk_width() const { return width_; }
  std::size_t level_count() const { return levels_.size(); }
  const Level& level(std::size_t l) const { return levels_[l]; }

  std::uint64_t access(std::uint64_t i) const;
  std::uint64_t operator[](std::uint64_t i) const { return access(i); }

  // Chunk payload plus continuation bits, excluding rank directories.
  std::uint64_t encoded_bits() const;
  std::uint64_t size_bytes() const;

  void serialize(BinaryWriter& out) const;
  static DacSequence load(BinaryReader& in);

 private:
  std::vector<Level> levels_;
  std::uint64_t size_ = 0;
  unsigned width_ = 1;
};

}  // namespace k2t
