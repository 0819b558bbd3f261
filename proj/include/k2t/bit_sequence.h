#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "k2t/serialize.h"

namespace k2t {

// Growable packed bitstring used to assemble a BitSequence.
class BitBuilder {
 public:
  void push_back(bool bit) {
    if ((size_ & 63) == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
    ++size_;
  }
  // Appends the low `width` bits of `value`, least significant first.
  void append(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) push_back((value >> i) & 1);
  }
  std::uint64_t size() const { return size_; }

  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
};

// Immutable bitstring with rank, select and access.
//
// Positions are 0-based. rank(bit, i) counts occurrences in [0, i], inclusive.
// select(bit, j) returns the position of the j-th occurrence (j is 1-based);
// select(bit, 0) returns -1 so that "select + 1" is the start of a 0-based
// range.
//
// Rank directory: one counter per 512-bit superblock, relative to a 2^32-bit
// hyperblock that carries its own 64-bit absolute counter. Within a superblock
// the remaining words are popcounted. The directory is never serialized.
class BitSequence {
 public:
  static constexpr std::uint64_t kSuperblockBits = 512;
  static constexpr std::uint64_t kWordsPerSuperblock = kSuperblockBits / 64;
  static constexpr unsigned kSuperblocksPerHyperLog = 23;  // 2^32 bits / 512

  BitSequence() { build_directory(); }
  explicit BitSequence(const std::vector<bool>& bits);
  BitSequence(std::vector<std::uint64_t> words, std::uint64_t size);
  explicit BitSequence(BitBuilder&& builder)
      : BitSequence(std::move(builder.words()), builder.size()) {}

  std::uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::uint64_t ones() const { return ones_; }

  bool access(std::uint64_t i) const;
  bool operator[](std::uint64_t i) const { return access(i); }

  std::uint64_t rank1(std::uint64_t i) const;
  std::uint64_t rank0(std::uint64_t i) const;
  std::uint64_t rank(bool bit, std::uint64_t i) const { return bit ? rank1(i) : rank0(i); }

  std::int64_t select1(std::uint64_t j) const;
  std::int64_t select0(std::uint64_t j) const;
  std::int64_t select(bool bit, std::uint64_t j) const { return bit ? select1(j) : select0(j); }

  // Unchecked fast paths for traversal code that already validated `i`.
  bool get(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  std::uint64_t rank1_unchecked(std::uint64_t i) const;

  std::span<const std::uint64_t> words() const { return words_; }

  // Bytes used by the packed payload and by the rank directory.
  std::uint64_t payload_bytes() const { return words_.size() * sizeof(std::uint64_t); }
  std::uint64_t directory_bytes() const {
    return superblocks_.size() * sizeof(std::uint32_t) + hyperblocks_.size() * sizeof(std::uint64_t);
  }

  void serialize(BinaryWriter& out) const;
  static BitSequence load(BinaryReader& in);

  friend bool operator==(const BitSequence& a, const BitSequence& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void build_directory();
  std::uint64_t ones_before_superblock(std::uint64_t sb) const {
    return hyperblocks_[sb >> kSuperblocksPerHyperLog] + superblocks_[sb];
  }

  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  std::vector<std::uint32_t> superblocks_;
  std::vector<std::uint64_t> hyperblocks_;
};

}  // namespace k2t
