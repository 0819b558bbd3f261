#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "k2t/bit_sequence.h"
#include "k2t/dac.h"

namespace k2t {

// Level schedule of a k2-tree. The first `upper_levels` levels below the root
// split by k_upper, the following ones by k_lower, and recursion stops at
// leaf_size x leaf_size blocks. The root's children form level 1.
struct K2Config {
  std::uint32_t k_upper = 4;
  std::uint32_t upper_levels = 5;
  std::uint32_t k_lower = 2;
  std::uint32_t leaf_size = 8;

  // Uniform k at every level with leaves of side `leaf`.
  static K2Config uniform(std::uint32_t k, std::uint32_t leaf) { return {k, 0, k, leaf}; }

  void validate() const;
  friend bool operator==(const K2Config&, const K2Config&) = default;
};

struct Cell {
  std::uint32_t row;
  std::uint32_t col;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct TraversalStats {
  std::uint64_t nodes = 0;  // T bits and leaf blocks inspected
};

// One node of the conceptual tree. `pos` indexes T; the virtual root has
// level -1. The node covers rows [row, row+side) and cols [col, col+side).
struct NodeCursor {
  static constexpr std::uint64_t kRootPos = ~std::uint64_t{0};
  std::uint64_t pos = kRootPos;
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  std::uint64_t side = 0;
  int level = -1;
  bool bit = true;
};

// Compressed n' x n' binary matrix.
//
// T holds the internal levels in level order. Nodes of the last T level cover
// leaf_size x leaf_size blocks; every such node with bit 1 owns one leaf word
// (bit r*leaf_size + c is cell (r, c) of the block). Leaf words are renumbered
// by descending frequency and the codes are stored with DACs (b = 8).
class K2Tree {
 public:
  K2Tree() : K2Tree(std::span<const Cell>{}, 1, 1, K2Config{}) {}
  K2Tree(std::span<const Cell> cells, std::uint64_t rows, std::uint64_t cols, const K2Config& config);

  // Padded side for a logical side under `config`.
  static std::uint64_t padded_side(std::uint64_t logical_side, const K2Config& config);

  const K2Config& config() const { return config_; }
  std::uint64_t n_prime() const { return n_prime_; }
  std::uint64_t cell_count() const { return cell_count_; }
  bool empty() const { return cell_count_ == 0; }
  std::size_t height() const { return ks_.size(); }
  std::uint32_t level_k(std::size_t level) const { return ks_[level]; }
  std::uint64_t level_side(std::size_t level) const { return sides_[level]; }
  std::uint64_t level_start(std::size_t level) const { return starts_[level]; }
  const BitSequence& tree_bits() const { return t_; }
  const DacSequence& leaf_codes() const { return l_; }
  const std::vector<std::uint64_t>& leaf_vocabulary() const { return leaf_vocab_; }
  std::uint64_t leaf_count() const { return l_.size(); }

  bool cell(std::uint64_t row, std::uint64_t col, TraversalStats* stats = nullptr) const;
  std::vector<std::uint32_t> direct_neighbors(std::uint64_t row, TraversalStats* stats = nullptr) const;
  std::vector<std::uint32_t> reverse_neighbors(std::uint64_t col, TraversalStats* stats = nullptr) const;
  // Inclusive rectangle, results in (row, col) order.
  std::vector<Cell> range(std::uint64_t row_lo, std::uint64_t row_hi, std::uint64_t col_lo,
                          std::uint64_t col_hi, TraversalStats* stats = nullptr) const;
  std::vector<Cell> all(TraversalStats* stats = nullptr) const;

  // Coordinated-descent hooks.
  NodeCursor root() const;
  bool is_leaf_block(const NodeCursor& c) const { return c.level == static_cast<int>(ks_.size()) - 1; }
  // Appends the children of an internal node whose bit is 1.
  void children(const NodeCursor& c, std::vector<NodeCursor>& out) const;
  std::vector<NodeCursor> descend(const NodeCursor& c) const;
  // Position of the first child of `c` in the concatenation T:L, counted in
  // bits (leaf blocks count leaf_size^2 bits each).
  std::uint64_t child_offset(const NodeCursor& c) const;
  std::uint64_t leaf_index(const NodeCursor& c) const;
  std::uint64_t leaf_word(const NodeCursor& c) const;
  std::uint64_t leaf_word_at(std::uint64_t index) const { return leaf_vocab_[l_.access(index)]; }

  // Checks the structural invariants; throws StateError on the first violation.
  void audit() const;

  void serialize(BinaryWriter& out) const;
  static K2Tree load(BinaryReader& in);

 private:
  struct Raw {};
  explicit K2Tree(Raw) {}
  void init_geometry(std::uint64_t logical_side);
  void init_level_starts();
  template <typename Visit>
  void traverse(std::uint64_t row_lo, std::uint64_t row_hi, std::uint64_t col_lo, std::uint64_t col_hi,
                TraversalStats* stats, Visit&& visit) const;

  K2Config config_;
  std::uint64_t n_prime_ = 0;
  std::uint64_t cell_count_ = 0;
  std::vector<std::uint32_t> ks_;     // per T level
  std::vector<std::uint64_t> sides_;  // node side per T level
  std::vector<std::uint64_t> starts_;       // first T position per level, plus |T|
  std::vector<std::uint64_t> ones_before_;  // 1s in T before each level
  BitSequence t_;
  DacSequence l_;
  std::vector<std::uint64_t> leaf_vocab_;
};

}  // namespace k2t
