#pragma once

// Brute-force reference implementations shared by the unit and acceptance
// suites. Nothing here calls into the structures under test except to read
// their answers.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "k2t/bit_sequence.h"
#include "k2t/k2tree.h"

namespace oracle {

inline std::vector<bool> random_bits(std::mt19937_64& rng, std::size_t n, double p = -1.0) {
  if (p < 0) p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::bernoulli_distribution coin(p);
  std::vector<bool> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = coin(rng);
  return bits;
}

// Compares every rank/select/access answer against a prefix scan. Returns an
// empty string on success, otherwise a description of the first mismatch.
inline std::string check_bit_sequence(const std::vector<bool>& bits, const k2t::BitSequence& seq) {
  std::ostringstream err;
  if (seq.size() != bits.size()) return "size mismatch";
  std::uint64_t ones = 0, zeros = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) ++ones;
    else ++zeros;
    if (seq.access(i) != bits[i]) return (err << "access(" << i << ")", err.str());
    if (seq.rank1(i) != ones) return (err << "rank1(" << i << ")", err.str());
    if (seq.rank0(i) != zeros) return (err << "rank0(" << i << ")", err.str());
    if (bits[i] && seq.select1(ones) != static_cast<std::int64_t>(i)) return (err << "select1(" << ones << ")", err.str());
    if (!bits[i] && seq.select0(zeros) != static_cast<std::int64_t>(i)) return (err << "select0(" << zeros << ")", err.str());
    if (bits[i] && seq.select1(seq.rank1(i)) != static_cast<std::int64_t>(i)) return "select1(rank1(i)) != i";
  }
  if (seq.ones() != ones) return "ones() mismatch";
  if (seq.select1(0) != -1) return "select1(0) sentinel";
  return "";
}

// Dense boolean matrix used as the k2-tree oracle.
struct DenseMatrix {
  std::uint64_t rows = 0, cols = 0;
  std::vector<char> cells;

  DenseMatrix(std::uint64_t r, std::uint64_t c) : rows(r), cols(c), cells(r * c, 0) {}
  bool at(std::uint64_t r, std::uint64_t c) const { return r < rows && c < cols && cells[r * cols + c]; }
  void set(std::uint64_t r, std::uint64_t c) { cells[r * cols + c] = 1; }

  std::vector<k2t::Cell> list() const {
    std::vector<k2t::Cell> out;
    for (std::uint64_t r = 0; r < rows; ++r)
      for (std::uint64_t c = 0; c < cols; ++c)
        if (at(r, c)) out.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)});
    return out;
  }
};

inline DenseMatrix random_matrix(std::mt19937_64& rng, std::uint64_t rows, std::uint64_t cols, double density) {
  DenseMatrix m(rows, cols);
  std::bernoulli_distribution coin(density);
  for (std::uint64_t r = 0; r < rows; ++r)
    for (std::uint64_t c = 0; c < cols; ++c)
      if (coin(rng)) m.set(r, c);
  return m;
}

// The 16 x 16 example matrix whose k2-tree (k = 2, 2 x 2 leaves) is
// T = 1011 1101 0100 1000 1100 1000 0001 0101 1110.
inline std::vector<k2t::Cell> sample16_cells() {
  return {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {7, 6}, {8, 6}, {8, 9}, {9, 6}, {9, 8}, {9, 10}, {10, 6}, {10, 9}};
}
inline const char* sample16_t_bits() { return "101111010100100011001000000101011110"; }
inline const char* sample16_l_bits() { return "010000110010001010101000011000100100"; }

}  // namespace oracle
