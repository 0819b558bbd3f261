#include "k2t/k2tree.h"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_map>

#include "k2t/error.h"

namespace k2t {

namespace {

using Key = unsigned __int128;

constexpr unsigned kLeafChunkWidth = 8;

}  // namespace

void K2Config::validate() const {
  if (k_upper < 2 || k_lower < 2 || leaf_size < 2) throw InputError("k2tree: branching factors and leaf size must be >= 2");
  if (leaf_size > 8) throw InputError("k2tree: leaf size must be <= 8 (one 64-bit word per leaf)");
  std::uint64_t s = 1;
  while (s < leaf_size) s *= k_lower;
  if (s != leaf_size) throw InputError("k2tree: leaf size must be a power of k_lower");
}

std::uint64_t K2Tree::padded_side(std::uint64_t logical_side, const K2Config& config) {
  config.validate();
  std::uint64_t side = config.leaf_size;
  std::uint32_t u = 0;
  bool any = false;
  while (side < logical_side && u < config.upper_levels) {
    side *= config.k_upper;
    ++u;
    any = true;
  }
  while (side < logical_side) {
    side *= config.k_lower;
    any = true;
  }
  if (!any) side *= config.upper_levels > 0 ? config.k_upper : config.k_lower;
  return side;
}

void K2Tree::init_geometry(std::uint64_t logical_side) {
  config_.validate();
  ks_.clear();
  std::uint64_t side = config_.leaf_size;
  std::uint32_t u = 0;
  while (side < logical_side && u < config_.upper_levels) {
    side *= config_.k_upper;
    ++u;
  }
  std::uint32_t v = 0;
  while (side < logical_side) {
    side *= config_.k_lower;
    ++v;
  }
  if (u == 0 && v == 0) {
    if (config_.upper_levels > 0) u = 1;
    else v = 1;
  }
  ks_.assign(u, config_.k_upper);
  ks_.insert(ks_.end(), v, config_.k_lower);
  n_prime_ = config_.leaf_size;
  for (auto k : ks_) n_prime_ *= k;
  sides_.resize(ks_.size());
  std::uint64_t s = n_prime_;
  for (std::size_t l = 0; l < ks_.size(); ++l) {
    s /= ks_[l];
    sides_[l] = s;
  }
}

void K2Tree::init_level_starts() {
  const std::size_t h = ks_.size();
  starts_.assign(h + 1, 0);
  ones_before_.assign(h + 1, 0);
  for (std::size_t l = 0; l < h; ++l) {
    const std::uint64_t k2 = std::uint64_t{ks_[l]} * ks_[l];
    const std::uint64_t parents = l == 0 ? 1 : ones_before_[l] - ones_before_[l - 1];
    starts_[l + 1] = starts_[l] + parents * k2;
    if (starts_[l + 1] > t_.size()) throw FormatError("k2tree: T shorter than its level structure");
    ones_before_[l + 1] = starts_[l + 1] == 0 ? 0 : t_.rank1(starts_[l + 1] - 1);
  }
  if (starts_[h] != t_.size()) throw FormatError("k2tree: T longer than its level structure");
}

K2Tree::K2Tree(std::span<const Cell> cells, std::uint64_t rows, std::uint64_t cols, const K2Config& config)
    : config_(config) {
  for (const Cell& c : cells)
    if (c.row >= rows || c.col >= cols)
      throw InputError("k2tree: cell (" + std::to_string(c.row) + ", " + std::to_string(c.col) +
                       ") outside " + std::to_string(rows) + " x " + std::to_string(cols));
  init_geometry(std::max<std::uint64_t>({rows, cols, 1}));
  const std::size_t h = ks_.size();
  const std::uint64_t leaf = config_.leaf_size;

  // Mixed-radix path key: one digit per level (child index k*r + c), then the
  // offset inside the leaf block. Sorting by key yields level order per level.
  std::vector<Key> radix_after(h + 1);  // product of radices strictly below level l
  radix_after[h] = leaf * leaf;
  for (std::size_t l = h; l-- > 0;) radix_after[l] = radix_after[l + 1] * (std::uint64_t{ks_[l]} * ks_[l]);

  std::vector<Key> keys;
  keys.reserve(cells.size());
  for (const Cell& c : cells) {
    Key key = 0;
    for (std::size_t l = 0; l < h; ++l) {
      const std::uint64_t k = ks_[l];
      const std::uint64_t digit = (c.row / sides_[l] % k) * k + (c.col / sides_[l] % k);
      key = key * (k * k) + digit;
    }
    key = key * (leaf * leaf) + (c.row % leaf) * leaf + (c.col % leaf);
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  cell_count_ = keys.size();

  BitBuilder t;
  for (std::size_t l = 0; l < h; ++l) {
    const std::uint64_t k2 = std::uint64_t{ks_[l]} * ks_[l];
    if (keys.empty()) {
      for (std::uint64_t i = 0; i < k2; ++i) t.push_back(false);
      break;
    }
    // Parent prefix covers levels [0, l); digit at level l selects the child.
    const Key parent_div = radix_after[l];
    std::size_t i = 0;
    while (i < keys.size()) {
      const Key parent = keys[i] / parent_div;
      std::vector<bool> block(k2, false);
      while (i < keys.size() && keys[i] / parent_div == parent) {
        block[static_cast<std::uint64_t>(keys[i] / radix_after[l + 1] % k2)] = true;
        ++i;
      }
      for (bool b : block) t.push_back(b);
    }
  }
  t_ = BitSequence(std::move(t));
  init_level_starts();

  // Leaf words in leaf order.
  std::vector<std::uint64_t> words;
  const Key leaf_div = radix_after[h];
  for (std::size_t i = 0; i < keys.size();) {
    const Key block = keys[i] / leaf_div;
    std::uint64_t w = 0;
    while (i < keys.size() && keys[i] / leaf_div == block) {
      w |= std::uint64_t{1} << static_cast<unsigned>(keys[i] % leaf_div);
      ++i;
    }
    words.push_back(w);
  }

  std::unordered_map<std::uint64_t, std::uint64_t> freq;
  for (auto w : words) ++freq[w];
  leaf_vocab_.clear();
  leaf_vocab_.reserve(freq.size());
  for (const auto& [w, n] : freq) leaf_vocab_.push_back(w);
  std::sort(leaf_vocab_.begin(), leaf_vocab_.end(), [&](std::uint64_t a, std::uint64_t b) {
    const auto fa = freq[a], fb = freq[b];
    return fa != fb ? fa > fb : a < b;
  });
  std::unordered_map<std::uint64_t, std::uint64_t> code;
  for (std::size_t c = 0; c < leaf_vocab_.size(); ++c) code[leaf_vocab_[c]] = c;
  std::vector<std::uint64_t> codes;
  codes.reserve(words.size());
  for (auto w : words) codes.push_back(code[w]);
  l_ = DacSequence(codes, kLeafChunkWidth);
}

NodeCursor K2Tree::root() const {
  NodeCursor c;
  c.side = n_prime_;
  return c;
}

std::uint64_t K2Tree::child_offset(const NodeCursor& c) const {
  if (c.level < 0) return 0;
  if (!c.bit) throw StateError("k2tree: node with bit 0 has no children");
  const std::size_t l = static_cast<std::size_t>(c.level);
  const std::uint64_t j = t_.rank1_unchecked(c.pos) - ones_before_[l] - 1;
  if (l + 1 < ks_.size()) return starts_[l + 1] + j * ks_[l + 1] * ks_[l + 1];
  return t_.size() + j * config_.leaf_size * config_.leaf_size;
}

void K2Tree::children(const NodeCursor& c, std::vector<NodeCursor>& out) const {
  if (!c.bit) throw StateError("k2tree: cannot descend a node with bit 0");
  if (is_leaf_block(c)) throw StateError("k2tree: cannot descend a leaf block; use leaf_word");
  const std::size_t cl = static_cast<std::size_t>(c.level + 1);
  const std::uint64_t k = ks_[cl];
  const std::uint64_t side = sides_[cl];
  const std::uint64_t start = child_offset(c);
  for (std::uint64_t i = 0; i < k * k; ++i) {
    NodeCursor ch;
    ch.pos = start + i;
    ch.row = c.row + (i / k) * side;
    ch.col = c.col + (i % k) * side;
    ch.side = side;
    ch.level = static_cast<int>(cl);
    ch.bit = t_.get(ch.pos);
    out.push_back(ch);
  }
}

std::vector<NodeCursor> K2Tree::descend(const NodeCursor& c) const {
  std::vector<NodeCursor> out;
  children(c, out);
  return out;
}

std::uint64_t K2Tree::leaf_index(const NodeCursor& c) const {
  if (!is_leaf_block(c) || !c.bit) throw StateError("k2tree: cursor is not a nonempty leaf block");
  return t_.rank1_unchecked(c.pos) - ones_before_[c.level] - 1;
}

std::uint64_t K2Tree::leaf_word(const NodeCursor& c) const { return leaf_word_at(leaf_index(c)); }

template <typename Visit>
void K2Tree::traverse(std::uint64_t row_lo, std::uint64_t row_hi, std::uint64_t col_lo, std::uint64_t col_hi,
                      TraversalStats* stats, Visit&& visit) const {
  if (cell_count_ == 0) {
    if (stats) stats->nodes += std::uint64_t{ks_[0]} * ks_[0];
    return;
  }
  const std::uint64_t leaf = config_.leaf_size;
  std::vector<NodeCursor> stack{root()};
  while (!stack.empty()) {
    const NodeCursor c = stack.back();
    stack.pop_back();
    if (is_leaf_block(c)) {
      std::uint64_t w = leaf_word(c);
      while (w) {
        const unsigned o = std::countr_zero(w);
        w &= w - 1;
        const std::uint64_t r = c.row + o / leaf, col = c.col + o % leaf;
        if (r >= row_lo && r <= row_hi && col >= col_lo && col <= col_hi) visit(r, col);
      }
      continue;
    }
    // Only 1 children are materialized; pushed in reverse to pop in order.
    const std::size_t cl = static_cast<std::size_t>(c.level + 1);
    const std::uint64_t k = ks_[cl], side = sides_[cl];
    const std::uint64_t start = child_offset(c);
    if (stats) stats->nodes += k * k;
    for (std::uint64_t i = k * k; i-- > 0;) {
      if (!t_.get(start + i)) continue;
      const std::uint64_t r = c.row + (i / k) * side, col = c.col + (i % k) * side;
      if (r > row_hi || r + side <= row_lo || col > col_hi || col + side <= col_lo) continue;
      stack.push_back(NodeCursor{start + i, r, col, side, static_cast<int>(cl), true});
    }
  }
}

bool K2Tree::cell(std::uint64_t row, std::uint64_t col, TraversalStats* stats) const {
  if (row >= n_prime_ || col >= n_prime_) return false;
  if (cell_count_ == 0) {
    if (stats) ++stats->nodes;
    return false;
  }
  std::uint64_t start = 0;
  std::uint64_t r = row, c = col;
  for (std::size_t l = 0; l < ks_.size(); ++l) {
    const std::uint64_t k = ks_[l], side = sides_[l];
    const std::uint64_t pos = start + (r / side) * k + (c / side);
    r %= side;
    c %= side;
    if (stats) ++stats->nodes;
    if (!t_.get(pos)) return false;
    const std::uint64_t j = t_.rank1_unchecked(pos) - ones_before_[l] - 1;
    if (l + 1 == ks_.size()) {
      const std::uint64_t w = leaf_word_at(j);
      return (w >> (r * config_.leaf_size + c)) & 1;
    }
    start = starts_[l + 1] + j * ks_[l + 1] * ks_[l + 1];
  }
  return false;
}

std::vector<std::uint32_t> K2Tree::direct_neighbors(std::uint64_t row, TraversalStats* stats) const {
  std::vector<std::uint32_t> out;
  if (row >= n_prime_) return out;
  traverse(row, row, 0, n_prime_ - 1, stats,
           [&](std::uint64_t, std::uint64_t c) { out.push_back(static_cast<std::uint32_t>(c)); });
  return out;
}

std::vector<std::uint32_t> K2Tree::reverse_neighbors(std::uint64_t col, TraversalStats* stats) const {
  std::vector<std::uint32_t> out;
  if (col >= n_prime_) return out;
  traverse(0, n_prime_ - 1, col, col, stats,
           [&](std::uint64_t r, std::uint64_t) { out.push_back(static_cast<std::uint32_t>(r)); });
  return out;
}

std::vector<Cell> K2Tree::range(std::uint64_t row_lo, std::uint64_t row_hi, std::uint64_t col_lo,
                                std::uint64_t col_hi, TraversalStats* stats) const {
  if (row_lo > row_hi || col_lo > col_hi || row_hi >= n_prime_ || col_hi >= n_prime_)
    throw InputError("k2tree: malformed range");
  std::vector<Cell> out;
  traverse(row_lo, row_hi, col_lo, col_hi, stats, [&](std::uint64_t r, std::uint64_t c) {
    out.push_back(Cell{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)});
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cell> K2Tree::all(TraversalStats* stats) const { return range(0, n_prime_ - 1, 0, n_prime_ - 1, stats); }

void K2Tree::audit() const {
  const std::size_t h = ks_.size();
  if (starts_.size() != h + 1 || starts_[h] != t_.size()) throw StateError("k2tree audit: level table does not cover T");
  // Every 1 in an internal level has a nonzero child block.
  for (std::size_t l = 0; l + 1 < h; ++l) {
    const std::uint64_t k2 = std::uint64_t{ks_[l + 1]} * ks_[l + 1];
    for (std::uint64_t p = starts_[l]; p < starts_[l + 1]; ++p) {
      if (!t_.get(p)) continue;
      NodeCursor c;
      c.pos = p;
      c.level = static_cast<int>(l);
      const std::uint64_t first = child_offset(c);
      bool any = false;
      for (std::uint64_t i = 0; i < k2; ++i) any |= t_.get(first + i);
      if (!any) throw StateError("k2tree audit: 1 bit at T[" + std::to_string(p) + "] has an empty child block");
    }
  }
  const std::uint64_t leaves = ones_before_[h] - ones_before_[h - 1];
  if (cell_count_ == 0) {
    if (t_.ones() != 0 || l_.size() != 0) throw StateError("k2tree audit: empty tree with set bits");
    return;
  }
  if (leaves != l_.size()) throw StateError("k2tree audit: leaf count differs from last-level 1 bits");
  const std::uint64_t leaf_bits = std::uint64_t{config_.leaf_size} * config_.leaf_size;
  std::uint64_t cells = 0;
  for (std::uint64_t i = 0; i < l_.size(); ++i) {
    const std::uint64_t code = l_.access(i);
    if (code >= leaf_vocab_.size()) throw StateError("k2tree audit: leaf code outside vocabulary");
    const std::uint64_t w = leaf_vocab_[code];
    if (w == 0) throw StateError("k2tree audit: empty leaf word");
    if (leaf_bits < 64 && (w >> leaf_bits) != 0) throw StateError("k2tree audit: leaf word wider than block");
    cells += std::popcount(w);
  }
  if (cells != cell_count_) throw StateError("k2tree audit: cell count mismatch");
}

void K2Tree::serialize(BinaryWriter& out) const {
  out.u32(config_.k_upper);
  out.u32(config_.upper_levels);
  out.u32(config_.k_lower);
  out.u32(config_.leaf_size);
  out.u64(n_prime_);
  out.u64(cell_count_);
  t_.serialize(out);
  out.u64(leaf_vocab_.size());
  out.words(leaf_vocab_);
  l_.serialize(out);
}

K2Tree K2Tree::load(BinaryReader& in) {
  K2Tree tree{Raw{}};
  tree.config_.k_upper = in.u32();
  tree.config_.upper_levels = in.u32();
  tree.config_.k_lower = in.u32();
  tree.config_.leaf_size = in.u32();
  try {
    tree.config_.validate();
  } catch (const InputError& e) {
    throw FormatError(e.what());
  }
  const std::uint64_t n_prime = in.u64();
  tree.cell_count_ = in.u64();
  tree.t_ = BitSequence::load(in);
  tree.leaf_vocab_ = in.words(in.u64());
  tree.l_ = DacSequence::load(in);

  // Recover the schedule from n': the smallest schedule reaching n' is the
  // one that produced it.
  if (n_prime < tree.config_.leaf_size || n_prime > (std::uint64_t{1} << 40)) throw FormatError("k2tree: bad n'");
  tree.init_geometry(n_prime);
  if (tree.n_prime_ != n_prime) throw FormatError("k2tree: n' inconsistent with config");
  if (tree.t_.size() < std::uint64_t{tree.ks_[0]} * tree.ks_[0]) throw FormatError("k2tree: T too short");
  tree.init_level_starts();
  const std::size_t h = tree.ks_.size();
  if (tree.ones_before_[h] - tree.ones_before_[h - 1] != tree.l_.size())
    throw FormatError("k2tree: leaf count differs from last-level 1 bits");
  for (std::uint64_t i = 0; i < tree.l_.size(); ++i)
    if (tree.l_.access(i) >= tree.leaf_vocab_.size()) throw FormatError("k2tree: leaf code outside vocabulary");
  return tree;
}

}  // namespace k2t
