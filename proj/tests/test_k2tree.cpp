#include <random>
#include <string>

#include "doctest.h"
#include "k2t/error.h"
#include "k2t/k2tree.h"
#include "oracles.h"

using k2t::Cell;
using k2t::K2Config;
using k2t::K2Tree;

namespace {

std::string bits_string(const k2t::BitSequence& b, std::uint64_t from, std::uint64_t n) {
  std::string s;
  for (std::uint64_t i = from; i < from + n; ++i) s += b[i] ? '1' : '0';
  return s;
}

void check_against_dense(const K2Tree& t, const oracle::DenseMatrix& m) {
  CHECK(t.all() == m.list());
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    std::vector<std::uint32_t> row;
    for (std::uint64_t c = 0; c < m.cols; ++c)
      if (m.at(r, c)) row.push_back(static_cast<std::uint32_t>(c));
    REQUIRE(t.direct_neighbors(r) == row);
  }
  for (std::uint64_t c = 0; c < m.cols; ++c) {
    std::vector<std::uint32_t> col;
    for (std::uint64_t r = 0; r < m.rows; ++r)
      if (m.at(r, c)) col.push_back(static_cast<std::uint32_t>(r));
    REQUIRE(t.reverse_neighbors(c) == col);
  }
}

}  // namespace

TEST_CASE("k2tree: schedule and padding") {
  K2Config cfg;
  CHECK(K2Tree::padded_side(1, cfg) == 32);
  CHECK(K2Tree::padded_side(32, cfg) == 32);
  CHECK(K2Tree::padded_side(33, cfg) == 128);
  CHECK(K2Tree::padded_side(8192, cfg) == 8192);
  CHECK(K2Tree::padded_side(8193, cfg) == 16384);
  CHECK(K2Tree::padded_side(11, K2Config::uniform(2, 2)) == 16);
  CHECK_THROWS_AS(K2Config({4, 5, 2, 6}).validate(), k2t::InputError);
  CHECK_THROWS_AS(K2Config({4, 5, 2, 16}).validate(), k2t::InputError);
  CHECK_THROWS_AS(K2Config({1, 5, 2, 8}).validate(), k2t::InputError);

  K2Tree t(std::vector<Cell>{{0, 0}}, 10000, 10000, cfg);
  REQUIRE(t.height() == 6);
  CHECK(t.level_k(0) == 4);
  CHECK(t.level_k(4) == 4);
  CHECK(t.level_k(5) == 2);
  CHECK(t.level_side(5) == 8);
}

TEST_CASE("k2tree: worked 16x16 example with k = 2") {
  const auto cells = oracle::sample16_cells();
  K2Tree t(cells, 16, 16, K2Config::uniform(2, 2));
  t.audit();
  REQUIRE(t.tree_bits().size() == 36);
  CHECK(bits_string(t.tree_bits(), 0, 36) == oracle::sample16_t_bits());

  // Leaves in order must reproduce L.
  std::string l;
  for (std::uint64_t i = 0; i < t.leaf_count(); ++i) {
    const auto w = t.leaf_word_at(i);
    for (int b = 0; b < 4; ++b) l += (w >> b) & 1 ? '1' : '0';
  }
  CHECK(l == oracle::sample16_l_bits());

  // Root's third child, then its second child, then that node's fourth child.
  auto top = t.descend(t.root());
  REQUIRE(top.size() == 4);
  CHECK(top[2].pos == 2);
  CHECK(top[2].bit);
  CHECK(t.child_offset(top[2]) == 8);
  auto second = t.descend(top[2]);
  CHECK(second[0].pos == 8);
  std::string s;
  for (auto& c : second) s += c.bit ? '1' : '0';
  CHECK(s == "0100");
  CHECK(t.tree_bits().rank1(9) == 7);
  CHECK(t.child_offset(second[1]) == 28);
  auto third = t.descend(second[1]);
  s.clear();
  for (auto& c : third) s += c.bit ? '1' : '0';
  CHECK(third[0].pos == 28);
  CHECK(s == "0101");
  REQUIRE(t.is_leaf_block(third[3]));
  CHECK(third[3].pos == 31);
  CHECK(t.child_offset(third[3]) == 56);
  CHECK(t.child_offset(third[3]) - t.tree_bits().size() == 20);
  CHECK(t.leaf_word(third[3]) == 1);
  CHECK_THROWS_AS(t.descend(third[3]), k2t::StateError);
  CHECK_THROWS_AS(t.descend(third[0]), k2t::StateError);

  const auto row10 = t.direct_neighbors(10);
  CHECK(std::find(row10.begin(), row10.end(), 6u) != row10.end());
  CHECK(row10 == std::vector<std::uint32_t>{6, 9});
}

TEST_CASE("k2tree: predicate-5 matrix of the running example") {
  const std::vector<Cell> cells{{2, 2}, {3, 3}, {4, 3}};
  K2Tree t(cells, 5, 5, K2Config{});
  CHECK(t.cell(3, 3));
  CHECK_FALSE(t.cell(2, 3));
  CHECK(t.reverse_neighbors(3) == std::vector<std::uint32_t>{3, 4});
  CHECK(t.all() == cells);
  CHECK(t.range(3, 3, 3, 3) == std::vector<Cell>{{3, 3}});
  CHECK(t.range(2, 3, 0, 2) == std::vector<Cell>{{2, 2}});
  CHECK_THROWS_AS(t.range(3, 2, 0, 1), k2t::InputError);
  CHECK_FALSE(t.cell(20, 20));  // padding
}

TEST_CASE("k2tree: empty matrix") {
  K2Tree t(std::vector<Cell>{}, 100, 100, K2Config{});
  t.audit();
  CHECK(t.tree_bits().size() == 16);
  CHECK(t.tree_bits().ones() == 0);
  CHECK_FALSE(t.cell(0, 0));
  CHECK(t.direct_neighbors(5).empty());
  CHECK(t.reverse_neighbors(5).empty());
  CHECK(t.all().empty());
  for (auto& c : t.descend(t.root())) CHECK_FALSE(c.bit);
}

TEST_CASE("k2tree: out-of-bounds input cell") {
  CHECK_THROWS_AS(K2Tree(std::vector<Cell>{{5, 0}}, 5, 5, K2Config{}), k2t::InputError);
}

TEST_CASE("k2tree: random matrices agree with dense oracle") {
  std::mt19937_64 rng(21);
  const K2Config configs[] = {K2Config{}, K2Config::uniform(2, 2), K2Config{4, 1, 2, 4}, K2Config{3, 2, 2, 8}};
  for (const auto& cfg : configs) {
    for (int iter = 0; iter < 6; ++iter) {
      const std::uint64_t n = 1 + rng() % 150;
      const double density = iter % 3 == 0 ? 0.01 : (iter % 3 == 1 ? 0.1 : 0.4);
      auto m = oracle::random_matrix(rng, n, n, density);
      K2Tree t(m.list(), n, n, cfg);
      t.audit();
      check_against_dense(t, m);
      for (int q = 0; q < 200; ++q) {
        const auto r = rng() % n, c = rng() % n;
        REQUIRE(t.cell(r, c) == m.at(r, c));
      }
      for (int q = 0; q < 20; ++q) {
        std::uint64_t r0 = rng() % n, r1 = rng() % n, c0 = rng() % n, c1 = rng() % n;
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        std::vector<Cell> expect;
        for (auto cell : m.list())
          if (cell.row >= r0 && cell.row <= r1 && cell.col >= c0 && cell.col <= c1) expect.push_back(cell);
        REQUIRE(t.range(r0, r1, c0, c1) == expect);
      }
    }
  }
}

TEST_CASE("k2tree: serialization round trip") {
  std::mt19937_64 rng(4);
  auto m = oracle::random_matrix(rng, 200, 200, 0.02);
  K2Tree t(m.list(), 200, 200, K2Config{});
  k2t::BinaryWriter w;
  t.serialize(w);
  k2t::BinaryReader r(w.data());
  auto back = K2Tree::load(r);
  back.audit();
  CHECK(back.all() == m.list());
  CHECK(back.n_prime() == t.n_prime());
  k2t::BinaryWriter w2;
  back.serialize(w2);
  CHECK(w2.data() == w.data());
  for (std::size_t cut : {std::size_t{5}, w.size() / 2, w.size() - 1}) {
    k2t::BinaryReader rc(std::string_view(w.data()).substr(0, cut));
    CHECK_THROWS_AS(K2Tree::load(rc), k2t::FormatError);
  }
}
