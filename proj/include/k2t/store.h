#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/dictionary.h"
#include "k2t/k2tree.h"
#include "k2t/pred_index.h"
#include "k2t/triple.h"

namespace k2t {

// A triple pattern over IDs; an empty optional is a variable.
struct TriplePattern {
  std::optional<Id> s;
  std::optional<Id> p;
  std::optional<Id> o;
};

// Patterns with a bound predicate come back ordered by (S, O); patterns with
// a variable predicate by (P, S, O). No duplicates.
using ResultSet = std::vector<Triple>;

struct QueryStats {
  std::uint64_t trees_visited = 0;
  std::uint64_t nodes_visited = 0;
};

struct ResolveOptions {
  // Restrict unbounded-predicate patterns with the SP/OP indexes.
  bool use_predicate_index = true;
};

struct StoreSizes {
  std::uint64_t dictionary = 0;
  std::uint64_t trees = 0;
  std::uint64_t sp = 0;
  std::uint64_t op = 0;
  std::uint64_t total = 0;
};

// Vertically partitioned store: one k2-tree per predicate over a shared
// (|SO|+|S|) x (|SO|+|O|) subject/object matrix, plus SP and OP indexes.
class TripleStore {
 public:
  static constexpr char kMagic[4] = {'K', '2', 'T', 'R'};
  static constexpr std::uint32_t kFormatVersion = 1;

  TripleStore() : TripleStore(Dictionary{}, std::span<const Triple>{}) {}
  TripleStore(Dictionary dict, std::span<const Triple> triples, const K2Config& config = K2Config{});

  const Dictionary& dictionary() const { return dict_; }
  const K2Config& config() const { return config_; }
  std::uint64_t rows() const { return dict_.subject_count(); }
  std::uint64_t cols() const { return dict_.object_count(); }
  std::uint64_t n_prime() const { return n_prime_; }
  std::size_t predicate_count() const { return trees_.size(); }
  const K2Tree& tree(Id p) const { return trees_.at(p); }
  std::uint64_t count(Id p) const { return trees_.at(p).cell_count(); }
  std::uint64_t triple_count() const;
  const PredicateIndex& sp() const { return sp_; }
  const PredicateIndex& op() const { return op_; }

  // Predicates worth visiting for a subject / object (SP / OP lists).
  std::vector<Id> predicates_of_subject(Id s) const { return sp_.predicates_of(s); }
  std::vector<Id> predicates_of_object(Id o) const { return op_.predicates_of(o); }

  ResultSet resolve(const TriplePattern& pattern, QueryStats* stats = nullptr,
                    const ResolveOptions& options = ResolveOptions{}) const;

  std::string serialize() const;
  static TripleStore load(std::string_view bytes);
  void save_file(const std::string& path) const;
  static TripleStore load_file(const std::string& path);
  StoreSizes sizes() const;

 private:
  struct Raw {};
  explicit TripleStore(Raw) {}
  void check_pattern(const TriplePattern& pattern) const;

  Dictionary dict_;
  K2Config config_;
  std::uint64_t n_prime_ = 0;
  std::vector<K2Tree> trees_;
  PredicateIndex sp_;
  PredicateIndex op_;
};

}  // namespace k2t
