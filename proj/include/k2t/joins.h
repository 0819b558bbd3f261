#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "k2t/store.h"

namespace k2t {

// Pairwise join of two triple patterns sharing one variable X. X sits at
// `left_role` in `left` and at `right_role` in `right` (subject or object);
// those positions must be unbound. Every other unbound position is a distinct
// variable of its own.
struct JoinQuery {
  TriplePattern left;
  TriplePattern right;
  Role left_role = Role::kSubject;
  Role right_role = Role::kSubject;
};

// Classes by (number of variable predicates) x (number of variable
// non-joined nodes). E1: one side fixes the predicate and the other the node;
// E2: one side fixes both, the other neither.
enum class JoinClass { A, B, C, D, E1, E2, F, G, H };

enum class JoinStrategy { kChain, kIndependent, kInteractive, kAuto };

enum class JoinSide { kLeft, kRight };

const char* join_class_name(JoinClass c);
const char* strategy_name(JoinStrategy s);
// "SS", "SO", "OS" or "OO".
std::string join_variant(const JoinQuery& q);

// Column descriptor of a join row: the join variable or one variable of the
// left/right pattern, with the role it plays there.
struct JoinColumn {
  enum Origin { kJoinVar, kLeft, kRight } origin;
  Role role;
};

// Row layout: X, then the left pattern's other variables in (S, P, O) order,
// then the right pattern's. Unused trailing slots are 0.
using JoinRow = std::array<Id, 5>;

struct JoinResult {
  std::vector<JoinColumn> columns;
  std::vector<JoinRow> rows;  // sorted, no duplicates
  std::size_t width() const { return columns.size(); }
};

struct JoinStats {
  JoinStrategy strategy = JoinStrategy::kAuto;  // strategy actually run
  JoinSide first = JoinSide::kLeft;             // chain: side resolved first
  std::uint64_t probes = 0;                     // chain: X values substituted
  std::uint64_t pairs = 0;                      // interactive: frontier pairs expanded
  std::uint64_t nodes_visited = 0;
  std::uint64_t trees_visited = 0;
  std::uint64_t estimate_left = 0;
  std::uint64_t estimate_right = 0;
};

struct JoinOptions {
  bool use_predicate_index = true;
  // Interactive only: called with [x_lo, x_hi) for every X interval dropped
  // because one side has no candidate child there.
  std::function<void(std::uint64_t, std::uint64_t)> on_prune;
};

// Throws InputError for malformed queries and UnsupportedError for class I.
JoinClass classify_join(const JoinQuery& q);

bool strategy_allowed(JoinClass c, JoinStrategy s);
// Sides chain evaluation may start from.
std::vector<JoinSide> chain_starts(JoinClass c);

std::uint64_t estimate_cardinality(const TripleStore& st, const TriplePattern& pattern, Role x_role);

JoinResult join_chain(const TripleStore& st, const JoinQuery& q, JoinStats* stats = nullptr,
                      const JoinOptions& options = {});
JoinResult join_independent(const TripleStore& st, const JoinQuery& q, JoinStats* stats = nullptr,
                            const JoinOptions& options = {});
JoinResult join_interactive(const TripleStore& st, const JoinQuery& q, JoinStats* stats = nullptr,
                            const JoinOptions& options = {});

// Dispatch. kAuto picks interactive for classes A and G, chain when one side's
// estimate is at most 1/16 of the other's (and that side may start the chain),
// independent when legal, interactive otherwise. Throws StrategyError for an
// illegal (class, strategy) pair.
JoinResult join(const TripleStore& st, const JoinQuery& q, JoinStrategy strategy, JoinStats* stats = nullptr,
                const JoinOptions& options = {});

}  // namespace k2t
