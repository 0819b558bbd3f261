#pragma once

#include <random>
#include <string>
#include <vector>

#include "k2t/joins.h"
#include "k2t/store.h"

namespace k2t {

// Pattern shapes as 3-bit masks: bit 2 = subject bound, bit 1 = predicate,
// bit 0 = object. Shape 0 is (?S,?P,?O).
std::string pattern_shape_name(unsigned shape);

// Random instantiations drawn from the store's own triples (`triples` is the
// store's full content, e.g. resolve({})).
std::vector<TriplePattern> sample_patterns(const std::vector<Triple>& triples, unsigned shape, std::size_t n,
                                           std::mt19937_64& rng);

// Random joins of class `c` with X at (left_role, right_role). Constants come
// from two triples sharing X when one is found within a few attempts.
std::vector<JoinQuery> sample_joins(const TripleStore& st, const std::vector<Triple>& triples, JoinClass c,
                                    Role left_role, Role right_role, std::size_t n, std::mt19937_64& rng);

}  // namespace k2t
