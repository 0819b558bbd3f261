#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "k2t/bit_sequence.h"
#include "k2t/dac.h"
#include "k2t/packed_ints.h"
#include "k2t/triple.h"

namespace k2t {

// Distinct predicate lists concatenated in S, most frequent first, with B
// marking the last element of every list. List q (0-based) occupies
// S[select1(B, q) + 1 .. select1(B, q + 1)].
class PredicateListVocabulary {
 public:
  PredicateListVocabulary() = default;
  PredicateListVocabulary(const std::vector<std::vector<Id>>& lists, std::uint64_t predicate_count);

  std::uint64_t list_count() const { return ends_.ones(); }
  std::vector<Id> list(std::uint64_t q) const;
  const PackedInts& sequence() const { return seq_; }
  const BitSequence& ends() const { return ends_; }

  void serialize(BinaryWriter& out) const;
  static PredicateListVocabulary load(BinaryReader& in);

 private:
  PackedInts seq_;
  BitSequence ends_;
};

// SP (axis = subject) or OP (axis = object) index: for every entity, the ID
// of its distinct-predicate list. Stored IDs are list number + 1; 0 marks an
// entity with no triples on this axis.
class PredicateIndex {
 public:
  static constexpr unsigned kChunkWidth = 4;

  PredicateIndex() = default;
  PredicateIndex(std::span<const Triple> triples, Role axis, std::uint64_t entity_count,
                 std::uint64_t predicate_count);

  std::uint64_t entity_count() const { return ids_.size(); }
  // 1-based vocabulary list ID, 0 when the entity has no list.
  std::uint64_t list_id(std::uint64_t entity) const;
  std::vector<Id> predicates_of(std::uint64_t entity) const;
  const PredicateListVocabulary& vocabulary() const { return vocab_; }
  const DacSequence& ids() const { return ids_; }

  void serialize(BinaryWriter& out) const;
  static PredicateIndex load(BinaryReader& in);

 private:
  PredicateListVocabulary vocab_;
  DacSequence ids_;
};

}  // namespace k2t
