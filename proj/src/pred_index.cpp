#include "k2t/pred_index.h"

#include <algorithm>
#include <map>
#include <string>

#include "k2t/error.h"

namespace k2t {

PredicateListVocabulary::PredicateListVocabulary(const std::vector<std::vector<Id>>& lists,
                                                 std::uint64_t predicate_count) {
  std::vector<std::uint64_t> flat;
  BitBuilder ends;
  for (const auto& list : lists) {
    if (list.empty()) throw InputError("predicate list vocabulary: empty list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      flat.push_back(list[i]);
      ends.push_back(i + 1 == list.size());
    }
  }
  seq_ = PackedInts(flat, bit_width_of(predicate_count > 0 ? predicate_count - 1 : 0));
  ends_ = BitSequence(std::move(ends));
}

std::vector<Id> PredicateListVocabulary::list(std::uint64_t q) const {
  if (q >= list_count())
    throw RangeError("predicate list " + std::to_string(q) + " out of range [0, " + std::to_string(list_count()) + ")");
  const auto first = static_cast<std::uint64_t>(ends_.select1(q) + 1);
  const auto last = static_cast<std::uint64_t>(ends_.select1(q + 1));
  std::vector<Id> out;
  out.reserve(last - first + 1);
  for (std::uint64_t i = first; i <= last; ++i) out.push_back(static_cast<Id>(seq_[i]));
  return out;
}

void PredicateListVocabulary::serialize(BinaryWriter& out) const {
  seq_.serialize(out);
  ends_.serialize(out);
}

PredicateListVocabulary PredicateListVocabulary::load(BinaryReader& in) {
  PredicateListVocabulary v;
  v.seq_ = PackedInts::load(in);
  v.ends_ = BitSequence::load(in);
  if (v.seq_.size() != v.ends_.size()) throw FormatError("predicate list vocabulary: S and B lengths differ");
  if (v.ends_.size() > 0 && !v.ends_[v.ends_.size() - 1]) throw FormatError("predicate list vocabulary: unterminated list");
  return v;
}

PredicateIndex::PredicateIndex(std::span<const Triple> triples, Role axis, std::uint64_t entity_count,
                               std::uint64_t predicate_count) {
  if (axis == Role::kPredicate) throw InputError("predicate index: axis must be subject or object");
  std::vector<std::pair<Id, Id>> pairs;  // (entity, predicate)
  pairs.reserve(triples.size());
  for (const Triple& t : triples) {
    const Id e = axis == Role::kSubject ? t.s : t.o;
    if (e >= entity_count || t.p >= predicate_count) throw InputError("predicate index: ID out of range");
    pairs.emplace_back(e, t.p);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // Distinct lists with frequency and first occurrence in entity order.
  struct Stat {
    std::uint64_t freq = 0;
    std::uint64_t first = 0;
  };
  std::map<std::vector<Id>, Stat> stats;
  std::vector<const std::vector<Id>*> entity_list(entity_count, nullptr);
  for (std::size_t i = 0; i < pairs.size();) {
    const Id e = pairs[i].first;
    std::vector<Id> list;
    for (; i < pairs.size() && pairs[i].first == e; ++i) list.push_back(pairs[i].second);
    auto [it, inserted] = stats.try_emplace(std::move(list));
    if (inserted) it->second.first = e;
    ++it->second.freq;
    entity_list[e] = &it->first;
  }

  // Most frequent first; equal frequencies keep first-occurrence order.
  std::vector<const std::vector<Id>*> order;
  order.reserve(stats.size());
  for (const auto& [list, st] : stats) order.push_back(&list);
  std::sort(order.begin(), order.end(), [&](const std::vector<Id>* a, const std::vector<Id>* b) {
    const Stat& sa = stats.at(*a);
    const Stat& sb = stats.at(*b);
    return sa.freq != sb.freq ? sa.freq > sb.freq : sa.first < sb.first;
  });
  std::map<const std::vector<Id>*, std::uint64_t> rank;
  std::vector<std::vector<Id>> lists;
  lists.reserve(order.size());
  for (std::size_t q = 0; q < order.size(); ++q) {
    rank[order[q]] = q + 1;
    lists.push_back(*order[q]);
  }
  vocab_ = PredicateListVocabulary(lists, predicate_count);

  std::vector<std::uint64_t> ids(entity_count, 0);
  for (std::uint64_t e = 0; e < entity_count; ++e)
    if (entity_list[e]) ids[e] = rank[entity_list[e]];
  ids_ = DacSequence(ids, kChunkWidth);
}

std::uint64_t PredicateIndex::list_id(std::uint64_t entity) const {
  if (entity >= ids_.size())
    throw RangeError("predicate index: entity " + std::to_string(entity) + " out of range [0, " +
                     std::to_string(ids_.size()) + ")");
  return ids_.access(entity);
}

std::vector<Id> PredicateIndex::predicates_of(std::uint64_t entity) const {
  const std::uint64_t id = list_id(entity);
  if (id == 0) return {};
  return vocab_.list(id - 1);
}

void PredicateIndex::serialize(BinaryWriter& out) const {
  vocab_.serialize(out);
  ids_.serialize(out);
}

PredicateIndex PredicateIndex::load(BinaryReader& in) {
  PredicateIndex idx;
  idx.vocab_ = PredicateListVocabulary::load(in);
  idx.ids_ = DacSequence::load(in);
  for (std::uint64_t e = 0; e < idx.ids_.size(); ++e)
    if (idx.ids_.access(e) > idx.vocab_.list_count()) throw FormatError("predicate index: list ID outside vocabulary");
  return idx;
}

}  // namespace k2t
