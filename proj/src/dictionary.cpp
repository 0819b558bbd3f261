#include "k2t/dictionary.h"

#include <algorithm>

#include "k2t/error.h"

namespace k2t {

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::optional<std::size_t> lookup(const std::vector<std::string>& v, std::string_view term) {
  auto it = std::lower_bound(v.begin(), v.end(), term, [](const std::string& a, std::string_view b) { return a < b; });
  if (it == v.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

}  // namespace

const char* role_name(Role r) {
  switch (r) {
    case Role::kSubject: return "subject";
    case Role::kPredicate: return "predicate";
    case Role::kObject: return "object";
  }
  return "?";
}

Dictionary::Dictionary(std::span<const TermTriple> triples) {
  std::vector<std::string> s, p, o;
  s.reserve(triples.size());
  p.reserve(triples.size());
  o.reserve(triples.size());
  for (const auto& t : triples) {
    s.push_back(t.subject);
    p.push_back(t.predicate);
    o.push_back(t.object);
  }
  *this = Dictionary(std::move(s), std::move(p), std::move(o));
}

Dictionary::Dictionary(std::vector<std::string> subjects, std::vector<std::string> predicates,
                       std::vector<std::string> objects) {
  sort_unique(subjects);
  sort_unique(objects);
  sort_unique(predicates);
  std::set_intersection(subjects.begin(), subjects.end(), objects.begin(), objects.end(),
                        std::back_inserter(terms_[kSO]));
  std::set_difference(subjects.begin(), subjects.end(), terms_[kSO].begin(), terms_[kSO].end(),
                      std::back_inserter(terms_[kS]));
  std::set_difference(objects.begin(), objects.end(), terms_[kSO].begin(), terms_[kSO].end(),
                      std::back_inserter(terms_[kO]));
  terms_[kP] = std::move(predicates);
}

std::size_t Dictionary::id_count(Role role) const {
  switch (role) {
    case Role::kSubject: return subject_count();
    case Role::kObject: return object_count();
    case Role::kPredicate: return p_count();
  }
  return 0;
}

std::optional<Id> Dictionary::find(std::string_view term, Role role) const {
  if (role == Role::kPredicate) {
    if (auto i = lookup(terms_[kP], term)) return static_cast<Id>(*i);
    return std::nullopt;
  }
  if (auto i = lookup(terms_[kSO], term)) return static_cast<Id>(*i);
  const auto& own = terms_[role == Role::kSubject ? kS : kO];
  if (auto i = lookup(own, term)) return static_cast<Id>(so_count() + *i);
  return std::nullopt;
}

Id Dictionary::encode(std::string_view term, Role role) const {
  if (auto id = find(term, role)) return *id;
  throw NotFoundError("unknown " + std::string(role_name(role)) + " term: " + std::string(term));
}

const std::string& Dictionary::decode(Id id, Role role) const {
  if (id >= id_count(role))
    throw RangeError(std::string(role_name(role)) + " ID " + std::to_string(id) + " out of range [0, " +
                     std::to_string(id_count(role)) + ")");
  if (role == Role::kPredicate) return terms_[kP][id];
  if (id < so_count()) return terms_[kSO][id];
  return terms_[role == Role::kSubject ? kS : kO][id - so_count()];
}

std::uint64_t Dictionary::size_bytes() const {
  std::uint64_t n = 0;
  for (const auto& cat : terms_) {
    n += 8;
    for (const auto& t : cat) n += 4 + t.size();
  }
  return n;
}

void Dictionary::serialize(BinaryWriter& out) const {
  for (const auto& cat : terms_) {
    out.u64(cat.size());
    for (const auto& t : cat) {
      out.u32(static_cast<std::uint32_t>(t.size()));
      out.bytes(t);
    }
  }
}

Dictionary Dictionary::load(BinaryReader& in) {
  Dictionary d;
  for (auto& cat : d.terms_) {
    const std::uint64_t n = in.u64();
    if (n > in.remaining() / 4) throw FormatError("dictionary: truncated term block");
    cat.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint32_t len = in.u32();
      cat.emplace_back(in.bytes(len));
    }
    if (!std::is_sorted(cat.begin(), cat.end()) || std::adjacent_find(cat.begin(), cat.end()) != cat.end())
      throw FormatError("dictionary: category not strictly sorted");
  }
  return d;
}

}  // namespace k2t
