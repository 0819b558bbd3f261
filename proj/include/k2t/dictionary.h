#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/serialize.h"
#include "k2t/triple.h"

namespace k2t {

// A triple of terms as parsed, before encoding.
struct TermTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  friend auto operator<=>(const TermTriple&, const TermTriple&) = default;
};

// Four-category dictionary.
//
//   SO  terms used as both subject and object -> [0, |SO|)
//   S   subject-only terms                    -> [|SO|, |SO|+|S|)
//   O   object-only terms                     -> [|SO|, |SO|+|O|)
//   P   predicates                            -> [0, |P|)
//
// IDs are 0-based; the S and O ranges overlap on purpose since the role
// disambiguates them. Every category is sorted bytewise.
class Dictionary {
 public:
  enum Category { kSO = 0, kS = 1, kO = 2, kP = 3 };

  Dictionary() = default;
  explicit Dictionary(std::span<const TermTriple> triples);
  // Builds from already separated term sets (duplicates allowed).
  Dictionary(std::vector<std::string> subjects, std::vector<std::string> predicates,
             std::vector<std::string> objects);

  std::size_t so_count() const { return terms_[kSO].size(); }
  std::size_t s_count() const { return terms_[kS].size(); }
  std::size_t o_count() const { return terms_[kO].size(); }
  std::size_t p_count() const { return terms_[kP].size(); }
  // Number of distinct subject / object IDs.
  std::size_t subject_count() const { return so_count() + s_count(); }
  std::size_t object_count() const { return so_count() + o_count(); }
  std::size_t id_count(Role role) const;

  std::optional<Id> find(std::string_view term, Role role) const;
  // Throws NotFoundError for terms unknown in that role.
  Id encode(std::string_view term, Role role) const;
  // Throws RangeError for IDs outside the role's range.
  const std::string& decode(Id id, Role role) const;

  const std::vector<std::string>& category(Category c) const { return terms_[c]; }
  std::uint64_t size_bytes() const;

  void serialize(BinaryWriter& out) const;
  static Dictionary load(BinaryReader& in);

 private:
  std::array<std::vector<std::string>, 4> terms_;
};

}  // namespace k2t
