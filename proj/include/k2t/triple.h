#pragma once

#include <compare>
#include <cstdint>

namespace k2t {

using Id = std::uint32_t;

enum class Role { kSubject, kPredicate, kObject };

const char* role_name(Role r);

// Dictionary-encoded triple, 0-based IDs.
struct Triple {
  Id s;
  Id p;
  Id o;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

}  // namespace k2t
