#include "k2t/workload.h"

#include <array>

namespace k2t {

std::string pattern_shape_name(unsigned shape) {
  std::string s = "(";
  s += shape & 4 ? "S" : "?S";
  s += shape & 2 ? ",P" : ",?P";
  s += shape & 1 ? ",O)" : ",?O)";
  return s;
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

Id x_of(const Triple& t, Role r) { return r == Role::kSubject ? t.s : t.o; }
Id node_of(const Triple& t, Role x_role) { return x_role == Role::kSubject ? t.o : t.s; }

// (predicate variable, node variable) per side.
std::array<std::array<bool, 2>, 2> shape_of(JoinClass c) {
  switch (c) {
    case JoinClass::A: return {{{false, false}, {false, false}}};
    case JoinClass::B: return {{{false, false}, {false, true}}};
    case JoinClass::C: return {{{false, true}, {false, true}}};
    case JoinClass::D: return {{{false, false}, {true, false}}};
    case JoinClass::E1: return {{{false, true}, {true, false}}};
    case JoinClass::E2: return {{{false, false}, {true, true}}};
    case JoinClass::F: return {{{false, true}, {true, true}}};
    case JoinClass::G: return {{{true, false}, {true, false}}};
    case JoinClass::H: return {{{true, false}, {true, true}}};
  }
  return {};
}

}  // namespace

std::vector<TriplePattern> sample_patterns(const std::vector<Triple>& triples, unsigned shape, std::size_t n,
                                           std::mt19937_64& rng) {
  std::vector<TriplePattern> out;
  if (triples.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const Triple& t = pick(triples, rng);
    TriplePattern q;
    if (shape & 4) q.s = t.s;
    if (shape & 2) q.p = t.p;
    if (shape & 1) q.o = t.o;
    out.push_back(q);
  }
  return out;
}

std::vector<JoinQuery> sample_joins(const TripleStore& st, const std::vector<Triple>& triples, JoinClass c,
                                    Role left_role, Role right_role, std::size_t n, std::mt19937_64& rng) {
  std::vector<JoinQuery> out;
  if (triples.empty()) return out;
  const std::uint64_t so = st.dictionary().so_count();
  const std::uint64_t right_limit = right_role == Role::kSubject ? st.rows() : st.cols();
  for (std::size_t i = 0; i < n; ++i) {
    auto shape = shape_of(c);
    if (std::bernoulli_distribution(0.5)(rng)) std::swap(shape[0], shape[1]);
    Triple a = pick(triples, rng), b = pick(triples, rng);
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Triple cand = pick(triples, rng);
      const Id x = x_of(cand, left_role);
      if ((left_role != right_role && x >= so) || x >= right_limit) continue;
      TriplePattern probe;
      (right_role == Role::kSubject ? probe.s : probe.o) = x;
      const ResultSet partners = st.resolve(probe);
      if (partners.empty()) continue;
      a = cand;
      b = pick(partners, rng);
      break;
    }
    auto make = [](const Triple& t, Role xr, std::array<bool, 2> s) {
      TriplePattern p;
      if (!s[0]) p.p = t.p;
      if (!s[1]) (xr == Role::kSubject ? p.o : p.s) = node_of(t, xr);
      return p;
    };
    out.push_back({make(a, left_role, shape[0]), make(b, right_role, shape[1]), left_role, right_role});
  }
  return out;
}

}  // namespace k2t
