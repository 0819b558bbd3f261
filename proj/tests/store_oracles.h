#pragma once

// Reference answers for patterns and joins, computed by scanning the full
// triple list. Join equality is decided on decoded terms, so the SO-range
// rule is checked rather than assumed.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "k2t/dictionary.h"
#include "k2t/joins.h"
#include "k2t/pipeline.h"
#include "k2t/store.h"

namespace oracle {

using k2t::Id;
using k2t::Role;
using k2t::TermTriple;
using k2t::Triple;
using k2t::TriplePattern;

// The ten statements of the running football example.
inline std::vector<TermTriple> football_triples() {
  return {
      {"Spanish_Team", "represent", "spain"},
      {"Madrid", "capital", "spain"},
      {"Iker_Casillas", "born", "Madrid"},
      {"Iker_Casillas", "playFor", "Spanish_Team"},
      {"Iker_Casillas", "position", "goalkeeper"},
      {"Iker_Casillas", "captain", "Spanish_Team"},
      {"Iniesta", "playFor", "Spanish_Team"},
      {"Iniesta", "position", "midfielder"},
      {"Xavi", "playFor", "Spanish_Team"},
      {"Xavi", "position", "midfielder"},
  };
}

inline std::string football_ntriples() {
  std::string out;
  for (const auto& t : football_triples())
    out += "<" + t.subject + "> <" + t.predicate + "> <" + t.object + "> .\n";
  return out;
}

struct DatasetShape {
  std::size_t triples = 1000;
  std::size_t predicates = 8;
  std::size_t entities = 200;
  double literal_share = 0.1;  // objects drawn from a literal pool
};

// Random terms with a skewed predicate distribution and partial
// subject/object overlap. May contain duplicate statements.
inline std::vector<TermTriple> random_terms(std::mt19937_64& rng, const DatasetShape& shape) {
  const std::size_t n = std::max<std::size_t>(shape.entities, 2);
  std::uniform_int_distribution<std::size_t> subj(0, n * 2 / 3);
  std::uniform_int_distribution<std::size_t> obj(n / 3, n - 1);
  std::uniform_int_distribution<std::size_t> lit(0, n / 4 + 1);
  std::bernoulli_distribution literal(shape.literal_share);
  std::vector<double> weights;
  for (std::size_t i = 0; i < shape.predicates; ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> pred(weights.begin(), weights.end());
  std::vector<TermTriple> out;
  out.reserve(shape.triples);
  for (std::size_t i = 0; i < shape.triples; ++i) {
    TermTriple t;
    t.subject = "http://ex.org/e" + std::to_string(subj(rng));
    t.predicate = "http://ex.org/p" + std::to_string(pred(rng));
    t.object = literal(rng) ? "\"v" + std::to_string(lit(rng)) + "\"" : "http://ex.org/e" + std::to_string(obj(rng));
    out.push_back(std::move(t));
  }
  return out;
}

// Entity-centric data: each subject has a handful of statements drawn from
// the predicate set of its type, and objects are nearby entities, shared
// class values or random entities. Names follow random_terms but are
// zero-padded so that bytewise order follows the numbering.
inline std::vector<TermTriple> clustered_terms(std::mt19937_64& rng, std::size_t triples, std::size_t predicates) {
  const std::size_t entities = std::max<std::size_t>(triples / 5, 1);
  const std::size_t types = 8, per_type = std::min<std::size_t>(6, predicates);
  auto name = [](std::size_t i) {
    std::string n = std::to_string(i);
    return "http://ex.org/e" + std::string(8 - std::min<std::size_t>(n.size(), 8), '0') + n;
  };
  std::uniform_int_distribution<std::size_t> any(0, entities - 1), pslot(0, per_type - 1), cls(0, 63);
  std::geometric_distribution<std::size_t> near(0.05);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TermTriple> out;
  out.reserve(triples);
  while (out.size() < triples) {
    const std::size_t s = any(rng);
    const std::size_t type = s % types;
    const std::size_t n = 1 + std::geometric_distribution<std::size_t>(0.2)(rng);
    for (std::size_t k = 0; k < n && out.size() < triples; ++k) {
      const std::size_t p = (type * 5 + pslot(rng)) % predicates;
      const double r = u(rng);
      std::string o;
      if (r < 0.4) o = name(std::min(entities - 1, s + 1 + near(rng)));
      else if (r < 0.7) o = "\"class" + std::to_string(cls(rng)) + "\"";
      else o = name(any(rng));
      out.push_back({name(s), "http://ex.org/p" + std::to_string(p), std::move(o)});
    }
  }
  return out;
}

// Encoded, deduplicated (s, p, o) list, sorted.
inline std::vector<Triple> encode_all(const k2t::Dictionary& dict, const std::vector<TermTriple>& terms) {
  std::vector<Triple> out;
  for (const auto& t : terms)
    out.push_back({dict.encode(t.subject, Role::kSubject), dict.encode(t.predicate, Role::kPredicate),
                   dict.encode(t.object, Role::kObject)});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline bool matches(const TriplePattern& q, const Triple& t) {
  return (!q.s || *q.s == t.s) && (!q.p || *q.p == t.p) && (!q.o || *q.o == t.o);
}

// Linear scan, ordered (S, O) for a bound predicate and (P, S, O) otherwise.
inline std::vector<Triple> scan(const std::vector<Triple>& triples, const TriplePattern& q) {
  std::vector<Triple> out;
  for (const auto& t : triples)
    if (matches(q, t)) out.push_back(t);
  std::sort(out.begin(), out.end(), [&](const Triple& a, const Triple& b) {
    if (q.p) return std::tie(a.s, a.o) < std::tie(b.s, b.o);
    return std::tie(a.p, a.s, a.o) < std::tie(b.p, b.s, b.o);
  });
  return out;
}

// Pattern with the given shape (bit 2 = S bound, bit 1 = P, bit 0 = O).
// Bound values usually come from a stored triple, sometimes from anywhere in
// the ID ranges so that empty answers are exercised too.
inline TriplePattern random_pattern(std::mt19937_64& rng, const k2t::TripleStore& st,
                                    const std::vector<Triple>& triples, unsigned shape) {
  Triple t{0, 0, 0};
  std::bernoulli_distribution off_data(0.15);
  if (!triples.empty() && !off_data(rng)) {
    t = triples[std::uniform_int_distribution<std::size_t>(0, triples.size() - 1)(rng)];
  } else {
    auto pick = [&](std::uint64_t n) { return n ? static_cast<Id>(std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng)) : 0; };
    t = {pick(st.rows()), pick(st.predicate_count()), pick(st.cols())};
  }
  TriplePattern q;
  if (shape & 4) q.s = t.s;
  if (shape & 2) q.p = t.p;
  if (shape & 1) q.o = t.o;
  return q;
}

inline const std::string& term_at(const k2t::Dictionary& d, Id id, Role r) { return d.decode(id, r); }

// Nested-loop join over the triple list. X equality compares decoded terms.
inline std::vector<k2t::JoinRow> nested_loop_join(const k2t::TripleStore& st, const std::vector<Triple>& triples,
                                                  const k2t::JoinQuery& q) {
  const auto& d = st.dictionary();
  auto slot = [](const Triple& t, Role r) { return r == Role::kSubject ? t.s : r == Role::kPredicate ? t.p : t.o; };
  auto bound = [](const TriplePattern& p, Role r) { return r == Role::kSubject ? p.s : r == Role::kPredicate ? p.p : p.o; };
  std::vector<Triple> lm, rm;
  for (const auto& t : triples) {
    if (matches(q.left, t)) lm.push_back(t);
    if (matches(q.right, t)) rm.push_back(t);
  }
  // Inner loop restricted to right matches with the same X term.
  std::map<std::string, std::vector<const Triple*>> by_term;
  for (const auto& b : rm) by_term[term_at(d, slot(b, q.right_role), q.right_role)].push_back(&b);
  std::vector<k2t::JoinRow> rows;
  for (const auto& a : lm) {
    const auto it = by_term.find(term_at(d, slot(a, q.left_role), q.left_role));
    if (it == by_term.end()) continue;
    for (const Triple* b : it->second) {
      k2t::JoinRow row{};
      std::size_t i = 0;
      row[i++] = slot(a, q.left_role);
      for (Role r : {Role::kSubject, Role::kPredicate, Role::kObject})
        if (r != q.left_role && !bound(q.left, r)) row[i++] = slot(a, r);
      for (Role r : {Role::kSubject, Role::kPredicate, Role::kObject})
        if (r != q.right_role && !bound(q.right, r)) row[i++] = slot(*b, r);
      rows.push_back(row);
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

// Side shapes per class as (predicate variable, node variable) pairs.
inline std::array<std::array<bool, 2>, 2> class_shape(k2t::JoinClass c) {
  using k2t::JoinClass;
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

inline constexpr std::array<k2t::JoinClass, 9> kAllClasses = {
    k2t::JoinClass::A, k2t::JoinClass::B,  k2t::JoinClass::C, k2t::JoinClass::D, k2t::JoinClass::E1,
    k2t::JoinClass::E2, k2t::JoinClass::F, k2t::JoinClass::G, k2t::JoinClass::H};

// A join of class `c` with X in roles (lr, rr). Constants are taken from two
// triples that actually share X when such a pair exists; sides are swapped at
// random so both orientations of asymmetric classes occur.
inline k2t::JoinQuery random_join(std::mt19937_64& rng, const k2t::TripleStore& st, const std::vector<Triple>& triples,
                                  k2t::JoinClass c, Role lr, Role rr) {
  auto shape = class_shape(c);
  if (std::bernoulli_distribution(0.5)(rng)) std::swap(shape[0], shape[1]);
  const auto& d = st.dictionary();
  auto slot = [](const Triple& t, Role r) { return r == Role::kSubject ? t.s : t.o; };
  auto other = [](Role r) { return r == Role::kSubject ? Role::kObject : Role::kSubject; };

  Triple a = triples[std::uniform_int_distribution<std::size_t>(0, triples.size() - 1)(rng)];
  Triple b = triples[std::uniform_int_distribution<std::size_t>(0, triples.size() - 1)(rng)];
  std::vector<std::size_t> partners;
  for (int attempt = 0; attempt < 8 && partners.empty(); ++attempt) {
    a = triples[std::uniform_int_distribution<std::size_t>(0, triples.size() - 1)(rng)];
    const std::string& x = d.decode(slot(a, lr), lr);
    for (std::size_t i = 0; i < triples.size(); ++i)
      if (d.decode(slot(triples[i], rr), rr) == x) partners.push_back(i);
  }
  if (!partners.empty()) b = triples[partners[std::uniform_int_distribution<std::size_t>(0, partners.size() - 1)(rng)]];

  auto make = [&](const Triple& t, Role xr, std::array<bool, 2> s) {
    TriplePattern p;
    if (!s[0]) p.p = t.p;
    if (!s[1]) (other(xr) == Role::kSubject ? p.s : p.o) = slot(t, other(xr));
    return p;
  };
  return {make(a, lr, shape[0]), make(b, rr, shape[1]), lr, rr};
}

}  // namespace oracle
