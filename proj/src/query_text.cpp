#include "k2t/query_text.h"

#include <cctype>
#include <map>

#include "k2t/error.h"
#include "k2t/ntriples.h"

namespace k2t {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what, 0); }

void skip_ws(std::string_view t, std::size_t& pos) {
  while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
}

QueryTerm read_term(std::string_view t, std::size_t& pos) {
  if (pos >= t.size()) fail("query: expected a term");
  if (t[pos] == '?') {
    const std::size_t start = ++pos;
    while (pos < t.size() && (std::isalnum(static_cast<unsigned char>(t[pos])) || t[pos] == '_')) ++pos;
    if (pos == start) fail("query: empty variable name");
    return {true, std::string(t.substr(start, pos - start))};
  }
  return {false, lex_term(t, pos)};
}

}  // namespace

ParsedQuery parse_query(std::string_view text) {
  ParsedQuery q;
  std::size_t pos = 0;
  skip_ws(text, pos);
  while (pos < text.size()) {
    if (q.patterns.size() == 2) fail("query: at most two patterns");
    QueryPattern p;
    p.s = read_term(text, pos);
    skip_ws(text, pos);
    p.p = read_term(text, pos);
    skip_ws(text, pos);
    p.o = read_term(text, pos);
    skip_ws(text, pos);
    if (!p.s.variable && term_kind(p.s.text) == TermKind::kLiteral) fail("query: literal in subject position");
    if (!p.p.variable && term_kind(p.p.text) != TermKind::kIri) fail("query: predicate must be an IRI");
    q.patterns.push_back(std::move(p));
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      skip_ws(text, pos);
    } else if (pos < text.size()) {
      fail("query: expected '.' between patterns");
    }
  }
  if (q.patterns.empty()) fail("query: empty");

  // Variable sharing rules.
  std::map<std::string, std::vector<std::pair<std::size_t, char>>> uses;
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    const auto& p = q.patterns[i];
    if (p.s.variable) uses[p.s.text].push_back({i, 's'});
    if (p.p.variable) uses[p.p.text].push_back({i, 'p'});
    if (p.o.variable) uses[p.o.text].push_back({i, 'o'});
  }
  std::size_t shared = 0;
  for (const auto& [name, u] : uses) {
    if (u.size() == 1) continue;
    if (u.size() > 2 || u[0].first == u[1].first) fail("query: variable ?" + name + " repeated within a pattern");
    if (u[0].second == 'p' || u[1].second == 'p') fail("query: join variable ?" + name + " cannot be a predicate");
    ++shared;
  }
  if (q.patterns.size() == 2 && shared != 1) fail("query: the two patterns must share exactly one variable");
  return q;
}

namespace {

void bind_pattern(const QueryPattern& qp, const Dictionary& dict, TriplePattern& out, bool& unknown) {
  auto bind = [&](const QueryTerm& t, Role r, std::optional<Id>& slot) {
    if (t.variable) return;
    if (auto id = dict.find(t.text, r)) slot = *id;
    else unknown = true;
  };
  bind(qp.s, Role::kSubject, out.s);
  bind(qp.p, Role::kPredicate, out.p);
  bind(qp.o, Role::kObject, out.o);
}

}  // namespace

BoundQuery bind_query(const ParsedQuery& q, const Dictionary& dict) {
  BoundQuery b;
  if (q.patterns.size() == 1) {
    const auto& p = q.patterns[0];
    bind_pattern(p, dict, b.pattern, b.unknown_term);
    for (const QueryTerm* t : {&p.s, &p.p, &p.o})
      if (t->variable) b.columns.push_back(t->text);
    return b;
  }
  b.is_join = true;
  const auto& l = q.patterns[0];
  const auto& r = q.patterns[1];
  std::string x;
  for (const QueryTerm* a : {&l.s, &l.o})
    for (const QueryTerm* c : {&r.s, &r.o})
      if (a->variable && c->variable && a->text == c->text) x = a->text;
  b.join.left_role = l.s.variable && l.s.text == x ? Role::kSubject : Role::kObject;
  b.join.right_role = r.s.variable && r.s.text == x ? Role::kSubject : Role::kObject;
  bind_pattern(l, dict, b.join.left, b.unknown_term);
  bind_pattern(r, dict, b.join.right, b.unknown_term);
  b.columns.push_back(x);
  for (const auto* p : {&l, &r})
    for (const QueryTerm* t : {&p->s, &p->p, &p->o})
      if (t->variable && t->text != x) b.columns.push_back(t->text);
  return b;
}

}  // namespace k2t
