#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/joins.h"
#include "k2t/store.h"

namespace k2t {

// Minimal query grammar:
//
//   query   := pattern [ '.' ] | pattern '.' pattern [ '.' ]
//   pattern := term term term
//   term    := ?name | <iri> | "literal"[@lang|^^<iri>] | _:label
//
// A join shares exactly one variable, in subject or object position on both
// sides. Any other variable may appear only once in the whole query.
struct QueryTerm {
  bool variable = false;
  std::string text;  // variable name without '?', or canonical term
};

struct QueryPattern {
  QueryTerm s, p, o;
};

struct ParsedQuery {
  std::vector<QueryPattern> patterns;  // one or two
};

// Throws ParseError (line 0) on malformed text or a broken sharing rule.
ParsedQuery parse_query(std::string_view text);

// A parsed query mapped onto a store's IDs.
struct BoundQuery {
  bool is_join = false;
  bool unknown_term = false;  // some constant is absent: the answer is empty
  TriplePattern pattern;
  JoinQuery join;
  std::vector<std::string> columns;  // output variable names, in row order
};

BoundQuery bind_query(const ParsedQuery& q, const Dictionary& dict);

}  // namespace k2t
