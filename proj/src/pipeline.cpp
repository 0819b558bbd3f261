#include "k2t/pipeline.h"

#include <algorithm>

namespace k2t {

TripleStore build_store(std::span<const TermTriple> triples, const K2Config& config, BuildReport* report) {
  Dictionary dict(triples);
  std::vector<Triple> ids;
  ids.reserve(triples.size());
  for (const auto& t : triples)
    ids.push_back({dict.encode(t.subject, Role::kSubject), dict.encode(t.predicate, Role::kPredicate),
                   dict.encode(t.object, Role::kObject)});
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (report) {
    report->statements += triples.size();
    report->distinct = ids.size();
  }
  return TripleStore(std::move(dict), ids, config);
}

TripleStore build_store_from_ntriples(std::string_view text, const ParseOptions& options, BuildReport* report,
                                      const K2Config& config) {
  std::vector<TermTriple> triples;
  std::vector<ParseDiagnostic>* diags = report ? &report->diagnostics : nullptr;
  parse_ntriples(
      text,
      [&](RawTriple&& t) {
        triples.push_back({std::move(t.subject), std::move(t.predicate), std::move(t.object)});
      },
      options, diags);
  return build_store(triples, config, report);
}

TripleStore build_store_from_file(const std::string& path, const ParseOptions& options, BuildReport* report,
                                  const K2Config& config) {
  return build_store_from_ntriples(read_input_file(path), options, report, config);
}

}  // namespace k2t
