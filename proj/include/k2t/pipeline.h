#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/ntriples.h"
#include "k2t/store.h"

namespace k2t {

struct BuildReport {
  std::uint64_t statements = 0;  // well-formed statements read
  std::uint64_t distinct = 0;    // triples after deduplication
  std::vector<ParseDiagnostic> diagnostics;
};

// Two passes: extract terms and build the dictionary, then encode, sort-unique
// and partition by predicate.
TripleStore build_store(std::span<const TermTriple> triples, const K2Config& config = K2Config{},
                        BuildReport* report = nullptr);
TripleStore build_store_from_ntriples(std::string_view text, const ParseOptions& options = {},
                                      BuildReport* report = nullptr, const K2Config& config = K2Config{});
TripleStore build_store_from_file(const std::string& path, const ParseOptions& options = {},
                                  BuildReport* report = nullptr, const K2Config& config = K2Config{});

}  // namespace k2t
