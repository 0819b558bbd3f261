#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "k2t/dictionary.h"

namespace k2t {

// One parsed statement. Terms are in canonical form: IRIs without angle
// brackets, blank nodes as "_:label", literals verbatim with quotes and any
// language tag or datatype suffix. \u and \U escapes are decoded to UTF-8.
struct RawTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  std::size_t line = 0;
};

struct ParseDiagnostic {
  std::size_t line;
  std::string message;
};

struct ParseOptions {
  bool strict = false;  // abort on the first malformed line
};

enum class TermKind { kIri, kBlank, kLiteral };

TermKind term_kind(std::string_view canonical);

// Lexes one term starting at text[pos] and advances pos past it. Throws
// ParseError (line 0) on malformed input.
std::string lex_term(std::string_view text, std::size_t& pos);

// Canonical term back to N-Triples surface syntax.
std::string term_to_ntriples(std::string_view canonical);
std::string triple_to_ntriples(const TermTriple& t);

// Streams statements to `sink`. Malformed lines go to `diagnostics` and are
// skipped unless options.strict, in which case ParseError is thrown.
void parse_ntriples(std::string_view text, const std::function<void(RawTriple&&)>& sink,
                    const ParseOptions& options = {}, std::vector<ParseDiagnostic>* diagnostics = nullptr);

std::vector<RawTriple> parse_ntriples(std::string_view text, const ParseOptions& options = {},
                                      std::vector<ParseDiagnostic>* diagnostics = nullptr);

// Reads a file, transparently inflating gzip input (detected by magic bytes).
std::string read_input_file(const std::string& path);
std::string gunzip(std::string_view compressed);

}  // namespace k2t
