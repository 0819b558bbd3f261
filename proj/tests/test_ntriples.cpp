#include <zlib.h>

#include <random>
#include <set>

#include "doctest.h"
#include "k2t/error.h"
#include "k2t/ntriples.h"
#include "k2t/pipeline.h"
#include "store_oracles.h"

using k2t::ParseDiagnostic;
using k2t::RawTriple;

namespace {

std::string gzip(const std::string& in) {
  z_stream zs{};
  deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
  std::string out(deflateBound(&zs, in.size()), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

std::set<k2t::TermTriple> as_set(const std::vector<RawTriple>& v) {
  std::set<k2t::TermTriple> out;
  for (const auto& t : v) out.insert({t.subject, t.predicate, t.object});
  return out;
}

}  // namespace

TEST_CASE("ntriples: minimal statement") {
  const auto v = k2t::parse_ntriples("<a> <p> \"x\" .\n");
  REQUIRE(v.size() == 1);
  CHECK(v[0].subject == "a");
  CHECK(v[0].predicate == "p");
  CHECK(v[0].object == "\"x\"");
  CHECK(v[0].line == 1);
}

TEST_CASE("ntriples: term forms") {
  const auto v = k2t::parse_ntriples(
      "# comment\n"
      "\n"
      "_:b1 <http://x/p> \"hola\"@es-ES .\n"
      "<s> <p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> . # trailing\n"
      "<s> <p> \"caf\\u00E9 \\\"q\\\"\\t\" .\r\n"
      "<s\\u0041> <p> _:n.\n");
  REQUIRE(v.size() == 4);
  CHECK(v[0].subject == "_:b1");
  CHECK(v[0].object == "\"hola\"@es-ES");
  CHECK(v[1].object == "\"5\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  CHECK(v[2].object == "\"caf\xC3\xA9 \\\"q\\\"\\t\"");
  CHECK(v[3].subject == "sA");
  CHECK(v[3].object == "_:n");
  CHECK(v[3].line == 6);
}

TEST_CASE("ntriples: malformed lines in lenient and strict mode") {
  const std::string text = "<a> <p> <b> .\n<a> <p> <b>\n\"lit\" <p> <b> .\n<a> \"p\" <b> .\n<c> <p> <d> .\n";
  std::vector<ParseDiagnostic> diags;
  const auto v = k2t::parse_ntriples(text, {}, &diags);
  CHECK(v.size() == 2);
  REQUIRE(diags.size() == 3);
  CHECK(diags[0].line == 2);
  CHECK(diags[1].line == 3);
  CHECK(diags[2].line == 4);
  try {
    k2t::parse_ntriples(text, {true});
    FAIL("strict mode accepted a bad line");
  } catch (const k2t::ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(k2t::parse_ntriples("<a> <p> \"open .\n", {true}), k2t::ParseError);
  CHECK_THROWS_AS(k2t::parse_ntriples("<a b> <p> <c> .\n", {true}), k2t::ParseError);
}

TEST_CASE("ntriples: emit and reparse random files") {
  std::mt19937_64 rng(17);
  const std::string alphabet = "ab \t\"\\\n\r\xC3\xA9<>z";
  for (int round = 0; round < 30; ++round) {
    std::vector<k2t::TermTriple> terms;
    for (int i = 0; i < 50; ++i) {
      std::string lit = "\"";
      const int len = std::uniform_int_distribution<int>(0, 6)(rng);
      for (int j = 0; j < len; ++j) {
        const char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        if (c == '"' || c == '\\') lit += '\\', lit += c;
        else if (c == '\n') lit += "\\n";
        else if (c == '\r') lit += "\\r";
        else lit += c;
      }
      lit += '"';
      terms.push_back({"http://e/" + std::to_string(i % 7), "http://p/" + std::to_string(i % 3),
                       i % 2 ? lit : "_:b" + std::to_string(i)});
    }
    std::string text;
    for (const auto& t : terms) text += k2t::triple_to_ntriples(t) + "\n";
    const auto back = k2t::parse_ntriples(text, {true});
    CHECK(as_set(back) == std::set<k2t::TermTriple>(terms.begin(), terms.end()));
  }
}

TEST_CASE("ntriples: gzip input") {
  const std::string text = oracle::football_ntriples();
  CHECK(k2t::gunzip(gzip(text)) == text);
  CHECK(k2t::gunzip(gzip(text) + gzip(text)) == text + text);
  const std::string z = gzip(text);
  CHECK_THROWS_AS(k2t::gunzip(z.substr(0, z.size() / 2)), k2t::FormatError);
}

TEST_CASE("pipeline: football file and duplicates") {
  k2t::BuildReport rep;
  const auto st = k2t::build_store_from_ntriples(oracle::football_ntriples(), {}, &rep);
  CHECK(rep.statements == 10);
  CHECK(rep.distinct == 10);
  CHECK(st.dictionary().so_count() == 2);
  CHECK(st.dictionary().p_count() == 6);

  k2t::BuildReport rep2;
  const auto twice = k2t::build_store_from_ntriples(oracle::football_ntriples() + oracle::football_ntriples(), {}, &rep2);
  CHECK(rep2.statements == 20);
  CHECK(rep2.distinct == 10);
  CHECK(twice.serialize() == st.serialize());
}

TEST_CASE("pipeline: random files count distinct triples") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 10; ++round) {
    const auto terms = oracle::random_terms(rng, {700, 9, 60, 0.3});
    std::string text;
    for (const auto& t : terms) {
      k2t::TermTriple iri = t;
      text += k2t::triple_to_ntriples(iri) + "\n";
    }
    const auto st = k2t::build_store_from_ntriples(text);
    CHECK(st.triple_count() == std::set<k2t::TermTriple>(terms.begin(), terms.end()).size());
    CHECK(k2t::build_store_from_ntriples(text).serialize() == st.serialize());
  }
}
