#include "k2t/ntriples.h"

#include <zlib.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "k2t/error.h"

namespace k2t {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what, 0); }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp <= 0x10FFFF) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    fail("code point out of range");
  }
}

// Reads the hex digits of a \u or \U escape; pos points at 'u' or 'U'.
std::uint32_t read_uchar(std::string_view text, std::size_t& pos) {
  const std::size_t n = text[pos] == 'u' ? 4 : 8;
  ++pos;
  if (pos + n > text.size()) fail("truncated \\u escape");
  std::uint32_t cp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[pos + i];
    if (!std::isxdigit(static_cast<unsigned char>(c))) fail("bad hex digit in escape");
    cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : (std::tolower(c) - 'a' + 10));
  }
  pos += n;
  return cp;
}

bool iri_forbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
         c == '`' || c == '\\';
}

std::string lex_iri(std::string_view text, std::size_t& pos) {
  ++pos;  // '<'
  std::string out;
  while (true) {
    if (pos >= text.size()) fail("unterminated IRI");
    const char c = text[pos];
    if (c == '>') {
      ++pos;
      return out;
    }
    if (c == '\\') {
      ++pos;
      if (pos >= text.size() || (text[pos] != 'u' && text[pos] != 'U')) fail("bad escape in IRI");
      append_utf8(out, read_uchar(text, pos));
      continue;
    }
    if (iri_forbidden(static_cast<unsigned char>(c))) fail(std::string("character not allowed in IRI: '") + c + "'");
    out += c;
    ++pos;
  }
}

std::string lex_literal(std::string_view text, std::size_t& pos) {
  std::string out = "\"";
  ++pos;
  while (true) {
    if (pos >= text.size()) fail("unterminated literal");
    const char c = text[pos];
    if (c == '"') {
      ++pos;
      break;
    }
    if (c == '\n' || c == '\r') fail("newline inside literal");
    if (c == '\\') {
      ++pos;
      if (pos >= text.size()) fail("dangling backslash");
      const char e = text[pos];
      if (e == 'u' || e == 'U') {
        const std::uint32_t cp = read_uchar(text, pos);
        // Characters that must stay escaped keep their short form.
        if (cp == '"') out += "\\\"";
        else if (cp == '\\') out += "\\\\";
        else if (cp == '\n') out += "\\n";
        else if (cp == '\r') out += "\\r";
        else append_utf8(out, cp);
        continue;
      }
      if (std::string_view("tbnrf\"'\\").find(e) == std::string_view::npos) fail("bad escape in literal");
      out += '\\';
      out += e;
      ++pos;
      continue;
    }
    out += c;
    ++pos;
  }
  out += '"';
  if (pos < text.size() && text[pos] == '@') {
    const std::size_t start = pos++;
    std::size_t n = 0;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos, ++n;
    if (n == 0) fail("empty language tag");
    while (pos < text.size() && text[pos] == '-') {
      ++pos;
      n = 0;
      while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos, ++n;
      if (n == 0) fail("bad language subtag");
    }
    out.append(text.substr(start, pos - start));
  } else if (pos + 1 < text.size() && text[pos] == '^' && text[pos + 1] == '^') {
    pos += 2;
    if (pos >= text.size() || text[pos] != '<') fail("datatype must be an IRI");
    out += "^^<";
    out += lex_iri(text, pos);
    out += '>';
  }
  return out;
}

std::string lex_blank(std::string_view text, std::size_t& pos) {
  const std::size_t start = pos;
  pos += 2;  // "_:"
  while (pos < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[pos]);
    if (std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c >= 0x80) ++pos;
    else break;
  }
  while (pos > start + 2 && text[pos - 1] == '.') --pos;  // the statement's dot
  if (pos == start + 2) fail("empty blank node label");
  return std::string(text.substr(start, pos - start));
}

void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
}

RawTriple parse_line(std::string_view line) {
  std::size_t pos = 0;
  RawTriple t;
  skip_ws(line, pos);
  if (pos >= line.size()) fail("missing subject");
  if (line[pos] == '"') fail("literal in subject position");
  t.subject = lex_term(line, pos);
  skip_ws(line, pos);
  if (pos >= line.size() || line[pos] != '<') fail("predicate must be an IRI");
  t.predicate = lex_term(line, pos);
  skip_ws(line, pos);
  if (pos >= line.size()) fail("missing object");
  t.object = lex_term(line, pos);
  skip_ws(line, pos);
  if (pos >= line.size() || line[pos] != '.') fail("missing terminating '.'");
  ++pos;
  skip_ws(line, pos);
  if (pos < line.size() && line[pos] != '#') fail("trailing characters after '.'");
  return t;
}

}  // namespace

TermKind term_kind(std::string_view canonical) {
  if (!canonical.empty() && canonical[0] == '"') return TermKind::kLiteral;
  if (canonical.starts_with("_:")) return TermKind::kBlank;
  return TermKind::kIri;
}

std::string lex_term(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) fail("expected a term");
  const char c = text[pos];
  if (c == '<') return lex_iri(text, pos);
  if (c == '"') return lex_literal(text, pos);
  if (c == '_' && pos + 1 < text.size() && text[pos + 1] == ':') return lex_blank(text, pos);
  fail(std::string("unexpected character '") + c + "'");
}

std::string term_to_ntriples(std::string_view canonical) {
  if (term_kind(canonical) != TermKind::kIri) return std::string(canonical);
  std::string out = "<";
  for (unsigned char c : canonical) {
    if (iri_forbidden(c)) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '>';
  return out;
}

std::string triple_to_ntriples(const TermTriple& t) {
  return term_to_ntriples(t.subject) + ' ' + term_to_ntriples(t.predicate) + ' ' + term_to_ntriples(t.object) + " .";
}

void parse_ntriples(std::string_view text, const std::function<void(RawTriple&&)>& sink, const ParseOptions& options,
                    std::vector<ParseDiagnostic>* diagnostics) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    std::size_t first = 0;
    skip_ws(line, first);
    if (first == line.size() || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    try {
      RawTriple t = parse_line(line);
      t.line = line_no;
      sink(std::move(t));
    } catch (const ParseError& e) {
      // ParseError from the lexer carries line 0; attach the real line here.
      std::string msg = e.what();
      if (auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
      if (options.strict) throw ParseError(msg, line_no);
      if (diagnostics) diagnostics->push_back({line_no, msg});
    }
    if (end == text.size()) break;
  }
}

std::vector<RawTriple> parse_ntriples(std::string_view text, const ParseOptions& options,
                                      std::vector<ParseDiagnostic>* diagnostics) {
  std::vector<RawTriple> out;
  parse_ntriples(text, [&](RawTriple&& t) { out.push_back(std::move(t)); }, options, diagnostics);
  return out;
}

std::string gunzip(std::string_view compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw FormatError("gzip: inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  std::string out;
  char buf[1 << 16];
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END) {
      inflateEnd(&zs);
      throw FormatError("gzip: corrupt stream");
    }
    out.append(buf, sizeof buf - zs.avail_out);
    // Concatenated gzip members.
    if (ret == Z_STREAM_END && zs.avail_in > 0) {
      inflateReset(&zs);
      ret = Z_OK;
    }
  } while (ret != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
  inflateEnd(&zs);
  if (ret != Z_STREAM_END) throw FormatError("gzip: truncated stream");
  return out;
}

std::string read_input_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  std::string bytes = ss.str();
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f && static_cast<unsigned char>(bytes[1]) == 0x8b)
    return gunzip(bytes);
  return bytes;
}

}  // namespace k2t
