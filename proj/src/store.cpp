#include "k2t/store.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "k2t/error.h"

namespace k2t {

namespace {

std::vector<Id> all_predicates(std::size_t n) {
  std::vector<Id> v(n);
  std::iota(v.begin(), v.end(), Id{0});
  return v;
}

std::vector<Id> intersect_sorted(const std::vector<Id>& a, const std::vector<Id>& b) {
  std::vector<Id> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TripleStore::TripleStore(Dictionary dict, std::span<const Triple> input, const K2Config& config)
    : dict_(std::move(dict)), config_(config) {
  const std::uint64_t rows = dict_.subject_count(), cols = dict_.object_count();
  const std::size_t npred = dict_.p_count();
  n_prime_ = K2Tree::padded_side(std::max<std::uint64_t>({rows, cols, 1}), config_);

  std::vector<Triple> triples(input.begin(), input.end());
  for (const Triple& t : triples)
    if (t.s >= rows || t.p >= npred || t.o >= cols)
      throw InputError("store: triple (" + std::to_string(t.s) + ", " + std::to_string(t.p) + ", " +
                       std::to_string(t.o) + ") outside the dictionary ranges");
  // Partition by predicate: sorting by (p, s, o) groups each subset.
  std::sort(triples.begin(), triples.end(),
            [](const Triple& a, const Triple& b) { return std::tie(a.p, a.s, a.o) < std::tie(b.p, b.s, b.o); });
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  trees_.reserve(npred);
  std::size_t i = 0;
  std::vector<Cell> cells;
  for (Id p = 0; p < npred; ++p) {
    cells.clear();
    for (; i < triples.size() && triples[i].p == p; ++i) cells.push_back(Cell{triples[i].s, triples[i].o});
    trees_.emplace_back(cells, rows, cols, config_);
  }
  sp_ = PredicateIndex(triples, Role::kSubject, rows, npred);
  op_ = PredicateIndex(triples, Role::kObject, cols, npred);
}

std::uint64_t TripleStore::triple_count() const {
  std::uint64_t n = 0;
  for (const auto& t : trees_) n += t.cell_count();
  return n;
}

void TripleStore::check_pattern(const TriplePattern& pat) const {
  if (pat.s && *pat.s >= rows()) throw RangeError("pattern subject ID " + std::to_string(*pat.s) + " out of range");
  if (pat.p && *pat.p >= predicate_count()) throw RangeError("pattern predicate ID " + std::to_string(*pat.p) + " out of range");
  if (pat.o && *pat.o >= cols()) throw RangeError("pattern object ID " + std::to_string(*pat.o) + " out of range");
}

ResultSet TripleStore::resolve(const TriplePattern& pat, QueryStats* stats, const ResolveOptions& options) const {
  check_pattern(pat);
  TraversalStats ts;
  TraversalStats* tsp = stats ? &ts : nullptr;
  ResultSet out;
  auto visit = [&](Id p) {
    if (stats) ++stats->trees_visited;
    return std::cref(trees_[p]);
  };

  if (pat.p) {
    const Id p = *pat.p;
    const K2Tree& t = visit(p);
    if (pat.s && pat.o) {
      if (t.cell(*pat.s, *pat.o, tsp)) out.push_back({*pat.s, p, *pat.o});
    } else if (pat.s) {
      for (Id o : t.direct_neighbors(*pat.s, tsp)) out.push_back({*pat.s, p, o});
    } else if (pat.o) {
      for (Id s : t.reverse_neighbors(*pat.o, tsp)) out.push_back({s, p, *pat.o});
    } else {
      for (const Cell& c : t.all(tsp)) out.push_back({c.row, p, c.col});
    }
  } else {
    const bool idx = options.use_predicate_index;
    if (pat.s && pat.o) {
      const auto preds = idx ? intersect_sorted(sp_.predicates_of(*pat.s), op_.predicates_of(*pat.o))
                             : all_predicates(predicate_count());
      for (Id p : preds)
        if (visit(p).get().cell(*pat.s, *pat.o, tsp)) out.push_back({*pat.s, p, *pat.o});
    } else if (pat.s) {
      const auto preds = idx ? sp_.predicates_of(*pat.s) : all_predicates(predicate_count());
      for (Id p : preds)
        for (Id o : visit(p).get().direct_neighbors(*pat.s, tsp)) out.push_back({*pat.s, p, o});
    } else if (pat.o) {
      const auto preds = idx ? op_.predicates_of(*pat.o) : all_predicates(predicate_count());
      for (Id p : preds)
        for (Id s : visit(p).get().reverse_neighbors(*pat.o, tsp)) out.push_back({s, p, *pat.o});
    } else {
      for (Id p = 0; p < predicate_count(); ++p)
        for (const Cell& c : visit(p).get().all(tsp)) out.push_back({c.row, p, c.col});
    }
  }
  if (stats) stats->nodes_visited += ts.nodes;
  return out;
}

std::string TripleStore::serialize() const {
  BinaryWriter out;
  out.bytes(std::string_view(kMagic, 4));
  out.u32(kFormatVersion);
  dict_.serialize(out);
  out.u64(rows());
  out.u64(cols());
  out.u32(config_.k_upper);
  out.u32(config_.upper_levels);
  out.u32(config_.k_lower);
  out.u32(config_.leaf_size);
  out.u32(static_cast<std::uint32_t>(trees_.size()));
  for (const auto& t : trees_) {
    out.u64(t.cell_count());
    t.serialize(out);
  }
  sp_.serialize(out);
  op_.serialize(out);
  return out.take();
}

TripleStore TripleStore::load(std::string_view bytes) {
  BinaryReader in(bytes);
  if (in.remaining() < 8 || in.bytes(4) != std::string_view(kMagic, 4)) throw FormatError("store: bad magic");
  if (const auto v = in.u32(); v != kFormatVersion)
    throw FormatError("store: unsupported format version " + std::to_string(v));
  TripleStore st{Raw{}};
  st.dict_ = Dictionary::load(in);
  const std::uint64_t rows = in.u64(), cols = in.u64();
  if (rows != st.dict_.subject_count() || cols != st.dict_.object_count())
    throw FormatError("store: geometry does not match dictionary");
  st.config_.k_upper = in.u32();
  st.config_.upper_levels = in.u32();
  st.config_.k_lower = in.u32();
  st.config_.leaf_size = in.u32();
  try {
    st.n_prime_ = K2Tree::padded_side(std::max<std::uint64_t>({rows, cols, 1}), st.config_);
  } catch (const InputError& e) {
    throw FormatError(std::string("store: ") + e.what());
  }
  const std::uint32_t npred = in.u32();
  if (npred != st.dict_.p_count()) throw FormatError("store: predicate count does not match dictionary");
  st.trees_.reserve(npred);
  for (std::uint32_t p = 0; p < npred; ++p) {
    const std::uint64_t count = in.u64();
    K2Tree t = K2Tree::load(in);
    if (t.cell_count() != count) throw FormatError("store: predicate count mismatch");
    if (t.n_prime() != st.n_prime_ || !(t.config() == st.config_)) throw FormatError("store: tree geometry mismatch");
    st.trees_.push_back(std::move(t));
  }
  st.sp_ = PredicateIndex::load(in);
  st.op_ = PredicateIndex::load(in);
  if (st.sp_.entity_count() != rows || st.op_.entity_count() != cols)
    throw FormatError("store: SP/OP index size mismatch");
  if (!in.done()) throw FormatError("store: trailing bytes");
  return st;
}

void TripleStore::save_file(const std::string& path) const {
  const std::string bytes = serialize();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

TripleStore TripleStore::load_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return load(ss.str());
}

StoreSizes TripleStore::sizes() const {
  StoreSizes s;
  BinaryWriter d;
  dict_.serialize(d);
  s.dictionary = d.size();
  for (const auto& t : trees_) {
    BinaryWriter w;
    t.serialize(w);
    s.trees += w.size() + 8;
  }
  BinaryWriter sp, op;
  sp_.serialize(sp);
  op_.serialize(op);
  s.sp = sp.size();
  s.op = op.size();
  s.total = serialize().size();
  return s;
}

}  // namespace k2t
