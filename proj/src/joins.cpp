#include "k2t/joins.h"

#include <algorithm>
#include <numeric>
#include <queue>

#include "k2t/error.h"

namespace k2t {

namespace {

// One pattern of the join seen from the join variable.
struct SideView {
  const TriplePattern* pat;
  Role x_role;
  bool pred_var;
  bool node_var;  // the non-joined node

  std::optional<Id> node() const { return x_role == Role::kSubject ? pat->o : pat->s; }
  std::size_t var_count() const { return (pred_var ? 1 : 0) + (node_var ? 1 : 0); }
  Id x_of(const Triple& t) const { return x_role == Role::kSubject ? t.s : t.o; }

  // The pattern's variables other than X, in (S, P, O) order, for a binding
  // with predicate p and non-joined node `other`.
  void emit_vars(Id p, Id other, Id* out) const {
    std::size_t i = 0;
    if (x_role == Role::kSubject) {
      if (pred_var) out[i++] = p;
      if (node_var) out[i++] = other;
    } else {
      if (node_var) out[i++] = other;
      if (pred_var) out[i++] = p;
    }
  }
  void emit_vars(const Triple& t, Id* out) const { emit_vars(t.p, x_role == Role::kSubject ? t.o : t.s, out); }

  void append_columns(std::vector<JoinColumn>& cols, JoinColumn::Origin origin) const {
    const Role node_role = x_role == Role::kSubject ? Role::kObject : Role::kSubject;
    if (x_role == Role::kSubject) {
      if (pred_var) cols.push_back({origin, Role::kPredicate});
      if (node_var) cols.push_back({origin, node_role});
    } else {
      if (node_var) cols.push_back({origin, node_role});
      if (pred_var) cols.push_back({origin, Role::kPredicate});
    }
  }
};

// A side binding: X plus up to two variable values.
struct Binding {
  Id x;
  std::array<Id, 2> vars;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};

bool cross_roles(const JoinQuery& q) { return q.left_role != q.right_role; }

void validate(const JoinQuery& q) {
  auto check = [](const TriplePattern& p, Role r, const char* side) {
    if (r == Role::kPredicate) throw InputError(std::string(side) + ": join variable cannot be a predicate");
    const auto& slot = r == Role::kSubject ? p.s : p.o;
    if (slot) throw InputError(std::string(side) + ": join position must be a variable");
  };
  check(q.left, q.left_role, "left pattern");
  check(q.right, q.right_role, "right pattern");
}

void validate_ids(const TripleStore& st, const TriplePattern& p) {
  if ((p.s && *p.s >= st.rows()) || (p.o && *p.o >= st.cols()) || (p.p && *p.p >= st.predicate_count()))
    throw RangeError("join pattern ID out of range");
}

SideView view(const TriplePattern& p, Role x_role) {
  SideView v{&p, x_role, !p.p.has_value(), false};
  v.node_var = !v.node().has_value();
  return v;
}

std::vector<JoinColumn> columns_for(const JoinQuery& q, const SideView& l, const SideView& r) {
  std::vector<JoinColumn> cols{{JoinColumn::kJoinVar, q.left_role == Role::kObject && q.right_role == Role::kObject
                                                          ? Role::kObject
                                                          : Role::kSubject}};
  l.append_columns(cols, JoinColumn::kLeft);
  r.append_columns(cols, JoinColumn::kRight);
  return cols;
}

JoinRow make_row(Id x, const SideView& l, const std::array<Id, 2>& lv, const SideView& r, const std::array<Id, 2>& rv) {
  JoinRow row{};
  row[0] = x;
  std::size_t i = 1;
  for (std::size_t k = 0; k < l.var_count(); ++k) row[i++] = lv[k];
  for (std::size_t k = 0; k < r.var_count(); ++k) row[i++] = rv[k];
  return row;
}

void finish(JoinResult& res) {
  std::sort(res.rows.begin(), res.rows.end());
  res.rows.erase(std::unique(res.rows.begin(), res.rows.end()), res.rows.end());
}

// Upper bound (exclusive) for X values that can join.
std::uint64_t x_limit(const TripleStore& st, const JoinQuery& q) {
  if (cross_roles(q)) return st.dictionary().so_count();
  return q.left_role == Role::kSubject ? st.rows() : st.cols();
}

std::vector<Id> candidate_predicates(const TripleStore& st, const SideView& v, bool use_index) {
  if (!v.pred_var) return {*v.pat->p};
  std::vector<Id> all(st.predicate_count());
  std::iota(all.begin(), all.end(), Id{0});
  if (!use_index) return all;
  if (auto n = v.node()) return v.x_role == Role::kSubject ? st.predicates_of_object(*n) : st.predicates_of_subject(*n);
  return all;
}

// Resolves one side into bindings sorted by (X, vars). Results come in runs,
// one per predicate; runs already ordered by X are kept, the rest sorted,
// then all runs are merged.
std::vector<Binding> resolve_side(const TripleStore& st, const SideView& v, std::uint64_t xmax, JoinStats* stats,
                                  const ResolveOptions& ropt) {
  QueryStats qs;
  const ResultSet rs = st.resolve(*v.pat, &qs, ropt);
  if (stats) {
    stats->nodes_visited += qs.nodes_visited;
    stats->trees_visited += qs.trees_visited;
  }
  std::vector<std::vector<Binding>> runs;
  for (std::size_t i = 0; i < rs.size();) {
    const Id p = rs[i].p;
    std::vector<Binding> run;
    for (; i < rs.size() && rs[i].p == p; ++i) {
      const Id x = v.x_of(rs[i]);
      if (x >= xmax) continue;
      Binding b{x, {0, 0}};
      v.emit_vars(rs[i], b.vars.data());
      run.push_back(b);
    }
    if (!std::is_sorted(run.begin(), run.end())) std::sort(run.begin(), run.end());
    if (!run.empty()) runs.push_back(std::move(run));
  }
  if (runs.size() == 1) return std::move(runs[0]);

  // k-way merge.
  using Head = std::pair<Binding, std::size_t>;
  auto cmp = [](const Head& a, const Head& b) { return b.first < a.first; };
  std::priority_queue<Head, std::vector<Head>, decltype(cmp)> heap(cmp);
  std::vector<std::size_t> next(runs.size(), 1);
  std::size_t total = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    heap.push({runs[r][0], r});
    total += runs[r].size();
  }
  std::vector<Binding> out;
  out.reserve(total);
  while (!heap.empty()) {
    auto [b, r] = heap.top();
    heap.pop();
    if (out.empty() || !(out.back() == b)) out.push_back(b);
    if (next[r] < runs[r].size()) heap.push({runs[r][next[r]++], r});
  }
  return out;
}

TriplePattern substitute(const TriplePattern& p, Role x_role, Id x) {
  TriplePattern out = p;
  (x_role == Role::kSubject ? out.s : out.o) = x;
  return out;
}

}  // namespace

const char* join_class_name(JoinClass c) {
  switch (c) {
    case JoinClass::A: return "A";
    case JoinClass::B: return "B";
    case JoinClass::C: return "C";
    case JoinClass::D: return "D";
    case JoinClass::E1: return "E1";
    case JoinClass::E2: return "E2";
    case JoinClass::F: return "F";
    case JoinClass::G: return "G";
    case JoinClass::H: return "H";
  }
  return "?";
}

const char* strategy_name(JoinStrategy s) {
  switch (s) {
    case JoinStrategy::kChain: return "chain";
    case JoinStrategy::kIndependent: return "independent";
    case JoinStrategy::kInteractive: return "interactive";
    case JoinStrategy::kAuto: return "auto";
  }
  return "?";
}

std::string join_variant(const JoinQuery& q) {
  std::string s;
  s += q.left_role == Role::kSubject ? 'S' : 'O';
  s += q.right_role == Role::kSubject ? 'S' : 'O';
  return s;
}

JoinClass classify_join(const JoinQuery& q) {
  validate(q);
  const SideView l = view(q.left, q.left_role), r = view(q.right, q.right_role);
  const int preds = l.pred_var + r.pred_var;
  const int nodes = l.node_var + r.node_var;
  switch (preds) {
    case 0: return nodes == 0 ? JoinClass::A : nodes == 1 ? JoinClass::B : JoinClass::C;
    case 1:
      if (nodes == 0) return JoinClass::D;
      if (nodes == 2) return JoinClass::F;
      // One variable predicate and one variable node: same side or not.
      return (l.pred_var && l.node_var) || (r.pred_var && r.node_var) ? JoinClass::E2 : JoinClass::E1;
    default:
      if (nodes == 0) return JoinClass::G;
      if (nodes == 1) return JoinClass::H;
      throw UnsupportedError("joins with every position variable (class I) are not supported");
  }
}

bool strategy_allowed(JoinClass c, JoinStrategy s) {
  switch (s) {
    case JoinStrategy::kChain:
    case JoinStrategy::kInteractive:
    case JoinStrategy::kAuto: return true;
    case JoinStrategy::kIndependent:
      return c == JoinClass::A || c == JoinClass::B || c == JoinClass::C || c == JoinClass::D ||
             c == JoinClass::E1 || c == JoinClass::G;
  }
  return false;
}

namespace {

std::vector<JoinSide> chain_starts_for(const JoinQuery& q, JoinClass c) {
  const SideView l = view(q.left, q.left_role), r = view(q.right, q.right_role);
  auto pick = [&](auto&& pred) {
    std::vector<JoinSide> out;
    if (pred(l)) out.push_back(JoinSide::kLeft);
    if (pred(r)) out.push_back(JoinSide::kRight);
    return out;
  };
  switch (c) {
    case JoinClass::B:
    case JoinClass::H: return pick([](const SideView& v) { return !v.node_var; });
    case JoinClass::D:
    case JoinClass::F: return pick([](const SideView& v) { return !v.pred_var; });
    case JoinClass::E2: return pick([](const SideView& v) { return !v.pred_var && !v.node_var; });
    default: return {JoinSide::kLeft, JoinSide::kRight};
  }
}

}  // namespace

std::vector<JoinSide> chain_starts(JoinClass c) {
  // Shape-independent answer for the canonical orientation of each class.
  switch (c) {
    case JoinClass::B:
    case JoinClass::E2:
    case JoinClass::H: return {JoinSide::kRight};
    case JoinClass::D:
    case JoinClass::F: return {JoinSide::kLeft};
    default: return {JoinSide::kLeft, JoinSide::kRight};
  }
}

std::uint64_t estimate_cardinality(const TripleStore& st, const TriplePattern& pattern, Role x_role) {
  const SideView v = view(pattern, x_role);
  std::uint64_t n = 0;
  for (Id p : candidate_predicates(st, v, true)) n += st.count(p);
  return n;
}

JoinResult join_chain(const TripleStore& st, const JoinQuery& q, JoinStats* stats, const JoinOptions& options) {
  const JoinClass cls = classify_join(q);
  validate_ids(st, q.left);
  validate_ids(st, q.right);
  const SideView l = view(q.left, q.left_role), r = view(q.right, q.right_role);
  const auto starts = chain_starts_for(q, cls);
  const std::uint64_t el = estimate_cardinality(st, q.left, q.left_role);
  const std::uint64_t er = estimate_cardinality(st, q.right, q.right_role);
  JoinSide first = starts.front();
  if (starts.size() == 2) first = er < el ? JoinSide::kRight : JoinSide::kLeft;
  if (stats) {
    stats->strategy = JoinStrategy::kChain;
    stats->first = first;
    stats->estimate_left = el;
    stats->estimate_right = er;
  }
  const SideView& a = first == JoinSide::kLeft ? l : r;
  const SideView& b = first == JoinSide::kLeft ? r : l;
  const ResolveOptions ropt{options.use_predicate_index};

  JoinResult res;
  res.columns = columns_for(q, l, r);
  const std::vector<Binding> first_side = resolve_side(st, a, x_limit(st, q), stats, ropt);

  for (std::size_t i = 0; i < first_side.size();) {
    const Id x = first_side[i].x;
    std::size_t j = i;
    while (j < first_side.size() && first_side[j].x == x) ++j;
    if (stats) ++stats->probes;
    QueryStats qs;
    const ResultSet matches = st.resolve(substitute(*b.pat, b.x_role, x), &qs, ropt);
    if (stats) {
      stats->nodes_visited += qs.nodes_visited;
      stats->trees_visited += qs.trees_visited;
    }
    for (const Triple& t : matches) {
      std::array<Id, 2> bv{0, 0};
      b.emit_vars(t, bv.data());
      for (std::size_t k = i; k < j; ++k) {
        const auto& av = first_side[k].vars;
        res.rows.push_back(first == JoinSide::kLeft ? make_row(x, l, av, r, bv) : make_row(x, l, bv, r, av));
      }
    }
    i = j;
  }
  finish(res);
  return res;
}

JoinResult join_independent(const TripleStore& st, const JoinQuery& q, JoinStats* stats, const JoinOptions& options) {
  const JoinClass cls = classify_join(q);
  if (!strategy_allowed(cls, JoinStrategy::kIndependent))
    throw StrategyError(std::string("independent evaluation does not apply to class ") + join_class_name(cls));
  validate_ids(st, q.left);
  validate_ids(st, q.right);
  const SideView l = view(q.left, q.left_role), r = view(q.right, q.right_role);
  if (stats) stats->strategy = JoinStrategy::kIndependent;
  const ResolveOptions ropt{options.use_predicate_index};
  const std::uint64_t xmax = x_limit(st, q);
  const auto lb = resolve_side(st, l, xmax, stats, ropt);
  const auto rb = resolve_side(st, r, xmax, stats, ropt);

  JoinResult res;
  res.columns = columns_for(q, l, r);
  std::size_t i = 0, j = 0;
  while (i < lb.size() && j < rb.size()) {
    if (lb[i].x < rb[j].x) {
      ++i;
    } else if (rb[j].x < lb[i].x) {
      ++j;
    } else {
      const Id x = lb[i].x;
      std::size_t ie = i, je = j;
      while (ie < lb.size() && lb[ie].x == x) ++ie;
      while (je < rb.size() && rb[je].x == x) ++je;
      for (std::size_t a = i; a < ie; ++a)
        for (std::size_t b = j; b < je; ++b) res.rows.push_back(make_row(x, l, lb[a].vars, r, rb[b].vars));
      i = ie;
      j = je;
    }
  }
  finish(res);
  return res;
}

namespace {

struct SideCursor {
  Id pred;
  NodeCursor node;
};

struct Frontier {
  std::uint64_t x_origin;
  std::uint64_t side;
  int level;
  std::vector<SideCursor> left;
  std::vector<SideCursor> right;
};

// Per-side constants for the coordinated descent.
struct Walker {
  const TripleStore* st;
  SideView v;
  std::optional<Id> fixed_other;

  std::uint64_t x_of(const NodeCursor& c) const { return v.x_role == Role::kSubject ? c.row : c.col; }
  std::uint64_t other_of(const NodeCursor& c) const { return v.x_role == Role::kSubject ? c.col : c.row; }

  bool keeps(const NodeCursor& c, std::uint64_t xmax) const {
    if (!c.bit) return false;
    if (x_of(c) >= xmax) return false;
    if (fixed_other) {
      const std::uint64_t o = other_of(c);
      if (*fixed_other < o || *fixed_other >= o + c.side) return false;
    }
    return true;
  }
};

}  // namespace

JoinResult join_interactive(const TripleStore& st, const JoinQuery& q, JoinStats* stats, const JoinOptions& options) {
  classify_join(q);
  validate_ids(st, q.left);
  validate_ids(st, q.right);
  const SideView l = view(q.left, q.left_role), r = view(q.right, q.right_role);
  if (stats) stats->strategy = JoinStrategy::kInteractive;
  JoinResult res;
  res.columns = columns_for(q, l, r);
  if (st.predicate_count() == 0) return res;

  const Walker wl{&st, l, l.node()}, wr{&st, r, r.node()};
  const std::uint64_t xmax = x_limit(st, q);
  const K2Tree& geometry = st.tree(0);
  const std::uint64_t leaf = geometry.config().leaf_size;

  Frontier root{0, st.n_prime(), -1, {}, {}};
  for (Id p : candidate_predicates(st, l, options.use_predicate_index)) root.left.push_back({p, st.tree(p).root()});
  for (Id p : candidate_predicates(st, r, options.use_predicate_index)) root.right.push_back({p, st.tree(p).root()});
  if (stats) stats->trees_visited += root.left.size() + root.right.size();
  if (root.left.empty() || root.right.empty()) {
    if (options.on_prune) options.on_prune(0, st.n_prime());
    return res;
  }

  std::vector<Frontier> work;
  work.push_back(std::move(root));
  std::vector<NodeCursor> kids;
  // Per-X-offset bindings at the leaf level: (pred, other).
  std::vector<std::vector<std::pair<Id, Id>>> lhits(leaf), rhits(leaf);

  while (!work.empty()) {
    Frontier f = std::move(work.back());
    work.pop_back();
    if (stats) ++stats->pairs;

    const bool at_leaves = geometry.is_leaf_block(f.left.front().node);
    if (at_leaves) {
      for (auto& h : lhits) h.clear();
      for (auto& h : rhits) h.clear();
      auto collect = [&](const Walker& w, const std::vector<SideCursor>& cursors, auto& hits) {
        for (const SideCursor& sc : cursors) {
          std::uint64_t word = st.tree(sc.pred).leaf_word(sc.node);
          if (stats) ++stats->nodes_visited;
          while (word) {
            const unsigned o = static_cast<unsigned>(__builtin_ctzll(word));
            word &= word - 1;
            const std::uint64_t row = sc.node.row + o / leaf, col = sc.node.col + o % leaf;
            const std::uint64_t x = w.v.x_role == Role::kSubject ? row : col;
            const std::uint64_t other = w.v.x_role == Role::kSubject ? col : row;
            if (x >= xmax || (w.fixed_other && *w.fixed_other != other)) continue;
            hits[x - f.x_origin].emplace_back(sc.pred, static_cast<Id>(other));
          }
        }
      };
      collect(wl, f.left, lhits);
      collect(wr, f.right, rhits);
      for (std::uint64_t dx = 0; dx < leaf; ++dx) {
        if (lhits[dx].empty() || rhits[dx].empty()) continue;
        const Id x = static_cast<Id>(f.x_origin + dx);
        for (const auto& [lp, lo] : lhits[dx]) {
          std::array<Id, 2> lv{0, 0};
          l.emit_vars(lp, lo, lv.data());
          for (const auto& [rp, ro] : rhits[dx]) {
            std::array<Id, 2> rv{0, 0};
            r.emit_vars(rp, ro, rv.data());
            res.rows.push_back(make_row(x, l, lv, r, rv));
          }
        }
      }
      continue;
    }

    // Internal step: split both frontiers by X sub-interval.
    const std::size_t child_level = static_cast<std::size_t>(f.level + 1);
    const std::uint64_t k = geometry.level_k(child_level);
    const std::uint64_t cs = geometry.level_side(child_level);
    std::vector<std::vector<SideCursor>> lb(k), rb(k);
    auto split = [&](const Walker& w, const std::vector<SideCursor>& cursors, auto& buckets) {
      for (const SideCursor& sc : cursors) {
        kids.clear();
        st.tree(sc.pred).children(sc.node, kids);
        if (stats) stats->nodes_visited += kids.size();
        for (const NodeCursor& ch : kids)
          if (w.keeps(ch, xmax)) buckets[(w.x_of(ch) - f.x_origin) / cs].push_back({sc.pred, ch});
      }
    };
    split(wl, f.left, lb);
    split(wr, f.right, rb);
    for (std::uint64_t j = 0; j < k; ++j) {
      if (lb[j].empty() || rb[j].empty()) {
        if (options.on_prune && (!lb[j].empty() || !rb[j].empty()))
          options.on_prune(f.x_origin + j * cs, f.x_origin + (j + 1) * cs);
        continue;
      }
      work.push_back(Frontier{f.x_origin + j * cs, cs, static_cast<int>(child_level), std::move(lb[j]), std::move(rb[j])});
    }
  }
  finish(res);
  return res;
}

JoinResult join(const TripleStore& st, const JoinQuery& q, JoinStrategy strategy, JoinStats* stats,
                const JoinOptions& options) {
  const JoinClass cls = classify_join(q);
  if (!strategy_allowed(cls, strategy))
    throw StrategyError(std::string(strategy_name(strategy)) + " evaluation does not apply to class " +
                        join_class_name(cls));
  switch (strategy) {
    case JoinStrategy::kChain: return join_chain(st, q, stats, options);
    case JoinStrategy::kIndependent: return join_independent(st, q, stats, options);
    case JoinStrategy::kInteractive: return join_interactive(st, q, stats, options);
    case JoinStrategy::kAuto: break;
  }
  validate_ids(st, q.left);
  validate_ids(st, q.right);
  const std::uint64_t el = estimate_cardinality(st, q.left, q.left_role);
  const std::uint64_t er = estimate_cardinality(st, q.right, q.right_role);
  if (stats) {
    stats->estimate_left = el;
    stats->estimate_right = er;
  }
  JoinStrategy pick = JoinStrategy::kInteractive;
  if (cls != JoinClass::A && cls != JoinClass::G) {
    const auto starts = chain_starts_for(q, cls);
    const JoinSide small = el <= er ? JoinSide::kLeft : JoinSide::kRight;
    const bool skewed = std::min(el, er) * 16 <= std::max(el, er);
    if (skewed && std::find(starts.begin(), starts.end(), small) != starts.end()) pick = JoinStrategy::kChain;
    else if (strategy_allowed(cls, JoinStrategy::kIndependent)) pick = JoinStrategy::kIndependent;
  }
  JoinResult res = join(st, q, pick, stats, options);
  if (stats) {
    stats->estimate_left = el;
    stats->estimate_right = er;
  }
  return res;
}

}  // namespace k2t
