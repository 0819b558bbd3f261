// k2triples: build, query, inspect and benchmark compressed triple stores.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "k2t/error.h"
#include "k2t/joins.h"
#include "k2t/pipeline.h"
#include "k2t/query_text.h"
#include "k2t/workload.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kQuery = 3 };

int log_level() {
  static const int level = [] {
    const char* v = std::getenv("K2T_LOG");
    return v ? std::atoi(v) : 0;
  }();
  return level;
}

template <typename... Args>
void log(int level, const Args&... args) {
  if (log_level() < level) return;
  std::cerr << (level >= 2 ? "[debug] " : "[info] ");
  (std::cerr << ... << args);
  std::cerr << '\n';
}

// Raised for failures that map onto a specific exit code.
struct Failure {
  int code;
  std::string message;
};

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

k2t::TripleStore open_store(const std::string& path) {
  try {
    log(1, "loading ", path);
    return k2t::TripleStore::load_file(path);
  } catch (const std::exception& e) {
    throw Failure{kIo, e.what()};
  }
}

std::string tsv_escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '\t') out += "\\t";
    else if (c == '\n') out += "\\n";
    else if (c == '\r') out += "\\r";
    else out += c;
  }
  return out;
}

k2t::JoinStrategy parse_strategy(const std::string& s) {
  if (s == "chain") return k2t::JoinStrategy::kChain;
  if (s == "independent") return k2t::JoinStrategy::kIndependent;
  if (s == "interactive") return k2t::JoinStrategy::kInteractive;
  return k2t::JoinStrategy::kAuto;
}

// ---- build ----

struct BuildArgs {
  std::string input, output;
  bool strict = false;
  k2t::K2Config config;
};

int cmd_build(const BuildArgs& a) {
  k2t::BuildReport rep;
  k2t::TripleStore st;
  try {
    a.config.validate();
  } catch (const k2t::Error& e) {
    throw Failure{kUsage, e.what()};
  }
  try {
    const auto t0 = Clock::now();
    st = k2t::build_store_from_file(a.input, {a.strict}, &rep, a.config);
    log(1, "built in ", micros_since(t0) / 1000.0, " ms");
    st.save_file(a.output);
  } catch (const std::exception& e) {
    throw Failure{kIo, e.what()};
  }
  for (const auto& d : rep.diagnostics) std::cerr << a.input << ":" << d.line << ": skipped: " << d.message << '\n';
  const auto& d = st.dictionary();
  const auto sz = st.sizes();
  std::cout << "statements  " << rep.statements << '\n'
            << "triples     " << st.triple_count() << '\n'
            << "SO          " << d.so_count() << '\n'
            << "S           " << d.s_count() << '\n'
            << "O           " << d.o_count() << '\n'
            << "P           " << d.p_count() << '\n'
            << "bytes.trees " << sz.trees << '\n'
            << "bytes.sp    " << sz.sp << '\n'
            << "bytes.op    " << sz.op << '\n'
            << "bytes.dict  " << sz.dictionary << '\n'
            << "bytes.total " << sz.total << '\n';
  return kOk;
}

// ---- query ----

struct QueryArgs {
  std::string store, query, strategy = "auto";
  long long limit = -1;
  bool ids = false, stats = false, no_index = false;
};

int cmd_query(const QueryArgs& a) {
  const k2t::TripleStore st = open_store(a.store);
  const auto& dict = st.dictionary();
  k2t::BoundQuery bq;
  try {
    bq = k2t::bind_query(k2t::parse_query(a.query), dict);
  } catch (const k2t::Error& e) {
    throw Failure{kQuery, e.what()};
  }

  std::vector<std::vector<std::string>> out;  // lazily decoded rows
  std::uint64_t total = 0, nodes = 0;
  std::string used = "-";
  const auto limit = a.limit < 0 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(a.limit);
  auto cell = [&](k2t::Id id, k2t::Role r) {
    return a.ids ? std::to_string(id) : tsv_escape(k2t::term_to_ntriples(dict.decode(id, r)));
  };

  const auto t0 = Clock::now();
  try {
    if (bq.unknown_term) {
      log(1, "a constant is not in the store; empty answer");
      if (bq.is_join) k2t::classify_join(bq.join);  // still reject malformed joins
    } else if (!bq.is_join) {
      k2t::QueryStats qs;
      const auto rs = st.resolve(bq.pattern, &qs, {!a.no_index});
      nodes = qs.nodes_visited;
      total = rs.size();
      for (std::size_t i = 0; i < rs.size() && i < limit; ++i) {
        std::vector<std::string> row;
        if (!bq.pattern.s) row.push_back(cell(rs[i].s, k2t::Role::kSubject));
        if (!bq.pattern.p) row.push_back(cell(rs[i].p, k2t::Role::kPredicate));
        if (!bq.pattern.o) row.push_back(cell(rs[i].o, k2t::Role::kObject));
        out.push_back(std::move(row));
      }
    } else {
      k2t::JoinStats js;
      k2t::JoinOptions opt;
      opt.use_predicate_index = !a.no_index;
      log(1, "join class ", k2t::join_class_name(k2t::classify_join(bq.join)), ", variant ",
          k2t::join_variant(bq.join));
      const auto res = k2t::join(st, bq.join, parse_strategy(a.strategy), &js, opt);
      used = k2t::strategy_name(js.strategy);
      nodes = js.nodes_visited;
      total = res.rows.size();
      for (std::size_t i = 0; i < res.rows.size() && i < limit; ++i) {
        std::vector<std::string> row;
        for (std::size_t c = 0; c < res.width(); ++c) row.push_back(cell(res.rows[i][c], res.columns[c].role));
        out.push_back(std::move(row));
      }
    }
  } catch (const k2t::Error& e) {
    throw Failure{kQuery, e.what()};
  }
  const double elapsed = micros_since(t0);

  for (std::size_t c = 0; c < bq.columns.size(); ++c) std::cout << (c ? "\t?" : "?") << bq.columns[c];
  std::cout << '\n';
  for (const auto& row : out) {
    for (std::size_t c = 0; c < row.size(); ++c) std::cout << (c ? "\t" : "") << row[c];
    std::cout << '\n';
  }
  std::cerr << total << " results\n";
  if (a.stats)
    std::cerr << "elapsed_us " << elapsed << "\nstrategy " << used << "\nnodes_visited " << nodes << '\n';
  return kOk;
}

// ---- info ----

int cmd_info(const std::string& path, bool per_predicate) {
  const k2t::TripleStore st = open_store(path);
  const auto& d = st.dictionary();
  const auto& c = st.config();
  const auto sz = st.sizes();
  std::cout << "triples     " << st.triple_count() << '\n'
            << "SO          " << d.so_count() << '\n'
            << "S           " << d.s_count() << '\n'
            << "O           " << d.o_count() << '\n'
            << "P           " << d.p_count() << '\n'
            << "matrix      " << st.rows() << " x " << st.cols() << " (padded " << st.n_prime() << ")\n"
            << "schedule    k=" << c.k_upper << " x" << c.upper_levels << ", then k=" << c.k_lower
            << ", leaves " << c.leaf_size << "x" << c.leaf_size << '\n'
            << "sp.lists    " << st.sp().vocabulary().list_count() << '\n'
            << "op.lists    " << st.op().vocabulary().list_count() << '\n'
            << "bytes.trees " << sz.trees << '\n'
            << "bytes.sp    " << sz.sp << '\n'
            << "bytes.op    " << sz.op << '\n'
            << "bytes.dict  " << sz.dictionary << '\n'
            << "bytes.total " << sz.total << '\n';
  if (per_predicate)
    for (k2t::Id p = 0; p < st.predicate_count(); ++p)
      std::cout << p << '\t' << st.count(p) << '\t' << k2t::term_to_ntriples(d.decode(p, k2t::Role::kPredicate))
                << '\n';
  return kOk;
}

// ---- bench ----

struct BenchArgs {
  std::string store, workload = "patterns", strategy = "all";
  std::size_t n = 50;
  std::uint64_t seed = 1;
  std::uint64_t split = 10000;
  bool include_all_var = false;
  bool list = false;  // print the generated queries instead of timing them
};

std::string describe(const k2t::TriplePattern& q) {
  auto f = [](const std::optional<k2t::Id>& v) { return v ? std::to_string(*v) : std::string("?"); };
  return f(q.s) + " " + f(q.p) + " " + f(q.o);
}

struct Summary {
  double min = 0, mean = 0, median = 0, max = 0;
};

Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.median = v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
  return s;
}

void csv_row(const std::string& kind, const std::string& variant, const std::vector<double>& times) {
  const Summary s = summarize(times);
  std::cout << kind << ',' << variant << ',' << times.size() << ',' << s.min << ',' << s.mean << ',' << s.median
            << ',' << s.max << '\n';
}

int cmd_bench(const BenchArgs& a) {
  const k2t::TripleStore st = open_store(a.store);
  const std::vector<k2t::Triple> triples = st.resolve({});
  std::cout << "kind,variant,n,min_us,mean_us,median_us,max_us\n";
  if (a.n == 0) return kOk;
  if (triples.empty()) {
    std::cerr << "note: empty store, nothing to benchmark\n";
    return kOk;
  }
  std::mt19937_64 rng(a.seed);
  const bool patterns = a.workload == "patterns" || a.workload == "all";
  const bool joins = a.workload == "joins" || a.workload == "all";

  if (patterns) {
    for (unsigned shape = 7;; --shape) {
      if (shape != 0 || a.include_all_var) {
        std::vector<double> times;
        for (const auto& q : k2t::sample_patterns(triples, shape, a.n, rng)) {
          if (a.list) {
            std::cout << "# pattern " << describe(q) << '\n';
            continue;
          }
          const auto t0 = Clock::now();
          const auto rs = st.resolve(q);
          times.push_back(micros_since(t0));
          log(2, k2t::pattern_shape_name(shape), " -> ", rs.size());
        }
        if (!a.list) csv_row("pattern", k2t::pattern_shape_name(shape), times);
      }
      if (shape == 0) break;
    }
  }

  if (joins) {
    const std::pair<k2t::Role, k2t::Role> variants[] = {{k2t::Role::kSubject, k2t::Role::kSubject},
                                                        {k2t::Role::kObject, k2t::Role::kSubject},
                                                        {k2t::Role::kObject, k2t::Role::kObject}};
    const k2t::JoinClass classes[] = {k2t::JoinClass::A,  k2t::JoinClass::B, k2t::JoinClass::C,
                                      k2t::JoinClass::D,  k2t::JoinClass::E1, k2t::JoinClass::E2,
                                      k2t::JoinClass::F,  k2t::JoinClass::G, k2t::JoinClass::H};
    std::vector<k2t::JoinStrategy> strategies{k2t::JoinStrategy::kChain, k2t::JoinStrategy::kIndependent,
                                              k2t::JoinStrategy::kInteractive, k2t::JoinStrategy::kAuto};
    if (a.strategy != "all") strategies = {parse_strategy(a.strategy)};
    for (auto [lr, rr] : variants) {
      const std::string vname = lr == rr ? (lr == k2t::Role::kSubject ? "SS" : "OO") : "SO";
      if (lr != rr && st.dictionary().so_count() == 0) {
        std::cerr << "note: no subject-object terms, skipping SO joins\n";
        continue;
      }
      for (k2t::JoinClass c : classes) {
        const auto qs = k2t::sample_joins(st, triples, c, lr, rr, a.n, rng);
        if (a.list) {
          for (const auto& jq : qs)
            std::cout << "# join " << describe(jq.left) << " . " << describe(jq.right) << " on " << vname << '\n';
          continue;
        }
        // Split by the product of the two patterns' standalone result sizes.
        std::vector<bool> big;
        for (const auto& q : qs)
          big.push_back(st.resolve(q.left).size() * st.resolve(q.right).size() > a.split);
        for (k2t::JoinStrategy s : strategies) {
          if (!k2t::strategy_allowed(c, s)) continue;
          std::vector<double> small_t, big_t;
          for (std::size_t i = 0; i < qs.size(); ++i) {
            const auto t0 = Clock::now();
            const auto res = k2t::join(st, qs[i], s);
            (big[i] ? big_t : small_t).push_back(micros_since(t0));
          }
          const std::string kind = std::string("join-") + k2t::join_class_name(c);
          const std::string base = vname + "/" + k2t::strategy_name(s);
          if (!small_t.empty()) csv_row(kind, base + "/small", small_t);
          if (!big_t.empty()) csv_row(kind, base + "/big", big_t);
        }
      }
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k2triples: compressed RDF triple store"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a store from an N-Triples file (optionally gzipped)");
  b->add_option("input", build.input, "N-Triples input")->required();
  b->add_option("output", build.output, "Store file to write")->required();
  b->add_flag("--strict", build.strict, "Abort on the first malformed line");
  b->add_option("--k-upper", build.config.k_upper, "k for the upper levels")->capture_default_str();
  b->add_option("--upper-levels", build.config.upper_levels, "Number of upper levels")->capture_default_str();
  b->add_option("--k-lower", build.config.k_lower, "k for the remaining levels")->capture_default_str();
  b->add_option("--leaf", build.config.leaf_size, "Leaf block side")->capture_default_str();

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Run a triple pattern or a pairwise join");
  q->add_option("store", query.store, "Store file")->required();
  q->add_option("query", query.query, "Query text, e.g. '?x <p> <o> . ?x <q> ?y'")->required();
  q->add_option("--strategy", query.strategy, "Join strategy")
      ->check(CLI::IsMember({"auto", "chain", "independent", "interactive"}))
      ->capture_default_str();
  q->add_option("--limit", query.limit, "Print at most this many rows");
  q->add_flag("--ids", query.ids, "Print raw IDs instead of terms");
  q->add_flag("--stats", query.stats, "Print timing and traversal counters to stderr");
  q->add_flag("--no-index", query.no_index, "Do not prune predicates with the SP/OP indexes");

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "Time random queries drawn from the store");
  be->add_option("store", bench.store, "Store file")->required();
  be->add_option("--workload", bench.workload, "What to time")
      ->check(CLI::IsMember({"patterns", "joins", "all"}))
      ->capture_default_str();
  be->add_option("-n", bench.n, "Queries per pattern shape or join class")->capture_default_str();
  be->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  be->add_option("--strategy", bench.strategy, "Join strategy to time")
      ->check(CLI::IsMember({"all", "auto", "chain", "independent", "interactive"}))
      ->capture_default_str();
  be->add_option("--split", bench.split, "Intermediate-result product separating small from big joins")
      ->capture_default_str();
  be->add_flag("--include-all-var", bench.include_all_var, "Also time the (?S,?P,?O) pattern");
  be->add_flag("--list", bench.list, "Print the generated queries instead of timing them");

  std::string info_path;
  bool info_preds = false;
  auto* in = app.add_subcommand("info", "Print store statistics");
  in->add_option("store", info_path, "Store file")->required();
  in->add_flag("--predicates", info_preds, "List triple counts per predicate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*b) return cmd_build(build);
    if (*q) return cmd_query(query);
    if (*be) return cmd_bench(bench);
    if (*in) return cmd_info(info_path, info_preds);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  }
  return kUsage;
}
