#pragma once

// Exhaustive and randomized correctness checks for the protocols, with
// deterministic text reports.
//
// Exhaustive soundness is organized per certificate: Alice's accepting rows
// and Bob's accepting columns are computed once, and the cross product is
// compared against the precomputed f-rows with word-level bit operations.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sptree/bitrow.hpp"
#include "sptree/parallel.hpp"
#include "sptree/protocol.hpp"
#include "sptree/slack_matrix.hpp"
#include "sptree/tree.hpp"

namespace sptree {

enum class Mode { exhaustive, randomized };

inline std::string to_string(Mode m) { return m == Mode::exhaustive ? "exhaustive" : "randomized"; }
inline std::string to_string(TieBreak t) { return t == TieBreak::lex_min ? "min" : "max"; }

struct CheckOptions {
  Mode mode = Mode::exhaustive;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool allow_large = false;  // permits exhaustive n = 7
  TieBreak tie_break = TieBreak::lex_min;
  // (stage, done, total); called from worker threads under a lock
  std::function<void(std::string_view, std::size_t, std::size_t)> progress;
};

struct Violation {
  std::string kind;
  std::string object;  // certificate, triple or facet
  std::string set;
  std::string tree;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

struct VerificationReport {
  std::string check;
  int n = 0;
  Mode mode = Mode::exhaustive;
  std::uint64_t checks_run = 0;
  std::map<std::string, std::uint64_t> counters{};
  std::vector<Violation> violations{};
  std::chrono::milliseconds elapsed{0};
  std::optional<std::uint64_t> seed{};
  std::string reproduce{};

  bool passed() const { return violations.empty(); }
};

/// key: value header, then one "violation:" line per violation. Elapsed
/// time is left out so equal runs print equal text.
inline std::string to_text(const VerificationReport& r) {
  std::ostringstream out;
  out << "check: " << r.check << '\n'
      << "n: " << r.n << '\n'
      << "mode: " << to_string(r.mode) << '\n';
  if (r.seed) out << "seed: " << *r.seed << '\n';
  out << "checks_run: " << r.checks_run << '\n';
  for (const auto& [k, v] : r.counters) out << k << ": " << v << '\n';
  out << "violations: " << r.violations.size() << '\n'
      << "result: " << (r.passed() ? "pass" : "FAIL") << '\n';
  if (!r.passed()) out << "reproduce: " << r.reproduce << '\n';
  for (const auto& v : r.violations)
    out << "violation: " << v.kind << " object=" << v.object << " S=" << v.set << " T=" << v.tree << '\n';
  return out.str();
}

namespace detail {

inline std::string reproduce_command(int n, const CheckOptions& opt, std::string_view extra = {}) {
  std::string cmd = "sptree verify --n " + std::to_string(n) + " --mode " + to_string(opt.mode);
  if (opt.mode == Mode::randomized)
    cmd += " --samples " + std::to_string(opt.samples) + " --seed " + std::to_string(opt.seed);
  if (opt.tie_break == TieBreak::lex_max) cmd += " --tie-break max";
  if (opt.allow_large) cmd += " --allow-large";
  if (!extra.empty()) cmd += " " + std::string(extra);
  return cmd;
}

/// Per-worker violation buffers and counters, merged in a fixed order.
class Collector {
 public:
  explicit Collector(unsigned threads) : buffers_(resolve_threads(threads)), counts_(resolve_threads(threads)) {}

  std::vector<Violation>& out(unsigned w) { return buffers_[w]; }
  std::map<std::string, std::uint64_t>& counters(unsigned w) { return counts_[w]; }

  void finish(VerificationReport& report) {
    for (auto& b : buffers_) report.violations.insert(report.violations.end(), b.begin(), b.end());
    std::sort(report.violations.begin(), report.violations.end());
    for (auto& c : counts_)
      for (auto& [k, v] : c) report.counters[k] += v;
  }

 private:
  std::vector<std::vector<Violation>> buffers_;
  std::vector<std::map<std::string, std::uint64_t>> counts_;
};

class Progress {
 public:
  Progress(const CheckOptions& opt, std::string_view stage, std::size_t total)
      : opt_(opt), stage_(stage), total_(total) {}
  void advance(std::size_t k = 1) {
    if (!opt_.progress) return;
    const auto done = done_.fetch_add(k) + k;
    const auto step = std::max<std::size_t>(total_ / 20, 1);
    if (done / step != (done - k) / step || done == total_) {
      std::lock_guard lock(mutex_);
      opt_.progress(stage_, done, total_);
    }
  }

 private:
  const CheckOptions& opt_;
  std::string stage_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
  std::mutex mutex_;
};

class Stopwatch {
 public:
  std::chrono::milliseconds elapsed() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Uniform random S with 1 < |S| < n. With probability 1/4 S is a
/// connected subtree of `tree` (so f = 0), otherwise each node is kept
/// with a per-sample density.
template <class Rng>
NodeSet random_node_set(const Tree& tree, Rng& rng) {
  const int n = tree.node_count();
  std::uniform_int_distribution<int> size_pick(2, n - 1);
  std::uniform_int_distribution<int> node_pick(1, n);
  std::vector<int> members;
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    const int target = size_pick(rng);
    std::vector<char> in(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> frontier;
    int start = node_pick(rng);
    members.push_back(start);
    in[start] = 1;
    for (int y : tree.neighbors(start)) frontier.push_back(y);
    while (static_cast<int>(members.size()) < target && !frontier.empty()) {
      std::uniform_int_distribution<std::size_t> at(0, frontier.size() - 1);
      auto k = at(rng);
      int x = frontier[k];
      frontier[k] = frontier.back();
      frontier.pop_back();
      if (in[x]) continue;
      in[x] = 1;
      members.push_back(x);
      for (int y : tree.neighbors(x))
        if (!in[y]) frontier.push_back(y);
    }
  } else {
    const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::bernoulli_distribution keep(density);
    for (int x = 1; x <= n; ++x)
      if (keep(rng)) members.push_back(x);
    while (members.size() < 2) {
      int x = node_pick(rng);
      if (std::find(members.begin(), members.end(), x) == members.end()) members.push_back(x);
    }
    while (static_cast<int>(members.size()) >= n) {
      std::uniform_int_distribution<std::size_t> at(0, members.size() - 1);
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(at(rng)));
    }
  }
  return NodeSet(n, members);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exhaustive universe

/// Every S, every tree (with path index) and the f-row of every S.
struct Universe {
  int n = 0;
  std::vector<NodeSet> sets;
  std::vector<Tree> trees;
  std::vector<PathIndex> paths;
  std::vector<BitRow> f_rows;  // f_rows[s].test(t) == f(sets[s], trees[t])

  static Universe build(int n, const CheckOptions& opt) {
    check_exhaustive_cap(n, opt.allow_large, "exhaustive universe");
    Universe u;
    u.n = n;
    u.sets = enumerate_cut_sets(n);
    u.trees = all_trees(n);
    u.paths.reserve(u.trees.size());
    for (const auto& t : u.trees) u.paths.emplace_back(t);
    u.f_rows.assign(u.sets.size(), BitRow(u.trees.size()));
    for (std::size_t s = 0; s < u.sets.size(); ++s)
      for (std::size_t t = 0; t < u.trees.size(); ++t)
        if (f_oracle(u.sets[s], u.trees[t])) u.f_rows[s].set(t);
    return u;
  }

  BitRow alice_rows(const Certificate& c) const {
    BitRow rows(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s)
      if (alice_accept(sets[s], c)) rows.set(s);
    return rows;
  }

  BitRow bob_cols(const Certificate& c) const {
    BitRow cols(trees.size());
    for (std::size_t t = 0; t < trees.size(); ++t)
      if (bob_accept(paths[t], c)) cols.set(t);
    return cols;
  }
};

// ---------------------------------------------------------------------------
// Rectangles

/// Inputs on which both parties accept a fixed certificate.
struct Rectangle {
  Certificate certificate;
  std::vector<NodeSet> rows;
  std::vector<std::size_t> cols;  // tree indices in Pruefer order
};

inline Rectangle extract_rectangle(const Certificate& c, const Universe& u) {
  Rectangle rect{c, {}, {}};
  u.alice_rows(c).for_each_set([&](std::size_t s) { rect.rows.push_back(u.sets[s]); });
  u.bob_cols(c).for_each_set([&](std::size_t t) { rect.cols.push_back(t); });
  return rect;
}

/// Exhaustible n only (<= 7).
inline Rectangle extract_rectangle(const Certificate& c, int n) {
  CheckOptions opt;
  opt.allow_large = true;
  return extract_rectangle(c, Universe::build(n, opt));
}

/// Index form against the cycle rows of `m`.
inline MatrixRectangle to_matrix_rectangle(const Rectangle& rect, const SupportMatrix& m) {
  MatrixRectangle out;
  for (const auto& s : rect.rows) {
    auto r = m.row_of(CycleFacet{s});
    if (!r) throw std::invalid_argument("to_matrix_rectangle: row " + to_string(s) + " not in matrix");
    out.rows.push_back(*r);
  }
  out.cols.assign(rect.cols.begin(), rect.cols.end());
  return out;
}

/// One rectangle per certificate of C(n).
inline std::vector<Rectangle> protocol_rectangles(const Universe& u) {
  std::vector<Rectangle> out;
  for (const auto& c : all_certificates(u.n)) out.push_back(extract_rectangle(c, u));
  return out;
}

// ---------------------------------------------------------------------------
// Soundness

inline VerificationReport check_soundness(int n, const CheckOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport report{"soundness", n, opt.mode};
  report.reproduce = detail::reproduce_command(n, opt);
  detail::Collector collect(opt.threads);

  if (opt.mode == Mode::exhaustive) {
    const auto u = Universe::build(n, opt);
    const auto certs = all_certificates(n);
    detail::Progress progress(opt, "soundness", certs.size());
    parallel_slices(certs.size(), opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& c = certs[i];
        const auto rows = u.alice_rows(c);
        const auto cols = u.bob_cols(c);
        if (rows.any() && cols.any()) ++collect.counters(w)["nonempty_rectangles"];
        rows.for_each_set([&](std::size_t s) {
          const auto bad = cols.first_outside(u.f_rows[s]);
          if (bad < cols.size())
            collect.out(w).push_back({"accepted-f0", to_string(c), to_string(u.sets[s]), to_string(u.trees[bad])});
        });
        progress.advance();
      }
    });
    report.checks_run = certs.size() * u.sets.size() * u.trees.size();
  } else {
    if (n < 3) throw std::invalid_argument("check_soundness: n must be at least 3");
    if (opt.samples == 0) throw std::invalid_argument("check_soundness: samples must be positive");
    parallel_slices(opt.samples, opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i) {
        std::mt19937_64 rng(sample_seed(opt.seed, i));
        const Tree t = random_tree(n, rng);
        std::uniform_int_distribution<int> node(1, n);
        int u = node(rng), v = node(rng);
        while (v == u) v = node(rng);
        if (u > v) std::swap(u, v);
        // an r that Bob will find on the path when the path has an interior
        const auto path = t.path_nodes(u, v);
        int r;
        if (path.size() > 2) {
          r = path[std::uniform_int_distribution<std::size_t>(1, path.size() - 2)(rng)];
        } else {
          do { r = node(rng); } while (r == u || r == v);
        }
        const auto c = encode_certificate(u, r, v);
        const auto cand = candidate_rs(c, n);
        std::vector<int> members{u, v};
        const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::bernoulli_distribution keep(density);
        for (int x = 1; x <= n; ++x)
          if (x != u && x != v && !std::binary_search(cand.begin(), cand.end(), x) && keep(rng)) members.push_back(x);
        const NodeSet s(n, members);
        const bool alice = alice_accept(s, c);
        const bool bob = bob_accept(t, c);
        if (!alice) collect.out(w).push_back({"alice-rejected-constructed-row", to_string(c), to_string(s), to_string(t)});
        if (alice && bob) {
          ++collect.counters(w)["joint_accepts"];
          if (!f_oracle(s, t)) collect.out(w).push_back({"accepted-f0", to_string(c), to_string(s), to_string(t)});
        }
      }
    });
    report.checks_run = opt.samples;
    report.seed = opt.seed;
  }
  collect.finish(report);
  report.elapsed = clock.elapsed();
  return report;
}

// ---------------------------------------------------------------------------
// Completeness

namespace detail {
template <PathQuery Paths>
void completeness_case(const NodeSet& s, const Tree& t, const Paths& paths, bool f, TieBreak tie,
                       std::vector<Violation>& out, std::map<std::string, std::uint64_t>& counters) {
  const auto c = prover_certificate(s, t, tie);
  if (f) {
    ++counters["f1_instances"];
    if (!c)
      out.push_back({"no-certificate-for-f1", "-", to_string(s), to_string(t)});
    else if (!alice_accept(s, *c))
      out.push_back({"alice-rejected-honest", to_string(*c), to_string(s), to_string(t)});
    else if (!bob_accept(paths, *c))
      out.push_back({"bob-rejected-honest", to_string(*c), to_string(s), to_string(t)});
  } else if (c) {
    out.push_back({"certificate-for-f0", to_string(*c), to_string(s), to_string(t)});
  }
}
}  // namespace detail

inline VerificationReport check_completeness(int n, const CheckOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport report{"completeness", n, opt.mode};
  report.reproduce = detail::reproduce_command(n, opt);
  report.counters["tie_break_" + to_string(opt.tie_break)] = 1;
  detail::Collector collect(opt.threads);

  if (opt.mode == Mode::exhaustive) {
    const auto u = Universe::build(n, opt);
    detail::Progress progress(opt, "completeness", u.trees.size());
    parallel_slices(u.trees.size(), opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t t = begin; t < end; ++t) {
        for (std::size_t s = 0; s < u.sets.size(); ++s)
          detail::completeness_case(u.sets[s], u.trees[t], u.paths[t], u.f_rows[s].test(t), opt.tie_break,
                                    collect.out(w), collect.counters(w));
        progress.advance();
      }
    });
    report.checks_run = u.sets.size() * u.trees.size();
  } else {
    if (n < 3) throw std::invalid_argument("check_completeness: n must be at least 3");
    if (opt.samples == 0) throw std::invalid_argument("check_completeness: samples must be positive");
    parallel_slices(opt.samples, opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      for (std::size_t i = begin; i < end; ++i) {
        std::mt19937_64 rng(sample_seed(opt.seed, i));
        const Tree t = random_tree(n, rng);
        const NodeSet s = detail::random_node_set(t, rng);
        detail::completeness_case(s, t, t, f_oracle(s, t) == 1, opt.tie_break, collect.out(w), collect.counters(w));
      }
    });
    report.checks_run = opt.samples;
    report.seed = opt.seed;
  }
  collect.finish(report);
  report.elapsed = clock.elapsed();
  return report;
}

// ---------------------------------------------------------------------------
// Triangle property of witnesses

namespace detail {
/// Given witness (u,t,v) and w in S: (v,t,w) or (w,t,u) must be a witness.
template <PathQuery Paths>
void triangle_case(const NodeSet& s, const Paths& paths, int u, int t, int v, int w, const Tree& tree,
                   std::vector<Violation>& out, std::map<std::string, std::uint64_t>& counters) {
  const bool degenerate = w == u || w == v;
  ++counters[degenerate ? "degenerate_cases" : "distinct_cases"];
  if (is_witness(s, paths, Triple{v, t, w}) || is_witness(s, paths, Triple{w, t, u})) return;
  out.push_back({degenerate ? "triangle-degenerate" : "triangle",
                 to_string(Triple{u, t, v}) + "+w=" + std::to_string(w), to_string(s), to_string(tree)});
}
}  // namespace detail

inline VerificationReport check_triangle_lemma(int n, const CheckOptions& opt = {}) {
  detail::Stopwatch clock;
  VerificationReport report{"triangle", n, opt.mode};
  report.reproduce = detail::reproduce_command(n, opt, "--triangle");
  detail::Collector collect(opt.threads);

  if (opt.mode == Mode::exhaustive) {
    const auto u = Universe::build(n, opt);
    detail::Progress progress(opt, "triangle", u.trees.size());
    std::atomic<std::uint64_t> checks{0};
    parallel_slices(u.trees.size(), opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      std::uint64_t local = 0;
      for (std::size_t ti = begin; ti < end; ++ti) {
        const auto& paths = u.paths[ti];
        for (const auto& s : u.sets) {
          const auto members = s.members();
          for (int a : members)
            for (int b : members)
              for (int t = 1; t <= n; ++t) {
                if (s.contains(t) || !is_witness(s, paths, Triple{a, t, b})) continue;
                for (int c : members) {
                  detail::triangle_case(s, paths, a, t, b, c, u.trees[ti], collect.out(w), collect.counters(w));
                  ++local;
                }
              }
        }
        progress.advance();
      }
      checks += local;
    });
    report.checks_run = checks.load();
  } else {
    if (n < 4) throw std::invalid_argument("check_triangle_lemma: randomized mode needs n >= 4");
    if (opt.samples == 0) throw std::invalid_argument("check_triangle_lemma: samples must be positive");
    parallel_slices(opt.samples, opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
      std::vector<int> branch(static_cast<std::size_t>(n) + 1), queue;
      for (std::size_t i = begin; i < end; ++i) {
        std::mt19937_64 rng(sample_seed(opt.seed, i));
        const Tree tree = random_tree(n, rng);
        std::uniform_int_distribution<int> node(1, n);
        int t;
        do { t = node(rng); } while (tree.neighbors(t).size() < 2);
        // branches of tree - t; u and v from different branches
        std::fill(branch.begin(), branch.end(), -1);
        int label = 0;
        for (int root : tree.neighbors(t)) {
          queue.assign(1, root);
          branch[root] = label;
          for (std::size_t h = 0; h < queue.size(); ++h)
            for (int y : tree.neighbors(queue[h]))
              if (y != t && branch[y] < 0) {
                branch[y] = label;
                queue.push_back(y);
              }
          ++label;
        }
        int u, v;
        do { u = node(rng); } while (u == t);
        do { v = node(rng); } while (v == t || branch[v] == branch[u]);
        std::vector<int> members{u, v};
        const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::bernoulli_distribution keep(density);
        for (int x = 1; x <= n; ++x)
          if (x != t && x != u && x != v && keep(rng)) members.push_back(x);
        const NodeSet s(n, members);
        if (!is_witness(s, tree, Triple{u, t, v})) {
          collect.out(w).push_back({"sampler-not-witness", to_string(Triple{u, t, v}), to_string(s), to_string(tree)});
          continue;
        }
        const int wnode = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
        detail::triangle_case(s, tree, u, t, v, wnode, tree, collect.out(w), collect.counters(w));
      }
    });
    report.checks_run = opt.samples;
    report.seed = opt.seed;
  }
  collect.finish(report);
  report.elapsed = clock.elapsed();
  return report;
}

// ---------------------------------------------------------------------------
// Rectangle cover restatement

/// Every certificate rectangle is 1-monochromatic and their union is
/// exactly the set of one-entries of f.
inline VerificationReport check_rectangle_cover(int n, const CheckOptions& opt = {}) {
  detail::Stopwatch clock;
  CheckOptions exhaustive = opt;
  exhaustive.mode = Mode::exhaustive;
  VerificationReport report{"rectangle-cover", n, Mode::exhaustive};
  report.reproduce = detail::reproduce_command(n, exhaustive, "--check rectangle-cover");
  const auto u = Universe::build(n, exhaustive);
  const auto certs = all_certificates(n);

  std::vector<BitRow> covered(u.sets.size(), BitRow(u.trees.size()));
  std::mutex merge;
  detail::Collector collect(opt.threads);
  parallel_slices(certs.size(), opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::vector<BitRow> local(u.sets.size(), BitRow(u.trees.size()));
    for (std::size_t i = begin; i < end; ++i) {
      const auto rows = u.alice_rows(certs[i]);
      const auto cols = u.bob_cols(certs[i]);
      rows.for_each_set([&](std::size_t s) {
        local[s] |= cols;
        if (cols.any_outside(u.f_rows[s]))
          collect.out(w).push_back({"rectangle-not-monochromatic", to_string(certs[i]), to_string(u.sets[s]),
                                    to_string(u.trees[cols.first_outside(u.f_rows[s])])});
      });
    }
    std::lock_guard lock(merge);
    for (std::size_t s = 0; s < local.size(); ++s) covered[s] |= local[s];
  });
  std::uint64_t ones = 0;
  for (std::size_t s = 0; s < u.sets.size(); ++s) {
    ones += u.f_rows[s].count();
    const auto miss = u.f_rows[s].first_outside(covered[s]);
    if (miss < u.trees.size())
      collect.out(0).push_back({"one-entry-uncovered", "-", to_string(u.sets[s]), to_string(u.trees[miss])});
  }
  collect.counters(0)["one_entries"] = ones;
  collect.counters(0)["certificates"] = certs.size();
  report.checks_run = certs.size() * u.sets.size() * u.trees.size();
  collect.finish(report);
  report.elapsed = clock.elapsed();
  return report;
}

// ---------------------------------------------------------------------------
// Naive protocol cross-check

/// The triple protocol computes f (some triple of [n]^3 is jointly accepted
/// iff f = 1) and every parsimonious acceptance has a witness behind it.
inline VerificationReport cross_check_naive(int n, const CheckOptions& opt = {}) {
  detail::Stopwatch clock;
  CheckOptions exhaustive = opt;
  exhaustive.mode = Mode::exhaustive;
  VerificationReport report{"naive-cross-check", n, Mode::exhaustive};
  report.reproduce = detail::reproduce_command(n, exhaustive, "--check naive");
  const auto u = Universe::build(n, exhaustive);
  detail::Collector collect(opt.threads);

  // witness rows computed through the triple protocol, not through f
  std::vector<BitRow> naive_rows(u.sets.size(), BitRow(u.trees.size()));
  std::mutex merge;
  parallel_slices(u.trees.size(), opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    for (std::size_t t = begin; t < end; ++t)
      for (std::size_t s = 0; s < u.sets.size(); ++s) {
        bool accepted = false;
        for (int a = 1; a <= n && !accepted; ++a)
          for (int x = 1; x <= n && !accepted; ++x)
            for (int b = 1; b <= n && !accepted; ++b) {
              const Triple tr{a, x, b};
              accepted = naive_alice_accept(u.sets[s], tr) && naive_bob_accept(u.paths[t], tr);
            }
        if (accepted) hits.emplace_back(s, t);
        if (accepted != u.f_rows[s].test(t))
          collect.out(w).push_back({accepted ? "naive-accepts-f0" : "naive-misses-f1", "-", to_string(u.sets[s]),
                                    to_string(u.trees[t])});
      }
    std::lock_guard lock(merge);
    for (auto [s, t] : hits) naive_rows[s].set(t);
  });

  const auto certs = all_certificates(n);
  parallel_slices(certs.size(), opt.threads, [&](std::size_t begin, std::size_t end, unsigned w) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto rows = u.alice_rows(certs[i]);
      const auto cols = u.bob_cols(certs[i]);
      rows.for_each_set([&](std::size_t s) {
        const auto bad = cols.first_outside(naive_rows[s]);
        if (bad < cols.size())
          collect.out(w).push_back({"parsimonious-without-witness", to_string(certs[i]), to_string(u.sets[s]),
                                    to_string(u.trees[bad])});
      });
    }
  });
  report.checks_run = u.sets.size() * u.trees.size() * static_cast<std::uint64_t>(n) * n * n;
  collect.finish(report);
  report.elapsed = clock.elapsed();
  return report;
}

// ---------------------------------------------------------------------------
// Combined protocol with nonnegativity rows

/// Joint acceptance over (cycle + nonnegativity rows) x trees equals the
/// support of the full slack matrix, and the honest combined prover is
/// accepted on every one-entry.
inline VerificationReport check_combined(int n, const CheckOptions& opt = {}) {
  detail::Stopwatch clock;
  CheckOptions exhaustive = opt;
  exhaustive.mode = Mode::exhaustive;
  VerificationReport report{"combined", n, Mode::exhaustive};
  report.reproduce = detail::reproduce_command(n, exhaustive, "--include-nonneg");
  const auto m = build_support_matrix(n, true, opt.allow_large, opt.threads);
  const auto trees = all_trees(n);
  const auto certs = all_combined_certificates(n);
  detail::Collector collect(opt.threads);

  std::vector<BitRow> accepted(m.row_index.size(), BitRow(m.col_count));
  for (const auto& cc : certs) {
    BitRow cols(m.col_count);
    for (std::size_t t = 0; t < trees.size(); ++t)
      if (combined_bob_accept(trees[t], cc)) cols.set(t);
    if (cols.none()) continue;
    for (std::size_t r = 0; r < m.row_index.size(); ++r)
      if (combined_alice_accept(m.row_index[r], cc)) accepted[r] |= cols;
  }
  for (std::size_t r = 0; r < m.row_index.size(); ++r) {
    if (accepted[r] == m.entries.row(r)) continue;
    const auto extra = accepted[r].first_outside(m.entries.row(r));
    const auto miss = m.entries.row(r).first_outside(accepted[r]);
    if (extra < trees.size())
      collect.out(0).push_back({"combined-accepts-zero", to_string(m.row_index[r]), "-", to_string(trees[extra])});
    if (miss < trees.size())
      collect.out(0).push_back({"combined-misses-one", to_string(m.row_index[r]), "-", to_string(trees[miss])});
  }
  for (std::size_t r = 0; r < m.row_index.size(); ++r)
    for (std::size_t t = 0; t < trees.size(); ++t) {
      const auto cc = combined_prover(m.row_index[r], trees[t], opt.tie_break);
      if (m.entries.at(r, t) != cc.has_value())
        collect.out(0).push_back({"combined-prover-mismatch", to_string(m.row_index[r]), "-", to_string(trees[t])});
      else if (cc && !(combined_alice_accept(m.row_index[r], *cc) && combined_bob_accept(trees[t], *cc)))
        collect.out(0).push_back({"combined-honest-rejected", to_string(*cc), to_string(m.row_index[r]), to_string(trees[t])});
    }
  collect.counters(0)["rows"] = m.row_index.size();
  collect.counters(0)["combined_certificates"] = certs.size();
  report.checks_run = certs.size() * m.row_index.size() * m.col_count;
  collect.finish(report);
  report.elapsed = clock.elapsed();
  return report;
}

}  // namespace sptree
