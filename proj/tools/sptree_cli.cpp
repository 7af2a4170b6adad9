// sptree: verification sweeps, cost tables, protocol traces, support-matrix
// export and rectangle covers.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or cap error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sptree/sptree.hpp"

namespace {

using namespace sptree;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 0;
  std::string mode = "exhaustive";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool include_nonneg = false;
  bool triangle = false;
  unsigned threads = 0;
  int max_n = 64;
  std::vector<std::string> fixed;
  std::vector<std::string> checks;
  std::string tie_break = "min";
  bool allow_large = false;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, bool binary) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
    if (!*file_) throw UsageError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void require_protocol_n(int n) {
  if (n < 3) throw UsageError("--n must be at least 3 (there are no sets 1 < |S| < n for n <= 2)");
}

CheckOptions check_options(const RunConfig& cfg) {
  CheckOptions opt;
  opt.mode = cfg.mode == "randomized" ? Mode::randomized : Mode::exhaustive;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  opt.allow_large = cfg.allow_large;
  opt.tie_break = cfg.tie_break == "max" ? TieBreak::lex_max : TieBreak::lex_min;
  if (opt.mode == Mode::randomized && opt.samples == 0) throw UsageError("--samples must be positive");
  if (opt.mode == Mode::exhaustive && cfg.n == kLargeExhaustiveCap && cfg.allow_large)
    opt.progress = [](std::string_view stage, std::size_t done, std::size_t total) {
      std::cerr << "[" << stage << "] " << done << "/" << total << "\n";
    };
  return opt;
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
  require_protocol_n(cfg.n);
  const auto opt = check_options(cfg);
  if (opt.mode == Mode::exhaustive)
    check_exhaustive_cap(cfg.n, cfg.allow_large, "verify");

  std::vector<VerificationReport> reports;
  reports.push_back(check_soundness(cfg.n, opt));
  reports.push_back(check_completeness(cfg.n, opt));
  if (cfg.triangle) {
    if (opt.mode == Mode::randomized && cfg.n < 4) throw UsageError("--triangle in randomized mode needs --n >= 4");
    reports.push_back(check_triangle_lemma(cfg.n, opt));
  }
  if (cfg.include_nonneg) reports.push_back(check_combined(cfg.n, opt));
  for (const auto& name : cfg.checks) {
    if (name == "naive")
      reports.push_back(cross_check_naive(cfg.n, opt));
    else if (name == "rectangle-cover")
      reports.push_back(check_rectangle_cover(cfg.n, opt));
    else if (name == "combined")
      reports.push_back(check_combined(cfg.n, opt));
  }

  Sink sink(cfg.out, false);
  auto& out = sink.stream();
  std::size_t total = 0;
  for (const auto& r : reports) {
    out << to_text(r) << '\n';
    total += r.violations.size();
    std::cerr << r.check << ": " << r.elapsed.count() << " ms\n";
  }
  out << "total_violations: " << total << '\n' << "summary: " << (total ? "FAIL" : "pass") << '\n';
  return total ? kExitFail : kExitPass;
}

// ---------------------------------------------------------------------------

int cmd_cost_table(const RunConfig& cfg) {
  if (cfg.max_n < 3) throw UsageError("--max-n must be at least 3");
  if (cfg.max_n > 100000000) throw UsageError("--max-n above 10^8");
  Sink sink(cfg.out, false);
  auto& out = sink.stream();
  out << std::fixed << std::setprecision(6);
  out << "n,certificates,log2_certificates,2log2n+log2log2n,residual\n";
  double worst = -1e300;
  int worst_n = 3;
  for (int n = 3; n <= cfg.max_n; ++n) {
    const double residual = cost_residual(n);
    if (residual > worst) {
      worst = residual;
      worst_n = n;
    }
    const bool print = n <= 64 || std::has_single_bit(static_cast<unsigned>(n)) || n == cfg.max_n;
    if (!print) continue;
    const double lg = std::log2(static_cast<double>(n));
    out << n << ',' << certificate_space_size(n) << ',' << cost_bits(n) << ',' << 2 * lg + std::log2(lg) << ','
        << residual << '\n';
  }
  const double bound = 4.0;
  out << "max_residual: " << worst << " at n=" << worst_n << '\n'
      << "residual_bound: " << bound << '\n'
      << "summary: " << (worst <= bound + 1e-9 ? "pass" : "FAIL") << '\n';
  return worst <= bound + 1e-9 ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

std::string join_path(const std::vector<int>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "-" : "") + std::to_string(p[i]);
  return s;
}

bool trace_alice(std::ostream& out, const NodeSet& s, const Certificate& c) {
  out << "Alice 1: input S = " << to_string(s) << '\n';
  out << "Alice 2: certificate c = " << to_string(c) << '\n';
  if (!s.contains(c.u) || !s.contains(c.v)) {
    out << "Alice 3: " << (s.contains(c.u) ? "v=" + std::to_string(c.v) : "u=" + std::to_string(c.u))
        << " not in S: Reject\n";
    return false;
  }
  out << "Alice 3: u=" << c.u << " in S, v=" << c.v << " in S\n";
  const auto cand = candidate_rs(c, s.n());
  if (cand.empty()) out << "Alice 4: no r with h(u,r,v) = c\n";
  for (int r : cand) {
    if (s.contains(r)) {
      out << "Alice 4: r=" << r << " in S: Reject\n";
      return false;
    }
    out << "Alice 4: r=" << r << " not in S\n";
  }
  out << "Alice 5: Accept\n";
  return true;
}

bool trace_bob(std::ostream& out, const Tree& t, const Certificate& c) {
  out << "Bob 1: input T = " << to_string(t) << '\n';
  out << "Bob 2: certificate c = " << to_string(c) << '\n';
  const auto path = t.path_nodes(c.u, c.v);
  const auto cand = candidate_rs(c, t.node_count());
  if (cand.empty()) out << "Bob 3: no r with h(u,r,v) = c\n";
  for (int r : cand) {
    if (t.on_path(c.u, r, c.v)) {
      out << "Bob 3: r=" << r << " on path " << join_path(path) << ": Accept\n";
      return true;
    }
    out << "Bob 3: r=" << r << " not on path " << join_path(path) << '\n';
  }
  out << "Bob 4: Reject\n";
  return false;
}

int cmd_trace(const RunConfig& cfg) {
  require_protocol_n(cfg.n);
  const TieBreak tie = cfg.tie_break == "max" ? TieBreak::lex_max : TieBreak::lex_min;
  std::optional<NodeSet> s;
  std::optional<Tree> t;
  if (!cfg.fixed.empty()) {
    for (const auto& item : cfg.fixed) {
      try {
        if (item.starts_with("S="))
          s = parse_node_set(cfg.n, item.substr(2));
        else if (item.starts_with("T="))
          t = parse_edge_list(cfg.n, item.substr(2));
        else
          throw UsageError("--fixed expects S=... and T=..., got '" + item + "'");
      } catch (const UsageError&) {
        throw;
      } catch (const std::exception& e) {
        throw UsageError("--fixed " + item + ": " + e.what());
      }
    }
    if (!s || !t) throw UsageError("--fixed needs both S=... and T=...");
  } else {
    std::mt19937_64 rng(cfg.seed);
    t = random_tree(cfg.n, rng);
    s = detail::random_node_set(*t, rng);
  }

  Sink sink(cfg.out, false);
  auto& out = sink.stream();
  const int f = f_oracle(*s, *t);
  out << "n: " << cfg.n << '\n' << "S: " << to_string(*s) << '\n' << "T: " << to_string(*t) << '\n' << "f: " << f << '\n';

  std::vector<Witness> witnesses;
  for (int u = 1; u <= cfg.n; ++u)
    for (int v = u + 1; v <= cfg.n; ++v) {
      if (!s->contains(u) || !s->contains(v)) continue;
      for (int x : t->path_nodes(u, v))
        if (!s->contains(x)) witnesses.emplace_back(u, x, v);
    }
  std::sort(witnesses.begin(), witnesses.end());
  out << "witnesses (u<v): " << witnesses.size() << '\n';
  constexpr std::size_t kListed = 40;
  for (std::size_t i = 0; i < witnesses.size() && i < kListed; ++i)
    out << "  " << to_string(witnesses[i]) << " mu=" << mu(witnesses[i]) << '\n';
  if (witnesses.size() > kListed) out << "  ... (" << witnesses.size() - kListed << " more)\n";

  const auto valid = valid_witness(*s, *t, tie);
  Certificate c;
  if (valid) {
    c = encode_certificate(*valid);
    out << "Prover: valid witness " << to_string(*valid) << " mu=" << mu(*valid) << " (tie-break "
        << to_string(tie) << ")\n";
    out << "Prover: sends " << to_string(c) << '\n';
  } else {
    out << "Prover: no witness exists; any certificate is refuted\n";
    // show one certificate: the first Alice would accept, if any
    const auto all = all_certificates(cfg.n);
    c = all.front();
    for (const auto& cand : all)
      if (alice_accept(*s, cand)) {
        c = cand;
        break;
      }
    out << "Prover: (demonstration) sends " << to_string(c) << '\n';
  }
  const auto cand = candidate_rs(c, cfg.n);
  out << "candidate r:";
  for (int r : cand) out << ' ' << r;
  out << '\n';
  const bool alice = trace_alice(out, *s, c);
  const bool bob = trace_bob(out, *t, c);
  out << "Alice: " << (alice ? "Accept" : "Reject") << " / Bob: " << (bob ? "Accept" : "Reject") << '\n';
  const bool consistent = f ? (alice && bob) : !(alice && bob);
  return consistent ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int cmd_export(const RunConfig& cfg) {
  require_protocol_n(cfg.n);
  const auto m = build_support_matrix(cfg.n, cfg.include_nonneg, cfg.allow_large, cfg.threads);
  const bool binary = cfg.format == "bin";
  Sink sink(cfg.out, binary);
  export_matrix(m, binary ? MatrixFormat::binary : MatrixFormat::csv, sink.stream());
  return kExitPass;
}

int cmd_cover(const RunConfig& cfg) {
  require_protocol_n(cfg.n);
  if (cfg.n > 4) throw UsageError("cover: exact rectangle cover is limited to n <= 4");
  const auto m = build_support_matrix(cfg.n, false, false, cfg.threads);
  const auto exact = exact_min_rectangle_cover(m.entries);
  const auto u = Universe::build(cfg.n, {});
  std::vector<MatrixRectangle> rects;
  std::size_t nonempty = 0;
  for (const auto& r : protocol_rectangles(u)) {
    if (!r.rows.empty() && !r.cols.empty()) ++nonempty;
    rects.push_back(to_matrix_rectangle(r, m));
  }
  const auto greedy = greedy_rectangle_cover(m.entries, rects);

  Sink sink(cfg.out, false);
  auto& out = sink.stream();
  out << std::fixed << std::setprecision(4);
  out << "n: " << cfg.n << '\n'
      << "rows: " << m.entries.rows() << '\n'
      << "cols: " << m.entries.cols() << '\n'
      << "one_entries: " << m.entries.count_ones() << '\n'
      << "exact: " << exact.size << '\n'
      << "greedy: " << greedy << '\n'
      << "protocol_rectangles: " << rects.size() << '\n'
      << "nonempty_protocol_rectangles: " << nonempty << '\n'
      << "log2_exact: " << std::log2(static_cast<double>(exact.size)) << '\n'
      << "log2_protocol: " << cost_bits(cfg.n) << '\n';
  const bool ok = exact.size <= greedy && greedy <= certificate_space_size(cfg.n);
  out << "summary: " << (ok ? "pass" : "FAIL") << '\n';
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nondeterministic protocols for the spanning tree slack matrix support"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = auto)");
    sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
  };
  auto add_tie = [&](CLI::App* sub) {
    sub->add_option("--tie-break", cfg.tie_break, "Prover choice among valid witnesses")->check(CLI::IsMember({"min", "max"}));
  };

  auto* verify = app.add_subcommand("verify", "Soundness and completeness sweeps");
  verify->add_option("--n", cfg.n, "Number of nodes")->required();
  verify->add_option("--mode", cfg.mode, "exhaustive or randomized")->check(CLI::IsMember({"exhaustive", "randomized"}));
  verify->add_option("--samples", cfg.samples, "Samples per randomized check");
  verify->add_option("--seed", cfg.seed, "Seed for randomized checks");
  verify->add_flag("--triangle", cfg.triangle, "Also check the triangle property of witnesses");
  verify->add_flag("--include-nonneg", cfg.include_nonneg, "Also check the combined protocol with nonnegativity rows");
  verify->add_option("--check", cfg.checks, "Extra exhaustive checks")
      ->check(CLI::IsMember({"naive", "rectangle-cover", "combined"}));
  verify->add_flag("--allow-large", cfg.allow_large, "Permit exhaustive n = 7");
  add_tie(verify);
  add_common(verify);

  auto* cost = app.add_subcommand("cost-table", "Certificate counts and cost residuals");
  cost->add_option("--max-n", cfg.max_n, "Largest n");
  add_common(cost);

  auto* trace = app.add_subcommand("trace", "Step-by-step run of the parsimonious protocol");
  trace->add_option("--n", cfg.n, "Number of nodes")->required();
  trace->add_option("--seed", cfg.seed, "Seed for the sampled input");
  trace->add_option("--fixed", cfg.fixed, "Fixed input: S=1,2 T=1-3,2-3")->expected(2);
  add_tie(trace);
  add_common(trace);

  auto* exp = app.add_subcommand("export", "Write the support matrix");
  exp->add_option("--n", cfg.n, "Number of nodes")->required();
  exp->add_option("--format", cfg.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
  exp->add_flag("--include-nonneg", cfg.include_nonneg, "Add the nonnegativity rows");
  exp->add_flag("--allow-large", cfg.allow_large, "Permit n = 7");
  add_common(exp);

  auto* cover = app.add_subcommand("cover", "Exact and greedy rectangle covers");
  cover->add_option("--n", cfg.n, "Number of nodes")->required();
  add_common(cover);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(cfg);
    if (*cost) return cmd_cost_table(cfg);
    if (*trace) return cmd_trace(cfg);
    if (*exp) return cmd_export(cfg);
    if (*cover) return cmd_cover(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
