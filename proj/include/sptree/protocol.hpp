#pragma once

// Nondeterministic protocols for f(S,T).
//
// Naive protocol: the prover sends a triple (u,t,v) and Alice/Bob check
// their half of the witness condition.
//
// Parsimonious protocol: the prover picks a witness with u < v minimizing
// |t-u| + |t-v| and sends only (u, v, pi, delta, d), where pi says which of
// the ranges R_u / R_v contains t, delta says on which side of its anchor t
// lies and d = floor(log2 |t - anchor|). Alice and Bob test every r that
// maps to the same certificate.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "sptree/tree.hpp"

namespace sptree {

/// Raw prover message of the naive protocol; any element of [n]^3.
struct Triple {
  int u = 0;
  int t = 0;
  int v = 0;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// A witness candidate with u, t, v pairwise distinct, stored with u < v.
class Witness {
 public:
  Witness(int u, int t, int v) : u_(std::min(u, v)), t_(t), v_(std::max(u, v)) {
    if (u == v || t == u || t == v) throw std::invalid_argument("Witness: u, t, v must be pairwise distinct");
  }

  int u() const { return u_; }
  int t() const { return t_; }
  int v() const { return v_; }
  Triple triple() const { return {u_, t_, v_}; }

  friend auto operator<=>(const Witness&, const Witness&) = default;

 private:
  int u_, t_, v_;
};

inline std::string to_string(const Triple& w) {
  return "(" + std::to_string(w.u) + "," + std::to_string(w.t) + "," + std::to_string(w.v) + ")";
}
inline std::string to_string(const Witness& w) { return to_string(w.triple()); }

inline int floor_log2(std::uint64_t x) { return static_cast<int>(std::bit_width(x)) - 1; }

// ---------------------------------------------------------------------------
// Naive protocol and witnesses

/// Alice's check: u, v in S and t not in S.
inline bool naive_alice_accept(const NodeSet& s, const Triple& w) {
  return s.contains(w.u) && s.contains(w.v) && !s.contains(w.t);
}

/// Bob's check: t on the u-v path. For u == v the path is the single node u.
template <PathQuery Paths>
bool naive_bob_accept(const Paths& tree, const Triple& w) {
  const int n = tree.node_count();
  if (w.u < 1 || w.u > n || w.v < 1 || w.v > n || w.t < 1 || w.t > n) return false;
  if (w.u == w.v) return w.t == w.u;
  return tree.on_path(w.u, w.t, w.v);
}

template <PathQuery Paths>
bool is_witness(const NodeSet& s, const Paths& tree, const Triple& w) {
  return naive_alice_accept(s, w) && naive_bob_accept(tree, w);
}

template <PathQuery Paths>
bool is_witness(const NodeSet& s, const Paths& tree, const Witness& w) {
  return is_witness(s, tree, w.triple());
}

/// Brute force over all triples.
template <PathQuery Paths>
bool witness_exists(const NodeSet& s, const Paths& tree) {
  const int n = s.n();
  for (int u = 1; u <= n; ++u) {
    if (!s.contains(u)) continue;
    for (int v = u + 1; v <= n; ++v) {
      if (!s.contains(v)) continue;
      for (int t = 1; t <= n; ++t)
        if (!s.contains(t) && tree.on_path(u, t, v)) return true;
    }
  }
  return false;
}

inline int mu(int u, int t, int v) { return std::abs(t - u) + std::abs(t - v); }
inline int mu(const Triple& w) { return mu(w.u, w.t, w.v); }
inline int mu(const Witness& w) { return mu(w.u(), w.t(), w.v()); }

// ---------------------------------------------------------------------------
// Ranges and certificates

/// Inclusive integer interval; empty when lo > hi.
struct Interval {
  int lo = 1;
  int hi = 0;
  bool empty() const { return lo > hi; }
  bool contains(int x) const { return lo <= x && x <= hi; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Ranges {
  Interval ru;  // at least as close to u as to v
  Interval rv;  // strictly closer to v
};

/// R_u = {1..floor((u+v)/2)}, R_v = {floor((u+v)/2)+1..n}.
inline Ranges range_split(int u, int v, int n) {
  if (u >= v) throw std::invalid_argument("range_split: requires u < v");
  if (u < 1 || v > n) throw std::out_of_range("range_split: u, v outside [1,n]");
  const int mid = (u + v) / 2;
  return {{1, mid}, {mid + 1, n}};
}

/// True iff t is in R_v, i.e. t > (u+v)/2.
inline bool in_upper_range(int u, int v, int t) { return 2 * t > u + v; }

/// The prover's message (u, v, pi, delta, d). Ordered lexicographically.
struct Certificate {
  int u = 0;
  int v = 0;
  int pi = 0;
  int delta = 0;
  int d = 0;

  int anchor() const { return pi ? v : u; }

  friend auto operator<=>(const Certificate&, const Certificate&) = default;
};

/// Membership in the certificate set for [n].
inline bool is_valid(const Certificate& c, int n) {
  return 1 <= c.u && c.u < c.v && c.v <= n && (c.pi == 0 || c.pi == 1) && (c.delta == 0 || c.delta == 1) &&
         0 <= c.d && c.d <= floor_log2(static_cast<std::uint64_t>(n));
}

/// "u,v,pi,delta,d"
inline std::string to_string(const Certificate& c) {
  return std::to_string(c.u) + "," + std::to_string(c.v) + "," + std::to_string(c.pi) + "," +
         std::to_string(c.delta) + "," + std::to_string(c.d);
}

inline Certificate parse_certificate(std::string_view text) {
  std::vector<int> fields;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    if (item.empty()) throw std::invalid_argument("certificate: empty field");
    fields.push_back(std::stoi(item, &used));
    if (used != item.size()) throw std::invalid_argument("certificate: bad field '" + item + "'");
  }
  if (fields.size() != 5 || text.ends_with(',')) throw std::invalid_argument("certificate: expected u,v,pi,delta,d");
  return {fields[0], fields[1], fields[2], fields[3], fields[4]};
}

/// The compression map h(u,t,v).
inline Certificate encode_certificate(int u, int t, int v) {
  if (u >= v) throw std::invalid_argument("encode_certificate: requires u < v");
  if (t == u || t == v) throw std::invalid_argument("encode_certificate: t must differ from u and v");
  if (u < 1 || t < 1) throw std::out_of_range("encode_certificate: labels start at 1");
  Certificate c{u, v, in_upper_range(u, v, t) ? 1 : 0, 0, 0};
  const int a = c.anchor();
  c.delta = t < a ? 1 : 0;
  c.d = floor_log2(static_cast<std::uint64_t>(std::abs(t - a)));
  return c;
}

inline Certificate encode_certificate(const Witness& w) { return encode_certificate(w.u(), w.t(), w.v()); }

/// All r in [n] \ {u,v} with h(u,r,v) = c, ascending; at most 2^d of them.
inline std::vector<int> candidate_rs(const Certificate& c, int n) {
  std::vector<int> out;
  if (c.u >= c.v || c.d < 0 || c.d > 30) return out;
  const std::int64_t a = c.anchor();
  const std::int64_t step = std::int64_t{1} << c.d;
  std::int64_t lo, hi;
  if (c.delta == 0) {
    lo = a + step;
    hi = a + 2 * step - 1;
  } else {
    lo = a - 2 * step + 1;
    hi = a - step;
  }
  const std::int64_t mid = (c.u + c.v) / 2;
  if (c.pi == 0) {
    lo = std::max<std::int64_t>(lo, 1);
    hi = std::min<std::int64_t>(hi, mid);
  } else {
    lo = std::max<std::int64_t>(lo, mid + 1);
    hi = std::min<std::int64_t>(hi, n);
  }
  lo = std::max<std::int64_t>(lo, 1);
  hi = std::min<std::int64_t>(hi, n);
  for (std::int64_t r = lo; r <= hi; ++r)
    if (r != c.u && r != c.v) out.push_back(static_cast<int>(r));
  return out;
}

// ---------------------------------------------------------------------------
// Parsimonious protocol: Alice and Bob

/// Alice: reject unless u, v in S; reject if any candidate r is in S.
inline bool alice_accept(const NodeSet& s, const Certificate& c) {
  if (!s.contains(c.u) || !s.contains(c.v)) return false;
  for (int r : candidate_rs(c, s.n()))
    if (s.contains(r)) return false;
  return true;
}

/// Bob: accept iff some candidate r lies on the u-v path.
template <PathQuery Paths>
bool bob_accept(const Paths& tree, const Certificate& c) {
  const int n = tree.node_count();
  if (c.u < 1 || c.v > n || c.u >= c.v) return false;
  for (int r : candidate_rs(c, n))
    if (tree.on_path(c.u, r, c.v)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Prover

/// Which valid witness the prover reports when several minimize mu.
enum class TieBreak { lex_min, lex_max };

/// A witness (u,t,v), u < v, minimizing mu; ties resolved by `tie`.
/// Returns nullopt iff f(S,T) = 0.
///
/// For every t outside S the nodes of T - t fall into branches (one per
/// neighbour of t); (u,t,v) is a witness iff u and v are members of S in
/// different branches. Runs in O(n^2).
inline std::optional<Witness> valid_witness(const NodeSet& s, const Tree& tree, TieBreak tie = TieBreak::lex_min) {
  const int n = tree.node_count();
  if (s.n() != n) throw std::invalid_argument("valid_witness: size mismatch");
  std::vector<int> branch(static_cast<std::size_t>(n) + 1);
  std::vector<int> queue;
  std::optional<Witness> best;
  int best_mu = std::numeric_limits<int>::max();

  for (int t = 1; t <= n; ++t) {
    if (s.contains(t)) continue;
    // label branches of T - t
    std::fill(branch.begin(), branch.end(), -1);
    int label = 0;
    for (int root : tree.neighbors(t)) {
      queue.assign(1, root);
      branch[root] = label;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        int x = queue[head];
        for (int y : tree.neighbors(x)) {
          if (y == t || branch[y] >= 0) continue;
          branch[y] = label;
          queue.push_back(y);
        }
      }
      ++label;
    }
    if (label < 2) continue;

    // two smallest per-branch distances from t, over distinct branches
    std::vector<int> closest(static_cast<std::size_t>(label), std::numeric_limits<int>::max());
    for (int x = 1; x <= n; ++x)
      if (x != t && s.contains(x)) closest[branch[x]] = std::min(closest[branch[x]], std::abs(x - t));
    std::partial_sort(closest.begin(), closest.begin() + 2, closest.end());
    if (closest[1] == std::numeric_limits<int>::max()) continue;
    const int mu_t = closest[0] + closest[1];
    if (mu_t > best_mu) continue;

    // extreme (u,v) for this t among pairs achieving mu_t
    std::optional<Witness> pick;
    auto try_u = [&](int u) {
      if (!s.contains(u) || u == t) return false;
      const int rest = mu_t - std::abs(u - t);
      if (rest <= 0) return false;
      int vs[2] = {t - rest, t + rest};
      if (tie == TieBreak::lex_max) std::swap(vs[0], vs[1]);
      for (int v : vs) {
        if (v <= u || v > n || !s.contains(v) || branch[v] == branch[u]) continue;
        pick = Witness(u, t, v);
        return true;
      }
      return false;
    };
    if (tie == TieBreak::lex_min) {
      for (int u = 1; u <= n && !try_u(u); ++u) {}
    } else {
      for (int u = n; u >= 1 && !try_u(u); --u) {}
    }
    if (!pick) continue;  // unreachable when mu_t is attained

    if (mu_t < best_mu) {
      best_mu = mu_t;
      best = pick;
    } else if (tie == TieBreak::lex_min ? *pick < *best : *pick > *best) {
      best = pick;
    }
  }
  return best;
}

/// h(valid witness), or nullopt when f(S,T) = 0.
inline std::optional<Certificate> prover_certificate(const NodeSet& s, const Tree& tree,
                                                     TieBreak tie = TieBreak::lex_min) {
  auto w = valid_witness(s, tree, tie);
  if (!w) return std::nullopt;
  return encode_certificate(*w);
}

// ---------------------------------------------------------------------------
// Certificate space and cost

/// |C(n)| = C(n,2) * 2 * 2 * (floor(log2 n) + 1).
inline std::uint64_t certificate_space_size(int n) {
  if (n < 3) throw std::invalid_argument("certificate_space_size: n must be at least 3");
  const auto nn = static_cast<std::uint64_t>(n);
  return nn * (nn - 1) / 2 * 4 * static_cast<std::uint64_t>(floor_log2(nn) + 1);
}

/// log2 |C(n)|: the prover's bits; Alice and Bob send nothing.
inline double cost_bits(int n) { return std::log2(static_cast<double>(certificate_space_size(n))); }

/// cost_bits(n) - (2 log2 n + log2 log2 n).
inline double cost_residual(int n) {
  const double lg = std::log2(static_cast<double>(n));
  return cost_bits(n) - (2.0 * lg + std::log2(lg));
}

/// The whole certificate set in (u,v,pi,delta,d) order.
inline std::vector<Certificate> all_certificates(int n) {
  std::vector<Certificate> out;
  out.reserve(certificate_space_size(n));
  const int dmax = floor_log2(static_cast<std::uint64_t>(n));
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      for (int pi = 0; pi < 2; ++pi)
        for (int delta = 0; delta < 2; ++delta)
          for (int d = 0; d <= dmax; ++d) out.push_back({u, v, pi, delta, d});
  return out;
}

// ---------------------------------------------------------------------------
// Combined protocol covering the nonnegativity rows

/// Row of the cycle inequality for S.
struct CycleFacet {
  NodeSet set;
  friend bool operator==(const CycleFacet&, const CycleFacet&) = default;
};

/// Row of x_e >= 0.
struct NonnegFacet {
  Edge edge;
  friend bool operator==(const NonnegFacet&, const NonnegFacet&) = default;
};

using FacetId = std::variant<CycleFacet, NonnegFacet>;

/// "S:{1,2}" or "E:1-2"
inline std::string to_string(const FacetId& f) {
  if (auto* c = std::get_if<CycleFacet>(&f)) return "S:" + to_string(c->set);
  return "E:" + to_string(std::get<NonnegFacet>(f).edge);
}

/// The variant index is the extra tag bit: Cyc (0) or Nng (1).
using CombinedCertificate = std::variant<Certificate, Edge>;

/// "C:u,v,pi,delta,d" or "N:u-v"
inline std::string to_string(const CombinedCertificate& cc) {
  if (auto* c = std::get_if<Certificate>(&cc)) return "C:" + to_string(*c);
  return "N:" + to_string(std::get<Edge>(cc));
}

inline CombinedCertificate parse_combined_certificate(std::string_view text) {
  if (text.starts_with("C:")) return parse_certificate(text.substr(2));
  if (text.starts_with("N:")) {
    std::string body(text.substr(2));
    auto dash = body.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("combined certificate: expected N:u-v");
    return Edge(std::stoi(body.substr(0, dash)), std::stoi(body.substr(dash + 1)));
  }
  throw std::invalid_argument("combined certificate: expected prefix C: or N:");
}

/// Alice rejects a tag that does not match her row type.
inline bool combined_alice_accept(const FacetId& facet, const CombinedCertificate& cc) {
  if (auto* e = std::get_if<Edge>(&cc)) {
    auto* nf = std::get_if<NonnegFacet>(&facet);
    return nf && nf->edge == *e;
  }
  auto* cf = std::get_if<CycleFacet>(&facet);
  return cf && alice_accept(cf->set, std::get<Certificate>(cc));
}

/// Bob follows the branch named by the tag.
inline bool combined_bob_accept(const Tree& tree, const CombinedCertificate& cc) {
  if (auto* e = std::get_if<Edge>(&cc)) return tree.has_edge(e->a, e->b);
  return bob_accept(tree, std::get<Certificate>(cc));
}

/// Cycle certificates followed by one Nng(e) per edge.
inline std::vector<CombinedCertificate> all_combined_certificates(int n) {
  std::vector<CombinedCertificate> out;
  for (const auto& c : all_certificates(n)) out.emplace_back(c);
  for (const auto& e : all_edges(n)) out.emplace_back(e);
  return out;
}

/// The honest combined prover: the facet edge itself, or h(valid witness).
inline std::optional<CombinedCertificate> combined_prover(const FacetId& facet, const Tree& tree,
                                                          TieBreak tie = TieBreak::lex_min) {
  if (auto* nf = std::get_if<NonnegFacet>(&facet)) {
    if (!tree.has_edge(nf->edge.a, nf->edge.b)) return std::nullopt;
    return CombinedCertificate{nf->edge};
  }
  auto c = prover_certificate(std::get<CycleFacet>(facet).set, tree, tie);
  if (!c) return std::nullopt;
  return CombinedCertificate{*c};
}

}  // namespace sptree
