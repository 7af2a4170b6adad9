#pragma once

// Labeled trees on [n] = {1..n}, node subsets, Pruefer coding and the
// connectivity oracle f(S,T) = [T restricted to S is disconnected].
//
// All public interfaces use 1-based node labels.

#include <algorithm>
#include <bit>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sptree {

/// Largest n for which enumerate_trees() is allowed (9^7 = 4782969 trees).
inline constexpr int kMaxEnumerationNodes = 9;
/// Largest n for which enumerate_cut_sets() is allowed.
inline constexpr int kMaxCutSetNodes = 24;

/// Unordered node pair, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  Edge() = default;
  Edge(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  return std::to_string(e.a) + "-" + std::to_string(e.b);
}

/// All C(n,2) pairs in lexicographic order.
inline std::vector<Edge> all_edges(int n) {
  std::vector<Edge> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.emplace_back(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// NodeSet

/// A set S of nodes with 1 < |S| < n (the rows of the support matrix).
///
/// Stored as a bitmask: a single word for n <= 64, and a multi-word mask
/// above that. Bit (i-1) represents node i.
class NodeSet {
 public:
  NodeSet(int n, std::span<const int> members) : n_(n), words_(word_count(n), 0) {
    if (n < 3) throw std::invalid_argument("NodeSet: n must be at least 3");
    for (int x : members) {
      if (x < 1 || x > n) throw std::out_of_range("NodeSet: member " + std::to_string(x) + " outside [1," + std::to_string(n) + "]");
      words_[(x - 1) >> 6] |= std::uint64_t{1} << ((x - 1) & 63);
    }
    validate();
  }
  NodeSet(int n, std::initializer_list<int> members)
      : NodeSet(n, std::span<const int>(members.begin(), members.size())) {}

  /// Build from a raw bitmask (n <= 64).
  static NodeSet from_mask(int n, std::uint64_t mask) {
    if (n < 3 || n > 64) throw std::invalid_argument("NodeSet::from_mask requires 3 <= n <= 64");
    if (n < 64 && (mask >> n)) throw std::out_of_range("NodeSet::from_mask: bits beyond n");
    NodeSet s(n);
    s.words_[0] = mask;
    s.validate();
    return s;
  }

  int n() const { return n_; }

  bool contains(int x) const {
    if (x < 1 || x > n_) return false;
    return (words_[(x - 1) >> 6] >> ((x - 1) & 63)) & 1u;
  }

  int size() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  /// Low 64 nodes as a bitmask; the whole set when n <= 64.
  std::uint64_t mask() const { return words_[0]; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int x = 1; x <= n_; ++x)
      if (contains(x)) out.push_back(x);
    return out;
  }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;
  friend auto operator<=>(const NodeSet& l, const NodeSet& r) {
    if (auto c = l.n_ <=> r.n_; c != 0) return c;
    // most significant word first, so the order matches the integer value of the mask
    return std::lexicographical_compare_three_way(l.words_.rbegin(), l.words_.rend(),
                                                  r.words_.rbegin(), r.words_.rend());
  }

 private:
  explicit NodeSet(int n) : n_(n), words_(word_count(n), 0) {}

  static std::size_t word_count(int n) { return static_cast<std::size_t>((std::max(n, 1) + 63) / 64); }

  void validate() const {
    int k = size();
    if (k <= 1) throw std::invalid_argument("NodeSet: |S| must exceed 1");
    if (k >= n_) throw std::invalid_argument("NodeSet: S must be a proper subset of [n]");
  }

  int n_;
  std::vector<std::uint64_t> words_;
};

/// "{1,2,5}"
inline std::string to_string(const NodeSet& s) {
  std::string out = "{";
  bool first = true;
  for (int x : s.members()) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  return out + "}";
}

/// Parses "1,2,5" or "{1,2,5}".
inline NodeSet parse_node_set(int n, std::string_view text) {
  if (!text.empty() && text.front() == '{') text.remove_prefix(1);
  if (!text.empty() && text.back() == '}') text.remove_suffix(1);
  std::vector<int> members;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw std::invalid_argument("node set: empty member");
    std::size_t used = 0;
    int x = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("node set: bad member '" + item + "'");
    members.push_back(x);
  }
  return NodeSet(n, members);
}

/// Number of sets 1 < |S| < n, i.e. 2^n - n - 2.
inline std::uint64_t cut_set_count(int n) {
  if (n < 3 || n > 63) throw std::out_of_range("cut_set_count: n outside [3,63]");
  return (std::uint64_t{1} << n) - static_cast<std::uint64_t>(n) - 2;
}

/// All S with 1 < |S| < n, in increasing bitmask order.
inline std::vector<NodeSet> enumerate_cut_sets(int n) {
  if (n < 3) throw std::invalid_argument("enumerate_cut_sets: n must be at least 3");
  if (n > kMaxCutSetNodes) throw std::out_of_range("enumerate_cut_sets: n above cap " + std::to_string(kMaxCutSetNodes));
  std::vector<NodeSet> out;
  out.reserve(cut_set_count(n));
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t m = 3; m < full; ++m) {
    int k = std::popcount(m);
    if (k > 1) out.push_back(NodeSet::from_mask(n, m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tree

/// A spanning tree of the complete graph on [n]. Immutable after construction.
///
/// Besides sorted adjacency lists the tree keeps a parent/depth array rooted
/// at node 1, which answers path queries in O(path length).
class Tree {
 public:
  Tree(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 2) throw std::invalid_argument("Tree: n must be at least 2");
    if (edges_.size() != static_cast<std::size_t>(n - 1))
      throw std::invalid_argument("Tree: expected " + std::to_string(n - 1) + " edges, got " + std::to_string(edges_.size()));
    adj_.assign(static_cast<std::size_t>(n) + 1, {});
    for (const auto& e : edges_) {
      if (e.a < 1 || e.b > n) throw std::out_of_range("Tree: edge " + to_string(e) + " outside [1," + std::to_string(n) + "]");
      if (e.a == e.b) throw std::invalid_argument("Tree: self loop at " + std::to_string(e.a));
      adj_[e.a].push_back(e.b);
      adj_[e.b].push_back(e.a);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("Tree: duplicate edge");
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());

    parent_.assign(static_cast<std::size_t>(n) + 1, 0);
    depth_.assign(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> queue{1};
    depth_[1] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int x = queue[head];
      for (int y : adj_[x]) {
        if (depth_[y] >= 0) continue;
        depth_[y] = depth_[x] + 1;
        parent_[y] = x;
        queue.push_back(y);
      }
    }
    if (queue.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("Tree: edges do not connect [n]");
  }

  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int x) const { return adj_.at(static_cast<std::size_t>(x)); }

  bool has_edge(int a, int b) const {
    if (a < 1 || a > n_ || b < 1 || b > n_) return false;
    const auto& nb = adj_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  /// The unique u-v path, endpoints included.
  std::vector<int> path_nodes(int u, int v) const {
    check_endpoints(u, v);
    std::vector<int> left, right;
    int a = u, b = v;
    while (depth_[a] > depth_[b]) { left.push_back(a); a = parent_[a]; }
    while (depth_[b] > depth_[a]) { right.push_back(b); b = parent_[b]; }
    while (a != b) {
      left.push_back(a); a = parent_[a];
      right.push_back(b); b = parent_[b];
    }
    left.push_back(a);
    left.insert(left.end(), right.rbegin(), right.rend());
    return left;
  }

  /// True iff x lies on the u-v path (endpoints count).
  bool on_path(int u, int x, int v) const {
    check_endpoints(u, v);
    if (x < 1 || x > n_) throw std::out_of_range("on_path: node outside [1,n]");
    int a = u, b = v;
    if (a == x || b == x) return true;
    while (depth_[a] > depth_[b]) { a = parent_[a]; if (a == x) return true; }
    while (depth_[b] > depth_[a]) { b = parent_[b]; if (b == x) return true; }
    while (a != b) {
      a = parent_[a];
      b = parent_[b];
      if (a == x || b == x) return true;
    }
    return false;
  }

  friend bool operator==(const Tree& l, const Tree& r) { return l.n_ == r.n_ && l.edges_ == r.edges_; }

 private:
  void check_endpoints(int u, int v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_) throw std::out_of_range("path query: node outside [1,n]");
    if (u == v) throw std::invalid_argument("path query: endpoints must differ");
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_;
  std::vector<int> depth_;
};

inline std::vector<int> path_nodes(const Tree& t, int u, int v) { return t.path_nodes(u, v); }
inline bool is_on_path(const Tree& t, int u, int x, int v) { return t.on_path(u, x, v); }

/// "n;u1-v1,u2-v2,..." with edges in sorted order.
inline std::string to_string(const Tree& t) {
  std::string out = std::to_string(t.node_count()) + ";";
  bool first = true;
  for (const auto& e : t.edges()) {
    if (!first) out += ',';
    out += to_string(e);
    first = false;
  }
  return out;
}

/// Parses an edge list "1-3,2-3" for a tree on [n].
inline Tree parse_edge_list(int n, std::string_view text) {
  std::vector<Edge> edges;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    auto dash = item.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("edge list: expected u-v, got '" + item + "'");
    std::size_t used_a = 0, used_b = 0;
    auto sa = item.substr(0, dash), sb = item.substr(dash + 1);
    int a = std::stoi(sa, &used_a);
    int b = std::stoi(sb, &used_b);
    if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument("edge list: bad edge '" + item + "'");
    edges.emplace_back(a, b);
  }
  return Tree(n, std::move(edges));
}

/// Parses the serialized form "n;u1-v1,...".
inline Tree parse_tree(std::string_view text) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("tree: missing ';'");
  std::string head(text.substr(0, semi));
  std::size_t used = 0;
  int n = std::stoi(head, &used);
  if (used != head.size()) throw std::invalid_argument("tree: bad node count '" + head + "'");
  return parse_edge_list(n, text.substr(semi + 1));
}

// ---------------------------------------------------------------------------
// Pruefer coding

struct PrueferSequence {
  int n = 2;
  std::vector<int> entries;

  void validate() const {
    if (n < 2) throw std::invalid_argument("Pruefer: n must be at least 2");
    if (entries.size() != static_cast<std::size_t>(n - 2))
      throw std::invalid_argument("Pruefer: length " + std::to_string(entries.size()) + " != n-2 = " + std::to_string(n - 2));
    for (int x : entries)
      if (x < 1 || x > n) throw std::out_of_range("Pruefer: entry " + std::to_string(x) + " outside [1," + std::to_string(n) + "]");
  }

  friend auto operator<=>(const PrueferSequence&, const PrueferSequence&) = default;
};

/// Linear-time decode.
inline Tree pruefer_decode(const PrueferSequence& seq) {
  seq.validate();
  const int n = seq.n;
  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
  for (int x : seq.entries) ++degree[x];
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));

  int ptr = 1;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int x : seq.entries) {
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      do { ++ptr; } while (degree[ptr] != 1);
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, n);
  return Tree(n, std::move(edges));
}

/// Linear-time encode; inverse of pruefer_decode.
inline PrueferSequence pruefer_encode(const Tree& t) {
  const int n = t.node_count();
  PrueferSequence seq{n, {}};
  if (n == 2) return seq;

  // parent pointers with root n
  std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> stack{n};
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  seen[n] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : t.neighbors(x)) {
      if (seen[y]) continue;
      seen[y] = 1;
      parent[y] = x;
      stack.push_back(y);
    }
  }
  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 0);
  for (int x = 1; x <= n; ++x) degree[x] = static_cast<int>(t.neighbors(x).size());

  seq.entries.reserve(static_cast<std::size_t>(n - 2));
  int ptr = 1;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int i = 0; i < n - 2; ++i) {
    int next = parent[leaf];
    seq.entries.push_back(next);
    if (--degree[next] == 1 && next < ptr) {
      leaf = next;
    } else {
      do { ++ptr; } while (degree[ptr] != 1);
      leaf = ptr;
    }
  }
  return seq;
}

/// Cayley's formula n^(n-2).
inline std::uint64_t tree_count(int n) {
  if (n < 2) throw std::invalid_argument("tree_count: n must be at least 2");
  std::uint64_t c = 1;
  for (int i = 0; i < n - 2; ++i) c *= static_cast<std::uint64_t>(n);
  return c;
}

/// The Pruefer sequence with the given index in lexicographic order.
inline PrueferSequence pruefer_at(int n, std::uint64_t index) {
  PrueferSequence seq{n, std::vector<int>(static_cast<std::size_t>(std::max(n - 2, 0)), 1)};
  for (auto it = seq.entries.rbegin(); it != seq.entries.rend(); ++it) {
    *it = static_cast<int>(index % static_cast<std::uint64_t>(n)) + 1;
    index /= static_cast<std::uint64_t>(n);
  }
  return seq;
}

inline Tree tree_at(int n, std::uint64_t index) { return pruefer_decode(pruefer_at(n, index)); }

/// Forward range over all labeled trees on [n] in lexicographic Pruefer order.
class TreeRange {
 public:
  class iterator {
   public:
    using value_type = Tree;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(int n, std::uint64_t index) : n_(n), index_(index) {}

    Tree operator*() const { return tree_at(n_, index_); }
    iterator& operator++() { ++index_; return *this; }
    iterator operator++(int) { auto tmp = *this; ++index_; return tmp; }
    std::uint64_t index() const { return index_; }
    friend bool operator==(const iterator& l, const iterator& r) { return l.index_ == r.index_; }

   private:
    int n_ = 2;
    std::uint64_t index_ = 0;
  };

  explicit TreeRange(int n) : n_(n), count_(tree_count(n)) {}
  iterator begin() const { return {n_, 0}; }
  iterator end() const { return {n_, count_}; }
  std::uint64_t size() const { return count_; }

 private:
  int n_;
  std::uint64_t count_;
};

/// All n^(n-2) trees, lexicographic in their Pruefer codes. 2 <= n <= kMaxEnumerationNodes.
inline TreeRange enumerate_trees(int n) {
  if (n < 2) throw std::invalid_argument("enumerate_trees: n must be at least 2");
  if (n > kMaxEnumerationNodes) throw std::out_of_range("enumerate_trees: n above cap " + std::to_string(kMaxEnumerationNodes));
  return TreeRange(n);
}

inline std::vector<Tree> all_trees(int n) {
  auto range = enumerate_trees(n);
  std::vector<Tree> out;
  out.reserve(range.size());
  for (auto t : range) out.push_back(std::move(t));
  return out;
}

/// Uniform random labeled tree (uniform Pruefer code), deterministic per seed.
inline Tree random_tree(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_tree: n must be at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, n);
  PrueferSequence seq{n, std::vector<int>(static_cast<std::size_t>(n - 2))};
  for (auto& x : seq.entries) x = pick(rng);
  return pruefer_decode(seq);
}

/// Same as random_tree but drawing from a caller-owned engine.
template <std::uniform_random_bit_generator Rng>
Tree random_tree(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("random_tree: n must be at least 2");
  std::uniform_int_distribution<int> pick(1, n);
  PrueferSequence seq{n, std::vector<int>(static_cast<std::size_t>(n - 2))};
  for (auto& x : seq.entries) x = pick(rng);
  return pruefer_decode(seq);
}

// ---------------------------------------------------------------------------
// Connectivity oracle

/// Number of connected components of (S, T restricted to pairs within S).
inline int induced_components(const Tree& t, const NodeSet& s) {
  if (s.n() != t.node_count()) throw std::invalid_argument("induced_components: size mismatch");
  std::vector<int> root(static_cast<std::size_t>(t.node_count()) + 1);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) {
      root[x] = root[root[x]];
      x = root[x];
    }
    return x;
  };
  int components = s.size();
  for (const auto& e : t.edges()) {
    if (!s.contains(e.a) || !s.contains(e.b)) continue;
    int ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      root[ra] = rb;
      --components;
    }
  }
  return components;
}

/// f(S,T): 1 iff the sub-forest of T induced by S is disconnected.
inline int f_oracle(const NodeSet& s, const Tree& t) { return induced_components(t, s) > 1 ? 1 : 0; }

// ---------------------------------------------------------------------------
// Path index

/// Precomputed path bitmasks for all node pairs of a tree with n <= 64.
/// Gives O(1) on_path queries for the exhaustive sweeps.
class PathIndex {
 public:
  explicit PathIndex(const Tree& t) : n_(t.node_count()) {
    if (n_ > 64) throw std::out_of_range("PathIndex: n above 64");
    const auto stride = static_cast<std::size_t>(n_) + 1;
    masks_.assign(stride * stride, 0);
    std::vector<int> queue;
    std::vector<char> seen;
    for (int root = 1; root <= n_; ++root) {
      auto* row = &masks_[static_cast<std::size_t>(root) * stride];
      seen.assign(stride, 0);
      queue.assign(1, root);
      seen[root] = 1;
      row[root] = bit(root);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        int x = queue[head];
        for (int y : t.neighbors(x)) {
          if (seen[y]) continue;
          seen[y] = 1;
          row[y] = row[x] | bit(y);
          queue.push_back(y);
        }
      }
    }
  }

  int node_count() const { return n_; }

  /// Nodes on the u-v path, endpoints included.
  std::uint64_t path_mask(int u, int v) const {
    return masks_[static_cast<std::size_t>(u) * (static_cast<std::size_t>(n_) + 1) + static_cast<std::size_t>(v)];
  }

  bool on_path(int u, int x, int v) const { return (path_mask(u, v) >> (x - 1)) & 1u; }

  bool has_edge(int a, int b) const { return a != b && path_mask(a, b) == (bit(a) | bit(b)); }

  static std::uint64_t bit(int x) { return std::uint64_t{1} << (x - 1); }

 private:
  int n_;
  std::vector<std::uint64_t> masks_;
};

/// Anything that answers "is x on the u-v path".
template <class T>
concept PathQuery = requires(const T& t, int a) {
  { t.node_count() } -> std::convertible_to<int>;
  { t.on_path(a, a, a) } -> std::same_as<bool>;
};

}  // namespace sptree
