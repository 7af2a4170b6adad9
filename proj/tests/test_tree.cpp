#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "sptree/tree.hpp"

using namespace sptree;

namespace {

Tree star(int n, int center) {
  std::vector<Edge> edges;
  for (int x = 1; x <= n; ++x)
    if (x != center) edges.emplace_back(center, x);
  return Tree(n, edges);
}

Tree path_tree(int n) {
  std::vector<Edge> edges;
  for (int x = 1; x < n; ++x) edges.emplace_back(x, x + 1);
  return Tree(n, edges);
}

// BFS over the graph induced on S; independent of the union-find route.
int bfs_components(const Tree& t, const NodeSet& s) {
  std::vector<char> seen(static_cast<std::size_t>(t.node_count()) + 1, 0);
  int comps = 0;
  for (int x : s.members()) {
    if (seen[x]) continue;
    ++comps;
    std::vector<int> stack{x};
    seen[x] = 1;
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (int z : t.neighbors(y))
        if (s.contains(z) && !seen[z]) {
          seen[z] = 1;
          stack.push_back(z);
        }
    }
  }
  return comps;
}

// Path by DFS from u with explicit parent tracking.
std::vector<int> dfs_path(const Tree& t, int u, int v) {
  std::vector<int> parent(static_cast<std::size_t>(t.node_count()) + 1, 0);
  std::vector<int> stack{u};
  parent[u] = u;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : t.neighbors(x))
      if (!parent[y]) {
        parent[y] = x;
        stack.push_back(y);
      }
  }
  std::vector<int> out{v};
  while (out.back() != u) out.push_back(parent[out.back()]);
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

TEST(Pruefer, DecodeExamples) {
  EXPECT_EQ(pruefer_decode({2, {}}).edges(), (std::vector<Edge>{{1, 2}}));
  EXPECT_EQ(pruefer_decode({4, {1, 1}}), star(4, 1));
  EXPECT_EQ(pruefer_decode({4, {2, 3}}), path_tree(4));
}

TEST(Pruefer, EncodeExamples) {
  EXPECT_EQ(pruefer_encode(star(4, 1)).entries, (std::vector<int>{1, 1}));
  EXPECT_EQ(pruefer_encode(path_tree(4)).entries, (std::vector<int>{2, 3}));
  EXPECT_TRUE(pruefer_encode(Tree(2, {{1, 2}})).entries.empty());
}

TEST(Pruefer, MalformedSequences) {
  EXPECT_THROW(pruefer_decode({4, {1}}), std::invalid_argument);
  EXPECT_THROW(pruefer_decode({4, {1, 5}}), std::out_of_range);
  EXPECT_THROW(pruefer_decode({4, {0, 1}}), std::out_of_range);
  EXPECT_THROW(pruefer_decode({1, {}}), std::invalid_argument);
}

TEST(Pruefer, DecodeEncodeIdentityExhaustive) {
  for (int n = 2; n <= 7; ++n)
    for (auto t : enumerate_trees(n)) ASSERT_EQ(pruefer_decode(pruefer_encode(t)), t) << to_string(t);
}

TEST(Pruefer, EncodeDecodeIdentityRandom) {
  std::mt19937_64 rng(11);
  for (int n : {3, 10, 57, 1000, 10000}) {
    std::uniform_int_distribution<int> pick(1, n);
    for (int rep = 0; rep < 5; ++rep) {
      PrueferSequence seq{n, std::vector<int>(static_cast<std::size_t>(n - 2))};
      for (auto& x : seq.entries) x = pick(rng);
      ASSERT_EQ(pruefer_encode(pruefer_decode(seq)), seq);
    }
  }
}

TEST(Enumeration, CayleyCounts) {
  EXPECT_EQ(enumerate_trees(3).size(), 3u);
  EXPECT_EQ(enumerate_trees(4).size(), 16u);
  EXPECT_EQ(enumerate_trees(6).size(), 1296u);
  EXPECT_EQ(tree_count(8), 262144u);
  for (int n = 2; n <= 7; ++n) {
    std::set<std::vector<Edge>> distinct;
    std::uint64_t seen = 0;
    for (auto t : enumerate_trees(n)) {
      distinct.insert(t.edges());
      ++seen;
    }
    std::uint64_t cayley = 1;
    for (int i = 0; i < n - 2; ++i) cayley *= static_cast<std::uint64_t>(n);
    EXPECT_EQ(seen, cayley);
    EXPECT_EQ(distinct.size(), cayley);
  }
}

TEST(Enumeration, LexicographicPrueferOrder) {
  std::vector<PrueferSequence> codes;
  for (auto t : enumerate_trees(5)) codes.push_back(pruefer_encode(t));
  EXPECT_TRUE(std::is_sorted(codes.begin(), codes.end()));
  EXPECT_EQ(codes.front().entries, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(codes.back().entries, (std::vector<int>{5, 5, 5}));
}

TEST(Enumeration, Cap) {
  EXPECT_THROW(enumerate_trees(kMaxEnumerationNodes + 1), std::out_of_range);
  EXPECT_THROW(enumerate_trees(1), std::invalid_argument);
}

TEST(CutSets, Counts) {
  auto three = enumerate_cut_sets(3);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[0], NodeSet(3, {1, 2}));
  EXPECT_EQ(three[1], NodeSet(3, {1, 3}));
  EXPECT_EQ(three[2], NodeSet(3, {2, 3}));
  EXPECT_EQ(enumerate_cut_sets(4).size(), 10u);
  EXPECT_EQ(enumerate_cut_sets(7).size(), 119u);
  for (int n = 3; n <= 12; ++n) {
    std::uint64_t sum = 0;
    for (int k = 2; k <= n - 1; ++k) sum += binomial(n, k);
    EXPECT_EQ(enumerate_cut_sets(n).size(), sum);
    EXPECT_EQ(cut_set_count(n), sum);
  }
  EXPECT_THROW(enumerate_cut_sets(2), std::invalid_argument);
}

TEST(NodeSet, Invariants) {
  EXPECT_THROW(NodeSet(4, {1}), std::invalid_argument);
  EXPECT_THROW(NodeSet(4, {1, 2, 3, 4}), std::invalid_argument);
  EXPECT_THROW(NodeSet(4, {1, 5}), std::out_of_range);
  NodeSet s(100, {1, 64, 65, 100});
  EXPECT_TRUE(s.contains(65));
  EXPECT_TRUE(s.contains(100));
  EXPECT_FALSE(s.contains(66));
  EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(to_string(s), "{1,64,65,100}");
  EXPECT_EQ(parse_node_set(100, "{1,64,65,100}"), s);
}

TEST(Paths, Examples) {
  EXPECT_EQ(path_nodes(path_tree(4), 1, 4), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(path_nodes(star(4, 3), 1, 2), (std::vector<int>{1, 3, 2}));
  EXPECT_EQ(path_nodes(star(4, 3), 3, 2), (std::vector<int>{3, 2}));
  EXPECT_TRUE(is_on_path(path_tree(4), 1, 3, 4));
  EXPECT_FALSE(is_on_path(path_tree(4), 1, 4, 2));
  EXPECT_TRUE(is_on_path(star(4, 3), 1, 3, 2));
  EXPECT_THROW(path_nodes(path_tree(4), 2, 2), std::invalid_argument);
  EXPECT_THROW(path_nodes(path_tree(4), 0, 2), std::out_of_range);
}

TEST(Paths, SimpleAndMatchesDfsExhaustive) {
  for (int n = 3; n <= 6; ++n)
    for (auto t : enumerate_trees(n)) {
      PathIndex index(t);
      for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) {
          if (u == v) continue;
          auto p = t.path_nodes(u, v);
          ASSERT_EQ(p, dfs_path(t, u, v));
          ASSERT_EQ(p.front(), u);
          ASSERT_EQ(p.back(), v);
          auto sorted = p;
          std::sort(sorted.begin(), sorted.end());
          ASSERT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
          for (int x = 1; x <= n; ++x) {
            bool on = std::find(p.begin(), p.end(), x) != p.end();
            ASSERT_EQ(t.on_path(u, x, v), on);
            ASSERT_EQ(index.on_path(u, x, v), on);
          }
        }
    }
}

TEST(Paths, AdjacentEndpoints) {
  auto t = random_tree(30, 5);
  for (const auto& e : t.edges()) EXPECT_EQ(t.path_nodes(e.a, e.b), (std::vector<int>{e.a, e.b}));
}

TEST(Components, Examples) {
  EXPECT_EQ(induced_components(path_tree(4), NodeSet(4, {1, 2})), 1);
  EXPECT_EQ(induced_components(path_tree(4), NodeSet(4, {1, 3})), 2);
  EXPECT_EQ(induced_components(star(4, 1), NodeSet(4, {2, 3, 4})), 3);
  EXPECT_EQ(f_oracle(NodeSet(4, {1, 3}), path_tree(4)), 1);
  EXPECT_EQ(f_oracle(NodeSet(4, {1, 2}), path_tree(4)), 0);
  EXPECT_EQ(f_oracle(NodeSet(4, {1, 2, 4}), star(4, 3)), 1);
}

TEST(Components, MatchesBfsExhaustive) {
  for (int n = 3; n <= 6; ++n) {
    auto sets = enumerate_cut_sets(n);
    for (auto t : enumerate_trees(n))
      for (const auto& s : sets) {
        int c = induced_components(t, s);
        ASSERT_EQ(c, bfs_components(t, s));
        ASSERT_EQ(f_oracle(s, t) == 1, c >= 2);
      }
  }
}

TEST(RandomTree, DeterministicAndValid) {
  EXPECT_EQ(random_tree(20, 99), random_tree(20, 99));
  EXPECT_NE(random_tree(20, 99), random_tree(20, 100));
  EXPECT_EQ(random_tree(2, 12345).edges(), (std::vector<Edge>{{1, 2}}));
  auto big = random_tree(100000, 3);
  EXPECT_EQ(big.edges().size(), 99999u);
  // re-validate through the constructor
  EXPECT_NO_THROW(Tree(100000, big.edges()));
}

TEST(RandomTree, RoughlyUniformAtN4) {
  std::vector<int> hits(16, 0);
  for (std::uint64_t seed = 0; seed < 16000; ++seed) {
    auto code = pruefer_encode(random_tree(4, seed));
    ++hits[static_cast<std::size_t>((code.entries[0] - 1) * 4 + (code.entries[1] - 1))];
  }
  for (int h : hits) {
    EXPECT_GT(h, 800);
    EXPECT_LT(h, 1200);
  }
}

TEST(TreeType, RejectsNonTrees) {
  EXPECT_THROW(Tree(4, {{1, 2}, {2, 3}}), std::invalid_argument);
  EXPECT_THROW(Tree(4, {{1, 2}, {2, 3}, {1, 3}}), std::invalid_argument);
  EXPECT_THROW(Tree(4, {{1, 2}, {2, 3}, {3, 5}}), std::out_of_range);
  EXPECT_THROW(Tree(3, {{1, 1}, {2, 3}}), std::invalid_argument);
  EXPECT_THROW(Tree(3, {{1, 2}, {1, 2}}), std::invalid_argument);
}

TEST(TreeType, TextForm) {
  auto t = star(4, 3);
  EXPECT_EQ(to_string(t), "4;1-3,2-3,3-4");
  EXPECT_EQ(parse_tree("4;1-3,2-3,3-4"), t);
  EXPECT_EQ(parse_edge_list(3, "1-3,2-3"), star(3, 3));
  EXPECT_THROW(parse_edge_list(3, "1-3;2-3"), std::invalid_argument);
}
