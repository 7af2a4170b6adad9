#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sptree/slack_matrix.hpp"
#include "sptree/verification.hpp"

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

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Minimum cover by plain enumeration: every all-ones (row set, col set),
// maximal ones by pairwise containment, then combinations of increasing size.
std::size_t brute_min_cover(const BoolMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::pair<unsigned, unsigned>> all;
  for (unsigned rs = 1; rs < (1u << R); ++rs)
    for (unsigned cs = 1; cs < (1u << C); ++cs) {
      bool ok = true;
      for (std::size_t r = 0; r < R && ok; ++r)
        for (std::size_t c = 0; c < C && ok; ++c)
          if ((rs >> r & 1) && (cs >> c & 1) && !m.at(r, c)) ok = false;
      if (ok) all.emplace_back(rs, cs);
    }
  std::vector<std::pair<unsigned, unsigned>> maximal;
  for (auto a : all) {
    bool dominated = false;
    for (auto b : all)
      if (a != b && (a.first & ~b.first) == 0 && (a.second & ~b.second) == 0) dominated = true;
    if (!dominated) maximal.push_back(a);
  }
  std::vector<std::pair<std::size_t, std::size_t>> ones;
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c)
      if (m.at(r, c)) ones.emplace_back(r, c);
  if (ones.empty()) return 0;
  const std::size_t k_max = maximal.size();
  for (std::size_t k = 1; k <= k_max; ++k) {
    // all k-subsets of maximal
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      bool covers = true;
      for (auto [r, c] : ones) {
        bool hit = false;
        for (auto i : pick)
          if ((maximal[i].first >> r & 1) && (maximal[i].second >> c & 1)) hit = true;
        if (!hit) {
          covers = false;
          break;
        }
      }
      if (covers) return k;
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == k_max - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return k_max;
}

bool covers_all(const BoolMatrix& m, const std::vector<MatrixRectangle>& rects) {
  BoolMatrix seen(m.rows(), m.cols());
  for (const auto& rect : rects) {
    if (!is_one_rectangle(m, rect)) return false;
    for (auto r : rect.rows)
      for (auto c : rect.cols) seen.set(r, c);
  }
  return seen == m;
}

}  // namespace

TEST(Slack, Examples) {
  EXPECT_EQ(slack_value(CycleFacet{NodeSet(4, {1, 2, 3})}, path_tree(4)), 0);
  EXPECT_EQ(slack_value(CycleFacet{NodeSet(4, {1, 3})}, path_tree(4)), 1);
  EXPECT_EQ(slack_value(NonnegFacet{Edge(1, 2)}, star(4, 1)), 1);
  EXPECT_EQ(slack_value(NonnegFacet{Edge(2, 3)}, star(4, 1)), 0);
}

TEST(Slack, MatchesComponentCountExhaustive) {
  for (int n = 3; n <= 5; ++n) {
    auto sets = enumerate_cut_sets(n);
    for (auto t : enumerate_trees(n))
      for (const auto& s : sets) {
        int slack = slack_value(CycleFacet{s}, t);
        ASSERT_EQ(slack, induced_components(t, s) - 1);
        ASSERT_GE(slack, 0);
        ASSERT_LE(slack, s.size() - 1);
      }
  }
}

TEST(Slack, MatchesComponentCountRandomized) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(3, 200);
  for (int rep = 0; rep < 10000; ++rep) {
    int n = size(rng);
    auto t = random_tree(n, rng);
    auto s = detail::random_node_set(t, rng);
    ASSERT_EQ(slack_value(CycleFacet{s}, t), induced_components(t, s) - 1);
  }
}

TEST(SupportMatrix, NThreeIsPermutationPattern) {
  auto m = build_support_matrix(3, false);
  ASSERT_EQ(m.entries.rows(), 3u);
  ASSERT_EQ(m.col_count, 3u);
  // columns: stars centred at 1, 2, 3; S = {i,j} is disconnected only by the third node's star
  EXPECT_TRUE(m.entries.at(0, 2));
  EXPECT_TRUE(m.entries.at(1, 1));
  EXPECT_TRUE(m.entries.at(2, 0));
  EXPECT_EQ(m.entries.count_ones(), 3u);
}

TEST(SupportMatrix, DimensionsAndRowSums) {
  auto m = build_support_matrix(4, false);
  EXPECT_EQ(m.entries.rows(), 10u);
  EXPECT_EQ(m.entries.cols(), 16u);
  for (int n = 4; n <= 6; ++n) {
    auto mm = build_support_matrix(n, false);
    const auto all = tree_count(n);
    const auto containing_edge = 2 * all / static_cast<std::uint64_t>(n);
    for (std::size_t r = 0; r < mm.row_index.size(); ++r) {
      const auto& s = std::get<CycleFacet>(mm.row_index[r]).set;
      if (s.size() == 2) {
        EXPECT_EQ(mm.entries.row(r).count(), all - containing_edge);
      }
    }
  }
  auto with = build_support_matrix(5, true);
  auto without = build_support_matrix(5, false);
  EXPECT_EQ(with.entries.rows() - without.entries.rows(), 10u);
}

TEST(SupportMatrix, AgreesWithOracle) {
  for (int n = 3; n <= 5; ++n) {
    auto m = build_support_matrix(n, true, false, 2);
    for (std::size_t c = 0; c < m.col_count; ++c) {
      auto t = m.col_tree(c);
      for (std::size_t r = 0; r < m.row_index.size(); ++r) {
        ASSERT_EQ(m.entries.at(r, c), m.slack(r, c) >= 1);
        ASSERT_GE(m.slack(r, c), 0);
        if (auto* cf = std::get_if<CycleFacet>(&m.row_index[r]))
          ASSERT_EQ(m.entries.at(r, c), f_oracle(cf->set, t) == 1);
        else
          ASSERT_EQ(m.entries.at(r, c), t.has_edge(std::get<NonnegFacet>(m.row_index[r]).edge.a,
                                                   std::get<NonnegFacet>(m.row_index[r]).edge.b));
      }
    }
  }
}

TEST(SupportMatrix, ThreadCountIndependent) {
  EXPECT_EQ(build_support_matrix(5, true, false, 1), build_support_matrix(5, true, false, 3));
}

TEST(SupportMatrix, Cap) {
  EXPECT_THROW(build_support_matrix(7, false), std::out_of_range);
  EXPECT_THROW(build_support_matrix(2, false), std::invalid_argument);
}

TEST(Export, CsvShape) {
  std::ostringstream out;
  export_csv(build_support_matrix(3, false), out);
  auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "facet,1,2,3");
  EXPECT_EQ(lines[1], "\"S:{1,2}\",0,0,1");
  EXPECT_EQ(lines[2], "\"S:{1,3}\",0,1,0");
  EXPECT_EQ(lines[3], "\"S:{2,3}\",1,0,0");

  std::ostringstream four;
  export_csv(build_support_matrix(4, true), four);
  auto l4 = lines_of(four.str());
  EXPECT_EQ(l4.size(), 1u + 10u + 6u);
  EXPECT_EQ(l4[1].substr(0, 10), "\"S:{1,2}\",");
  EXPECT_EQ(l4.back().substr(0, 6), "E:3-4,");
  EXPECT_EQ(l4[0].substr(0, 14), "facet,1 1,1 2,");
}

TEST(Export, BinaryHeader) {
  std::ostringstream out;
  export_binary(build_support_matrix(3, false), out);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 4u + 1u + 12u + 3u);
  EXPECT_EQ(bytes.substr(0, 4), "STSM");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes.substr(5, 12), std::string("\x03\0\0\0\x03\0\0\0\x03\0\0\0", 12));
  EXPECT_EQ(static_cast<unsigned char>(bytes[17]), 0x04);  // row {1,2}: column 2
  EXPECT_EQ(static_cast<unsigned char>(bytes[18]), 0x02);
  EXPECT_EQ(static_cast<unsigned char>(bytes[19]), 0x01);
}

TEST(Export, BinaryRoundTrip) {
  for (bool nonneg : {false, true}) {
    auto m = build_support_matrix(5, nonneg);
    std::stringstream buf;
    export_matrix(m, MatrixFormat::binary, buf);
    auto back = import_binary(buf);
    EXPECT_EQ(back, m);
    EXPECT_FALSE(back.has_slacks());
  }
}

TEST(Export, ImportRejectsGarbage) {
  std::stringstream bad("XXXX");
  EXPECT_THROW(import_binary(bad), std::runtime_error);
  std::ostringstream out;
  export_binary(build_support_matrix(4, false), out);
  std::string truncated = out.str().substr(0, out.str().size() - 1);
  std::stringstream in(truncated);
  EXPECT_THROW(import_binary(in), std::runtime_error);
}

TEST(ExactCover, NThreeNeedsThree) {
  auto result = exact_min_rectangle_cover(build_support_matrix(3, false).entries);
  EXPECT_EQ(result.size, 3u);
  EXPECT_EQ(result.cover.size(), 3u);
}

TEST(ExactCover, Trivial) {
  EXPECT_EQ(exact_min_rectangle_cover(BoolMatrix(3, 4)).size, 0u);
  BoolMatrix row(1, 6);
  for (std::size_t c : {0, 2, 3, 5}) row.set(0, c);
  EXPECT_EQ(exact_min_rectangle_cover(row).size, 1u);
}

TEST(ExactCover, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 150; ++rep) {
    BoolMatrix m(4, 4);
    std::bernoulli_distribution bit(0.6);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c)
        if (bit(rng)) m.set(r, c);
    auto result = exact_min_rectangle_cover(m);
    ASSERT_EQ(result.size, brute_min_cover(m));
    ASSERT_TRUE(covers_all(m, result.cover));
  }
}

TEST(ExactCover, NFourWithinProtocolBound) {
  auto m = build_support_matrix(4, false);
  auto result = exact_min_rectangle_cover(m.entries);
  EXPECT_TRUE(covers_all(m.entries, result.cover));
  EXPECT_LE(result.size, certificate_space_size(4));
  EXPECT_GE(result.size, 3u);
}

TEST(ExactCover, Cap) {
  EXPECT_THROW(exact_min_rectangle_cover(build_support_matrix(5, false).entries), std::length_error);
}

TEST(GreedyCover, ProtocolRectangles) {
  for (int n : {3, 4}) {
    auto m = build_support_matrix(n, false);
    auto u = Universe::build(n, {});
    std::vector<MatrixRectangle> rects;
    for (const auto& r : protocol_rectangles(u)) rects.push_back(to_matrix_rectangle(r, m));
    auto g = greedy_rectangle_cover(m.entries, rects);
    auto exact = exact_min_rectangle_cover(m.entries).size;
    EXPECT_GE(g, exact);
    EXPECT_LE(g, certificate_space_size(n));
    if (n == 3) {
      EXPECT_GE(g, 3u);
    }
  }
}

TEST(GreedyCover, ExactCoverIsFixedPoint) {
  auto m = build_support_matrix(4, false);
  auto exact = exact_min_rectangle_cover(m.entries);
  EXPECT_EQ(greedy_rectangle_cover(m.entries, exact.cover), exact.size);
}

TEST(GreedyCover, ReportsUncovered) {
  auto m = build_support_matrix(3, false);
  std::vector<MatrixRectangle> partial{{{0}, {2}}, {{1}, {1}}};
  EXPECT_THROW(greedy_rectangle_cover(m.entries, partial), std::invalid_argument);
}
