#pragma once

// Slack matrix of the spanning tree polytope over (facet rows) x (trees in
// Pruefer order), its 0/1 support, CSV / binary export and rectangle covers
// of small boolean matrices.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sptree/bitrow.hpp"
#include "sptree/parallel.hpp"
#include "sptree/protocol.hpp"
#include "sptree/tree.hpp"

namespace sptree {

/// Default largest n for exhaustive matrices and sweeps.
inline constexpr int kDefaultExhaustiveCap = 6;
/// Largest n reachable with the explicit "large" opt-in.
inline constexpr int kLargeExhaustiveCap = 7;

inline void check_exhaustive_cap(int n, bool allow_large, const char* what) {
  if (n < 3) throw std::invalid_argument(std::string(what) + ": n must be at least 3");
  const int cap = allow_large ? kLargeExhaustiveCap : kDefaultExhaustiveCap;
  if (n > cap)
    throw std::out_of_range(std::string(what) + ": n=" + std::to_string(n) + " above exhaustive cap " + std::to_string(cap) +
                            (allow_large ? "" : " (use the large opt-in for n=7)"));
}

/// Slack of the facet inequality at the characteristic vector of `tree`.
/// Cycle rows use the counting form (|S|-1) - |T within S|.
inline int slack_value(const FacetId& facet, const Tree& tree) {
  if (auto* nf = std::get_if<NonnegFacet>(&facet)) return tree.has_edge(nf->edge.a, nf->edge.b) ? 1 : 0;
  const auto& s = std::get<CycleFacet>(facet).set;
  int inside = 0;
  for (const auto& e : tree.edges())
    if (s.contains(e.a) && s.contains(e.b)) ++inside;
  return (s.size() - 1) - inside;
}

// ---------------------------------------------------------------------------
// Boolean matrices

class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitRow(cols)) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool at(std::size_t r, std::size_t c) const { return rows_[r].test(c); }
  void set(std::size_t r, std::size_t c) { rows_[r].set(c); }
  const BitRow& row(std::size_t r) const { return rows_[r]; }
  BitRow& row(std::size_t r) { return rows_[r]; }

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.count();
    return c;
  }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitRow> rows_;
};

/// Rows x cols, by index.
struct MatrixRectangle {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  friend auto operator<=>(const MatrixRectangle&, const MatrixRectangle&) = default;
};

inline bool is_one_rectangle(const BoolMatrix& m, const MatrixRectangle& rect) {
  for (auto r : rect.rows)
    for (auto c : rect.cols)
      if (!m.at(r, c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Support matrix

struct SupportMatrix {
  int n = 0;
  std::vector<FacetId> row_index;  // cycle rows (bitmask order), then nonneg rows
  std::uint64_t col_count = 0;     // trees, lexicographic Pruefer order
  BoolMatrix entries;
  std::vector<int> slacks;         // row-major; empty when not retained

  bool has_slacks() const { return !slacks.empty(); }
  int slack(std::size_t r, std::size_t c) const { return slacks.at(r * col_count + c); }
  Tree col_tree(std::uint64_t c) const { return tree_at(n, c); }
  std::size_t cycle_row_count() const {
    return static_cast<std::size_t>(std::count_if(row_index.begin(), row_index.end(),
                                                  [](const FacetId& f) { return std::holds_alternative<CycleFacet>(f); }));
  }

  /// Row holding `facet`, if present.
  std::optional<std::size_t> row_of(const FacetId& facet) const {
    auto it = std::find(row_index.begin(), row_index.end(), facet);
    if (it == row_index.end()) return std::nullopt;
    return static_cast<std::size_t>(it - row_index.begin());
  }

  /// Identity of shape and entries; slacks are not compared.
  friend bool operator==(const SupportMatrix& l, const SupportMatrix& r) {
    return l.n == r.n && l.row_index == r.row_index && l.col_count == r.col_count && l.entries == r.entries;
  }
};

inline std::vector<FacetId> facet_rows(int n, bool include_nonneg) {
  std::vector<FacetId> rows;
  for (auto& s : enumerate_cut_sets(n)) rows.emplace_back(CycleFacet{std::move(s)});
  if (include_nonneg)
    for (const auto& e : all_edges(n)) rows.emplace_back(NonnegFacet{e});
  return rows;
}

/// Full matrix over all facets in rows and all n^(n-2) trees in columns.
inline SupportMatrix build_support_matrix(int n, bool include_nonneg, bool allow_large = false, unsigned threads = 1) {
  check_exhaustive_cap(n, allow_large, "build_support_matrix");
  SupportMatrix m;
  m.n = n;
  m.row_index = facet_rows(n, include_nonneg);
  m.col_count = tree_count(n);
  m.entries = BoolMatrix(m.row_index.size(), m.col_count);
  m.slacks.assign(m.row_index.size() * m.col_count, 0);

  // columns are disjoint per worker; BitRow words may be shared, so bits
  // are collected per worker and merged afterwards
  const unsigned workers = resolve_threads(threads);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> ones(workers);
  parallel_slices(m.col_count, threads, [&](std::size_t begin, std::size_t end, unsigned w) {
    for (std::size_t c = begin; c < end; ++c) {
      const Tree t = tree_at(n, c);
      for (std::size_t r = 0; r < m.row_index.size(); ++r) {
        const int s = slack_value(m.row_index[r], t);
        m.slacks[r * m.col_count + c] = s;
        if (s > 0) ones[w].emplace_back(r, c);
      }
    }
  });
  for (const auto& list : ones)
    for (auto [r, c] : list) m.entries.set(r, c);
  return m;
}

// ---------------------------------------------------------------------------
// Export / import

enum class MatrixFormat { csv, binary };

inline std::string pruefer_label(const PrueferSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.entries.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(seq.entries[i]);
  }
  return out;
}

namespace detail {
inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void put_u32(std::ostream& out, std::uint32_t x) {
  std::array<char, 4> b{static_cast<char>(x & 0xff), static_cast<char>((x >> 8) & 0xff),
                        static_cast<char>((x >> 16) & 0xff), static_cast<char>((x >> 24) & 0xff)};
  out.write(b.data(), 4);
}

inline std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw std::runtime_error("STSM: truncated header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace detail

inline constexpr std::uint8_t kBinaryFormatVersion = 1;

/// Header "facet,<pruefer codes...>", then one line per facet row.
inline void export_csv(const SupportMatrix& m, std::ostream& out) {
  out << "facet";
  for (std::uint64_t c = 0; c < m.col_count; ++c) out << ',' << detail::csv_cell(pruefer_label(pruefer_at(m.n, c)));
  out << '\n';
  for (std::size_t r = 0; r < m.row_index.size(); ++r) {
    out << detail::csv_cell(to_string(m.row_index[r]));
    for (std::uint64_t c = 0; c < m.col_count; ++c) out << ',' << (m.entries.at(r, c) ? '1' : '0');
    out << '\n';
  }
  if (!out) throw std::runtime_error("export_csv: write failed");
}

/// "STSM", version byte, then n, rows, cols as little-endian u32, then each
/// row as ceil(cols/8) bytes, column j in bit (j % 8) of byte j / 8.
inline void export_binary(const SupportMatrix& m, std::ostream& out) {
  out.write("STSM", 4);
  out.put(static_cast<char>(kBinaryFormatVersion));
  detail::put_u32(out, static_cast<std::uint32_t>(m.n));
  detail::put_u32(out, static_cast<std::uint32_t>(m.row_index.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(m.col_count));
  const std::size_t row_bytes = (m.col_count + 7) / 8;
  std::vector<char> buf(row_bytes);
  for (std::size_t r = 0; r < m.row_index.size(); ++r) {
    std::fill(buf.begin(), buf.end(), 0);
    m.entries.row(r).for_each_set([&](std::size_t c) { buf[c >> 3] = static_cast<char>(buf[c >> 3] | (1 << (c & 7))); });
    out.write(buf.data(), static_cast<std::streamsize>(row_bytes));
  }
  if (!out) throw std::runtime_error("export_binary: write failed");
}

inline void export_matrix(const SupportMatrix& m, MatrixFormat format, std::ostream& out) {
  if (format == MatrixFormat::csv)
    export_csv(m, out);
  else
    export_binary(m, out);
}

/// Reads the binary form; row identities are rebuilt from n and the row
/// count. Slacks are not part of the format.
inline SupportMatrix import_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "STSM") throw std::runtime_error("STSM: bad magic");
  int version = in.get();
  if (version != kBinaryFormatVersion) throw std::runtime_error("STSM: unsupported version " + std::to_string(version));
  SupportMatrix m;
  m.n = static_cast<int>(detail::get_u32(in));
  const auto rows = detail::get_u32(in);
  m.col_count = detail::get_u32(in);
  if (m.n < 3 || m.n > kMaxEnumerationNodes) throw std::runtime_error("STSM: n out of range");
  if (m.col_count != tree_count(m.n)) throw std::runtime_error("STSM: column count does not match n");
  const auto cyc = cut_set_count(m.n);
  const auto nng = static_cast<std::uint64_t>(m.n) * static_cast<std::uint64_t>(m.n - 1) / 2;
  if (rows != cyc && rows != cyc + nng) throw std::runtime_error("STSM: row count does not match n");
  m.row_index = facet_rows(m.n, rows != cyc);
  m.entries = BoolMatrix(rows, m.col_count);
  const std::size_t row_bytes = (m.col_count + 7) / 8;
  std::vector<unsigned char> buf(row_bytes);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(row_bytes)))
      throw std::runtime_error("STSM: truncated body");
    for (std::size_t c = 0; c < m.col_count; ++c)
      if ((buf[c >> 3] >> (c & 7)) & 1) m.entries.set(r, c);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Rectangle covers

/// Caps for the exact cover: nonzero rows (subset closure is 2^rows) and ones.
inline constexpr std::size_t kExactCoverMaxRows = 20;
inline constexpr std::size_t kExactCoverMaxOnes = 256;

/// All inclusion-maximal 1-rectangles, by closing every subset of nonzero rows.
inline std::vector<MatrixRectangle> maximal_one_rectangles(const BoolMatrix& m) {
  std::vector<std::size_t> live;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (m.row(r).any()) live.push_back(r);
  if (live.size() > kExactCoverMaxRows)
    throw std::length_error("maximal_one_rectangles: " + std::to_string(live.size()) + " nonzero rows above cap " +
                            std::to_string(kExactCoverMaxRows));
  std::vector<MatrixRectangle> out;
  const std::uint64_t subsets = std::uint64_t{1} << live.size();
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    BitRow cols(m.cols());
    cols.fill();
    for (std::size_t k = 0; k < live.size(); ++k)
      if ((mask >> k) & 1) cols &= m.row(live[k]);
    if (cols.none()) continue;
    MatrixRectangle rect;
    for (auto r : live)
      if (!cols.any_outside(m.row(r))) rect.rows.push_back(r);
    cols.for_each_set([&](std::size_t c) { rect.cols.push_back(c); });
    out.push_back(std::move(rect));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct CoverResult {
  std::size_t size = 0;
  std::vector<MatrixRectangle> cover;
};

namespace detail {

struct CoverSearch {
  std::vector<BitRow> rect_entries;    // per rectangle: covered one-entries
  std::vector<BitRow> entry_rects;     // per entry: rectangles covering it
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
  std::size_t best_size = 0;

  // entries pairwise not sharing a rectangle; each needs its own rectangle
  std::size_t lower_bound(const BitRow& uncovered) const {
    BitRow blocked(rect_entries.size());
    std::size_t k = 0;
    uncovered.for_each_set([&](std::size_t e) {
      if (!entry_rects[e].intersects(blocked)) {
        ++k;
        blocked |= entry_rects[e];
      }
    });
    return k;
  }

  void run(const BitRow& uncovered) {
    if (uncovered.none()) {
      if (chosen.size() < best_size) {
        best_size = chosen.size();
        best = chosen;
      }
      return;
    }
    if (chosen.size() + lower_bound(uncovered) >= best_size) return;

    std::size_t pick = 0, fewest = SIZE_MAX;
    uncovered.for_each_set([&](std::size_t e) {
      auto c = entry_rects[e].count();
      if (c < fewest) {
        fewest = c;
        pick = e;
      }
    });
    std::vector<std::pair<std::size_t, std::size_t>> options;  // (-gain, rect)
    entry_rects[pick].for_each_set([&](std::size_t r) {
      std::size_t gain = rect_entries[r].count() - rect_entries[r].count_and_not(uncovered);
      options.emplace_back(SIZE_MAX - gain, r);
    });
    std::sort(options.begin(), options.end());
    for (auto [_, r] : options) {
      BitRow next = uncovered;
      next.and_not(rect_entries[r]);
      chosen.push_back(r);
      run(next);
      chosen.pop_back();
    }
  }
};

}  // namespace detail

/// Size `g` of a greedy max-new-coverage subcover of `rects`. Throws if the
/// rectangles leave a one-entry uncovered.
inline std::size_t greedy_rectangle_cover(const BoolMatrix& m, const std::vector<MatrixRectangle>& rects,
                                          std::vector<std::size_t>* picked = nullptr) {
  BoolMatrix left = m;
  std::size_t remaining = m.count_ones();
  std::size_t used = 0;
  std::vector<bool> taken(rects.size(), false);
  while (remaining) {
    std::size_t best = rects.size(), best_gain = 0;
    for (std::size_t i = 0; i < rects.size(); ++i) {
      if (taken[i]) continue;
      std::size_t gain = 0;
      for (auto r : rects[i].rows)
        for (auto c : rects[i].cols)
          if (left.at(r, c)) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == rects.size()) {
      for (std::size_t r = 0; r < left.rows(); ++r)
        if (left.row(r).any()) {
          std::size_t c = left.row(r).first_outside(BitRow(left.cols()));
          throw std::invalid_argument("greedy_rectangle_cover: entry (" + std::to_string(r) + "," + std::to_string(c) +
                                      ") is not covered");
        }
    }
    taken[best] = true;
    if (picked) picked->push_back(best);
    for (auto r : rects[best].rows)
      for (auto c : rects[best].cols) left.row(r).reset(c);
    remaining -= best_gain;
    ++used;
  }
  return used;
}

/// Minimum number of 1-rectangles covering every one-entry of `m`, with a
/// witness cover made of maximal rectangles. Branch and bound over the
/// maximal rectangles; only for tiny matrices (see the caps above).
inline CoverResult exact_min_rectangle_cover(const BoolMatrix& m) {
  const std::size_t ones = m.count_ones();
  if (ones == 0) return {};
  if (ones > kExactCoverMaxOnes)
    throw std::length_error("exact_min_rectangle_cover: " + std::to_string(ones) + " one-entries above cap " +
                            std::to_string(kExactCoverMaxOnes));
  auto rects = maximal_one_rectangles(m);

  std::vector<std::size_t> entry_id(m.rows() * m.cols(), SIZE_MAX);
  std::size_t e = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    m.row(r).for_each_set([&](std::size_t c) { entry_id[r * m.cols() + c] = e++; });

  detail::CoverSearch search;
  search.rect_entries.assign(rects.size(), BitRow(ones));
  search.entry_rects.assign(ones, BitRow(rects.size()));
  for (std::size_t i = 0; i < rects.size(); ++i)
    for (auto r : rects[i].rows)
      for (auto c : rects[i].cols) {
        auto id = entry_id[r * m.cols() + c];
        search.rect_entries[i].set(id);
        search.entry_rects[id].set(i);
      }

  std::vector<std::size_t> greedy;
  search.best_size = greedy_rectangle_cover(m, rects, &greedy);
  search.best = greedy;
  BitRow all(ones);
  all.fill();
  search.run(all);

  CoverResult result;
  result.size = search.best_size;
  for (auto i : search.best) result.cover.push_back(rects[i]);
  return result;
}

}  // namespace sptree
