#pragma once

// Reference implementations used by the tests. They are deliberately naive and
// share no code with the library beyond the Table type.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "rowreorder/table.hpp"

namespace oracle {

using Rows = std::vector<std::vector<std::int64_t>>;

inline std::uint64_t distance(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

/// Runs counted column by column as value changes plus one.
inline std::vector<std::uint64_t> runsPerColumn(const Rows& rows) {
  if (rows.empty()) return {};
  std::vector<std::uint64_t> runs(rows[0].size(), 1);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    for (std::size_t c = 0; c < runs.size(); ++c) runs[c] += rows[k][c] != rows[k - 1][c];
  }
  return runs;
}

inline std::uint64_t runs(const Rows& rows) {
  const auto per = runsPerColumn(rows);
  return std::accumulate(per.begin(), per.end(), std::uint64_t{0});
}

inline Rows rowsOf(const rowreorder::Table& t) {
  Rows out(t.rowCount(), std::vector<std::int64_t>(t.columnCount()));
  for (std::size_t r = 0; r < t.rowCount(); ++r) {
    for (std::size_t c = 0; c < t.columnCount(); ++c) out[r][c] = t.at(r, c);
  }
  return out;
}

inline Rows permute(const Rows& rows, const std::vector<std::uint32_t>& order) {
  Rows out;
  for (auto r : order) out.push_back(rows[r]);
  return out;
}

inline std::uint64_t pathCost(const Rows& rows, const std::vector<std::uint32_t>& order) {
  std::uint64_t cost = 0;
  for (std::size_t k = 1; k < order.size(); ++k) cost += distance(rows[order[k - 1]], rows[order[k]]);
  return cost;
}

/// Cheapest open path over all rows by enumerating permutations. With `first`
/// and `last` set, only paths with those endpoints count.
inline std::uint64_t bestPathCost(const Rows& rows, std::optional<std::uint32_t> first = {},
                                  std::optional<std::uint32_t> last = {}) {
  std::vector<std::uint32_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0u);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    if (first && order.front() != *first) continue;
    if (last && order.back() != *last) continue;
    best = std::min(best, pathCost(rows, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

inline bool isPermutation(const std::vector<std::uint32_t>& order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (auto r : order) {
    if (r >= n || seen[r]) return false;
    seen[r] = 1;
  }
  return true;
}

/// True when equal rows sit in one contiguous stretch of the ordering.
inline bool duplicatesConsecutive(const Rows& rows, const std::vector<std::uint32_t>& order) {
  std::set<std::vector<std::int64_t>> closed;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& row = rows[order[k]];
    if (closed.count(row)) return false;
    if (k + 1 == order.size() || rows[order[k + 1]] != row) closed.insert(row);
  }
  return true;
}

inline std::size_t distinctCount(const Rows& rows) {
  return std::set<std::vector<std::int64_t>>(rows.begin(), rows.end()).size();
}

/// Distinct rows of the table restricted to the first j columns of `columnOrder`, for j = 1..c.
inline std::vector<std::uint64_t> prefixDistinct(const Rows& rows, const std::vector<std::uint32_t>& columnOrder) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 1; j <= columnOrder.size(); ++j) {
    std::set<std::vector<std::int64_t>> seen;
    for (const auto& r : rows) {
      std::vector<std::int64_t> key;
      for (std::size_t k = 0; k < j; ++k) key.push_back(r[columnOrder[k]]);
      seen.insert(key);
    }
    out.push_back(seen.size());
  }
  return out;
}

/// Column values as a random table of `rows` x `cols` with values in [0, maxValue).
inline Rows randomRows(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::int64_t maxValue) {
  std::uniform_int_distribution<std::int64_t> v(0, maxValue - 1);
  Rows out(rows, std::vector<std::int64_t>(cols));
  for (auto& r : out)
    for (auto& x : r) x = v(rng);
  return out;
}

/// Bits appended one at a time; the size is simply the count.
class BitSink {
 public:
  void put(std::uint64_t value, unsigned width) {
    for (unsigned b = 0; b < width; ++b) bits_.push_back((value >> b) & 1u);
  }
  std::uint64_t size() const { return bits_.size(); }

 private:
  std::vector<bool> bits_;
};

inline unsigned ceilLog2(std::uint64_t n) {
  unsigned w = 0;
  while ((std::uint64_t{1} << w) < n) ++w;
  return w;
}

inline std::uint64_t rleBits(const std::vector<std::uint32_t>& col, std::uint64_t card) {
  BitSink s;
  const unsigned wv = ceilLog2(card), wn = ceilLog2(col.size());
  for (std::size_t i = 0; i < col.size();) {
    std::size_t j = i;
    while (j < col.size() && col[j] == col[i]) ++j;
    s.put(col[i], wv);
    s.put(i, wn);
    s.put(j - i, wn);
    i = j;
  }
  return s.size();
}

/// Leading-run count, the repeated value, then every remaining value.
inline std::uint64_t prefixBits(const std::vector<std::uint32_t>& block, std::uint64_t card) {
  if (block.empty()) return 0;
  BitSink s;
  std::size_t lead = 1;
  while (lead < block.size() && block[lead] == block[0]) ++lead;
  s.put(lead, ceilLog2(block.size()));
  s.put(block[0], ceilLog2(card));
  for (std::size_t i = lead; i < block.size(); ++i) s.put(block[i], ceilLog2(card));
  return s.size();
}

/// Bitmap of positions holding the most frequent value, that value, then the others.
inline std::uint64_t sparseBits(const std::vector<std::uint32_t>& block, std::uint64_t card) {
  if (block.empty()) return 0;
  std::map<std::uint32_t, std::size_t> freq;
  for (auto v : block) ++freq[v];
  std::uint32_t top = block[0];
  std::size_t best = 0;
  for (auto [v, f] : freq) {
    if (f > best) {
      best = f;
      top = v;
    }
  }
  BitSink s;
  for (auto v : block) s.put(v == top, 1);
  s.put(top, ceilLog2(card));
  for (auto v : block)
    if (v != top) s.put(v, ceilLog2(card));
  return s.size();
}

/// 8-bit distinct count, the local dictionary, then local indexes.
inline std::uint64_t indirectBits(const std::vector<std::uint32_t>& block, std::uint64_t card) {
  if (block.empty()) return 0;
  std::vector<std::uint32_t> local(block.begin(), block.end());
  std::sort(local.begin(), local.end());
  local.erase(std::unique(local.begin(), local.end()), local.end());
  BitSink s;
  s.put(local.size() - 1, 8);
  for (auto v : local) s.put(v, ceilLog2(card));
  for (auto v : block) {
    const auto idx = std::lower_bound(local.begin(), local.end(), v) - local.begin();
    s.put(static_cast<std::uint64_t>(idx), ceilLog2(local.size()));
  }
  return s.size();
}

}  // namespace oracle
