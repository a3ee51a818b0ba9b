#include "rowreorder/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "rowreorder/kernels.hpp"

namespace rowreorder {

namespace {

// Refines per-row prefix ids by one more column. Ids are dense and numbered
// by first occurrence; returns the number of distinct ids.
template <class ValueAt>
std::uint64_t refinePrefixIds(std::vector<std::uint32_t>& ids, ValueAt valueAt) {
  std::unordered_map<std::uint64_t, std::uint32_t> next;
  next.reserve(ids.size() / 2 + 1);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const std::uint64_t key = (static_cast<std::uint64_t>(ids[r]) << 32) | valueAt(r);
    auto [it, inserted] = next.try_emplace(key, static_cast<std::uint32_t>(next.size()));
    ids[r] = it->second;
  }
  return next.size();
}

}  // namespace

unsigned hamming(std::span<const Code> a, std::span<const Code> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: tuple lengths differ");
  return hammingUnchecked(a, b);
}

RunCountResult runCount(const Table& table, std::span<const RowId> ordering) {
  validatePermutation(ordering, table.rowCount());
  RunCountResult out;
  out.perColumn = kernels::parallel::columnRuns(table, ordering);
  out.total = std::accumulate(out.perColumn.begin(), out.perColumn.end(), std::uint64_t{0});
  return out;
}

std::uint64_t pathCost(const RowMatrix& rows, std::span<const RowId> path) {
  std::uint64_t cost = 0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    cost += hammingUnchecked(rows.row(path[k - 1]), rows.row(path[k]));
  }
  return cost;
}

std::uint64_t pathRunCount(const RowMatrix& rows, std::span<const RowId> path) {
  if (path.empty()) return 0;
  return rows.columnCount() + pathCost(rows, path);
}

ColumnStats computeColumnStats(const Table& table, std::span<const std::uint32_t> columnOrder) {
  ColumnStats s;
  s.rowCount = table.rowCount();
  if (columnOrder.empty()) {
    s.columnOrder = columnOrderByCardinality(table);
  } else {
    if (columnOrder.size() != table.columnCount()) {
      throw std::invalid_argument("column order length differs from column count");
    }
    s.columnOrder.assign(columnOrder.begin(), columnOrder.end());
  }
  s.histograms = kernels::parallel::histograms(table);
  s.prefixDistinct.assign(table.columnCount(), 0);
  if (table.rowCount() == 0) return s;

  std::vector<std::uint32_t> ids(table.rowCount(), 0);
  for (std::size_t j = 0; j < s.columnOrder.size(); ++j) {
    auto col = table.column(s.columnOrder[j]);
    s.prefixDistinct[j] = refinePrefixIds(ids, [&](std::size_t r) { return col[r]; });
  }
  s.distinctRows = s.prefixDistinct.back();
  return s;
}

Ratio omegaBound(const ColumnStats& stats) {
  if (stats.distinctRows == 0) throw std::invalid_argument("omegaBound: table has no rows");
  const std::uint64_t c = stats.prefixDistinct.size();
  const std::uint64_t sum =
      std::accumulate(stats.prefixDistinct.begin(), stats.prefixDistinct.end(), std::uint64_t{0});
  return {sum, stats.distinctRows + c - 1};
}

Ratio muBound(std::uint64_t distinctRows, std::span<const std::uint64_t> cardinalities) {
  if (cardinalities.empty()) throw std::invalid_argument("muBound: no cardinalities");
  if (distinctRows == 0) throw std::invalid_argument("muBound: no rows");
  std::uint64_t sum = 0;
  unsigned __int128 prod = 1;
  for (std::uint64_t card : cardinalities) {
    if (card == 0) throw std::invalid_argument("muBound: cardinality must be positive");
    prod = std::min<unsigned __int128>(prod * card, distinctRows);
    sum += static_cast<std::uint64_t>(prod);
  }
  return {sum, distinctRows + cardinalities.size() - 1};
}

Ratio dispersionP0(const Table& table) {
  if (table.rowCount() == 0) throw std::invalid_argument("dispersionP0: table has no rows");
  const auto hist = kernels::parallel::histograms(table);
  std::uint64_t sum = 0;
  for (const auto& h : hist) sum += *std::max_element(h.begin(), h.end());
  return {sum, static_cast<std::uint64_t>(table.rowCount()) * table.columnCount()};
}

std::vector<std::uint32_t> columnOrderByCardinality(std::span<const std::uint32_t> cardinalities) {
  std::vector<std::uint32_t> order(cardinalities.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return cardinalities[a] < cardinalities[b];
  });
  return order;
}

std::vector<std::uint32_t> columnOrderByCardinality(const Table& table) {
  return columnOrderByCardinality(table.cardinalities());
}

std::vector<std::uint32_t> groupIdenticalRows(const RowMatrix& rows) {
  std::vector<std::uint32_t> ids(rows.rowCount(), 0);
  for (std::size_t j = 0; j < rows.columnCount(); ++j) {
    refinePrefixIds(ids, [&](std::size_t r) { return rows.row(r)[j]; });
  }
  return ids;
}

RowOrdering discriminatingOrder(const Table& table, std::uint64_t seed) {
  const auto ids = groupIdenticalRows(RowMatrix(table));
  const std::uint32_t groups = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;

  std::vector<std::uint32_t> rank(groups);
  std::iota(rank.begin(), rank.end(), 0U);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(rank.begin(), rank.end(), rng);
  }
  // Counting sort of rows by the rank of their group; stable within a group.
  std::vector<std::size_t> start(groups + 1, 0);
  for (auto g : ids) ++start[rank[g] + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  RowOrdering out(ids.size());
  for (std::size_t r = 0; r < ids.size(); ++r) out[start[rank[ids[r]]]++] = static_cast<RowId>(r);
  return out;
}

}  // namespace rowreorder
