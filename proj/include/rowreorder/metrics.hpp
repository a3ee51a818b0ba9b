#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder {

/// Exact non-negative rational, kept unreduced; comparisons cross-multiply.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den <=>
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// Number of positions where the two tuples differ.
/// Throws std::invalid_argument when the lengths differ.
unsigned hamming(std::span<const Code> a, std::span<const Code> b);

/// Hamming distance without the length check; both spans must have equal size.
inline unsigned hammingUnchecked(std::span<const Code> a, std::span<const Code> b) noexcept {
  unsigned d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

struct RunCountResult {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> perColumn;
};

/// Runs per column of `table` listed in `ordering` (validated as a permutation).
/// An empty table has zero runs in every column.
RunCountResult runCount(const Table& table, std::span<const RowId> ordering);

/// Sum of Hamming distances between consecutive rows of `path`.
std::uint64_t pathCost(const RowMatrix& rows, std::span<const RowId> path);

/// RunCount of the rows of `rows` visited in `path` order: c + pathCost, or 0 when empty.
std::uint64_t pathRunCount(const RowMatrix& rows, std::span<const RowId> path);

/// Per-column histograms and prefix-distinct counts under a column order.
struct ColumnStats {
  std::uint64_t rowCount = 0;
  std::vector<std::uint32_t> columnOrder;
  /// histograms[i][v] = occurrences of code v in column i (native column index).
  std::vector<std::vector<std::uint64_t>> histograms;
  /// prefixDistinct[j] = distinct rows restricted to the first j+1 columns of columnOrder.
  std::vector<std::uint64_t> prefixDistinct;
  std::uint64_t distinctRows = 0;
};

/// Computes stats; an empty `columnOrder` means the cardinality order of
/// columnOrderByCardinality. Distinct counts are exact.
ColumnStats computeColumnStats(const Table& table, std::span<const std::uint32_t> columnOrder = {});

/// Optimality factor of lexicographic sorting: sum of prefix-distinct counts over
/// (n + c - 1) with n the distinct row count. Throws when n = 0.
Ratio omegaBound(const ColumnStats& stats);

/// Cardinality-only bound: sum_j min(n, prod_{k<=j} N_k) / (n + c - 1).
/// Throws on an empty cardinality list or n = 0.
Ratio muBound(std::uint64_t distinctRows, std::span<const std::uint64_t> cardinalities);

/// Mean relative frequency of each column's most frequent value. Throws on empty table.
Ratio dispersionP0(const Table& table);

/// Column permutation sorting cardinalities non-decreasingly (stable).
std::vector<std::uint32_t> columnOrderByCardinality(std::span<const std::uint32_t> cardinalities);
std::vector<std::uint32_t> columnOrderByCardinality(const Table& table);

/// Dense ids of identical rows, numbered by first occurrence.
std::vector<std::uint32_t> groupIdenticalRows(const RowMatrix& rows);

/// Ordering where identical rows are consecutive. Groups appear in
/// first-occurrence order for seed 0 and in a seeded shuffle otherwise.
RowOrdering discriminatingOrder(const Table& table, std::uint64_t seed = 0);

}  // namespace rowreorder
