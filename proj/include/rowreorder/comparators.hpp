#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder {

// Tuple comparators. `columnOrder` lists native column indices from most to
// least significant; an empty span means native order. Components are 0-based
// codes; the 1-based values used in figures are codes + 1, which leaves every
// comparator's result unchanged.

/// Lexicographic order: the first differing component decides.
std::strong_ordering compareLexicographic(std::span<const Code> x, std::span<const Code> y,
                                          std::span<const std::uint32_t> columnOrder = {});

/// Mixed-radix reflected Gray-code order. At the first differing position j
/// the comparison ascends when sum_{i<j} x_i is even and descends otherwise.
std::strong_ordering compareReflectedGC(std::span<const Code> x, std::span<const Code> y,
                                        std::span<const std::uint32_t> columnOrder = {});

/// Vortex order. Each tuple becomes its (value, position) pairs sorted
/// lexicographically; the two pair lists are then compared under the
/// alternating rule: at the first differing pair (1-based index i) x precedes y
/// iff (pair_x < pair_y) xor (i is even).
std::strong_ordering compareVortex(std::span<const Code> x, std::span<const Code> y,
                                   std::span<const std::uint32_t> columnOrder = {});

/// Per-column value frequencies: frequencies[col][code].
using ColumnFrequencies = std::vector<std::vector<std::uint64_t>>;

/// Frequent-Component order. Each component becomes (frequency, position,
/// value); the triples of a tuple are arranged in reverse lexicographic order
/// (most frequent first) and the two triple lists are compared lexicographically.
std::strong_ordering compareFrequentComponent(std::span<const Code> x, std::span<const Code> y,
                                              const ColumnFrequencies& frequencies,
                                              std::span<const std::uint32_t> columnOrder = {});

enum class OrderKind { lexicographic, reflectedGC, vortex, frequentComponent };

std::string_view toString(OrderKind kind);
/// Parses the CLI spelling: lex, gray, vortex, fc. Throws std::invalid_argument.
OrderKind parseOrderKind(std::string_view name);

/// How the column order of a table-bound comparator is chosen.
enum class ColumnOrderPolicy { byCardinality, natural };

/// A pure, copyable total order on rows. Safe for concurrent use.
class RowComparator {
 public:
  static RowComparator lexicographic(std::vector<std::uint32_t> columnOrder = {});
  static RowComparator reflectedGC(std::vector<std::uint32_t> columnOrder = {});
  static RowComparator vortex(std::vector<std::uint32_t> columnOrder = {});
  static RowComparator frequentComponent(ColumnFrequencies frequencies,
                                         std::vector<std::uint32_t> columnOrder = {});

  /// Comparator of `kind` bound to `table`: the column order follows `policy`
  /// and Frequent-Component uses the table's histograms.
  static RowComparator forTable(OrderKind kind, const Table& table,
                                ColumnOrderPolicy policy = ColumnOrderPolicy::byCardinality);

  OrderKind kind() const noexcept { return kind_; }
  const std::vector<std::uint32_t>& columnOrder() const noexcept { return columnOrder_; }

  std::strong_ordering operator()(std::span<const Code> x, std::span<const Code> y) const;
  bool less(std::span<const Code> x, std::span<const Code> y) const { return (*this)(x, y) < 0; }

 private:
  RowComparator(OrderKind kind, std::vector<std::uint32_t> order, ColumnFrequencies freqs)
      : kind_(kind), columnOrder_(std::move(order)), frequencies_(std::move(freqs)) {}

  OrderKind kind_;
  std::vector<std::uint32_t> columnOrder_;
  ColumnFrequencies frequencies_;
};

/// Table re-encoded so that each column's codes are ranks by non-increasing
/// frequency (rank 0 = most frequent, ties by first occurrence).
struct NormalizedTable {
  Table table;
  /// inverse[col][rank] = code in the original table.
  std::vector<std::vector<Code>> inverse;
};

NormalizedTable normalizeByFrequency(const Table& table);

}  // namespace rowreorder
