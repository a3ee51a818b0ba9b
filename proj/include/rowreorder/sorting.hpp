#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>

#include "rowreorder/comparators.hpp"
#include "rowreorder/table.hpp"

namespace rowreorder {

/// Environment variable naming the directory for sort spill files.
inline constexpr const char* kSpillDirEnv = "ROWREORDER_TMPDIR";

struct SortOptions {
  /// Bytes of row data (codes plus a row id) held in memory at once. Tables
  /// larger than this are sorted externally.
  std::size_t memoryBudgetBytes = std::numeric_limits<std::size_t>::max();
  /// Spill directory; empty means $ROWREORDER_TMPDIR, then the system temp dir.
  std::filesystem::path spillDirectory;
  /// Runs merged per pass. More runs than this trigger intermediate merges.
  std::size_t maxFanIn = 1024;
};

/// Stable sort of the table's rows (ties keep row-id order, so identical rows
/// end up adjacent). The external path writes sorted runs to spill files and
/// merges them with a priority queue; it returns exactly what the in-memory
/// path returns. Throws SpillError on I/O failure; spill files are removed.
RowOrdering sortRows(const Table& table, const RowComparator& comparator,
                     const SortOptions& options = {});

/// In-memory stable sort of a subset of rows of `rows`.
void sortRowIds(const RowMatrix& rows, std::span<RowId> ids, const RowComparator& comparator);

struct OrderOptions {
  ColumnOrderPolicy columnOrder = ColumnOrderPolicy::byCardinality;
  /// Vortex only: rank-normalize codes by frequency before sorting.
  bool normalize = true;
  SortOptions sort;
};

/// Sorts the table's rows by the comparator of `kind` bound to the table.
RowOrdering orderRows(const Table& table, OrderKind kind, const OrderOptions& options = {});

/// Rows that fit in `memoryBudgetBytes` for a table with `columns` columns (at least 1).
std::size_t rowsPerRun(std::size_t memoryBudgetBytes, std::size_t columns);

}  // namespace rowreorder
