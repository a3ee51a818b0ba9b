#pragma once

// Horizontal partitioning: order the table with a cheap base order, cut the
// result into fixed-size partitions and run an in-memory heuristic on each.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rowreorder/comparators.hpp"
#include "rowreorder/heuristics.hpp"
#include "rowreorder/sorting.hpp"
#include "rowreorder/table.hpp"

namespace rowreorder {

inline constexpr std::size_t kDefaultPartitionSize = 131072;

struct PartitionPlan {
  std::size_t partitionSize = kDefaultPartitionSize;
  /// Base order used when baseOrdering is unset.
  OrderKind baseOrder = OrderKind::lexicographic;
  OrderOptions baseOrderOptions;
  /// Explicit base ordering (must be a permutation of the table's rows).
  std::optional<RowOrdering> baseOrdering;

  Heuristic heuristic = Heuristic::multipleLists;
  /// Seed, force, list count and column order for the heuristic. startRow is ignored.
  HeuristicOptions heuristicOptions;

  /// Keep a partition's base order when the heuristic does not help, and
  /// never let the total RunCount exceed that of the base ordering.
  bool revertIfWorse = true;
  /// Start each partition from its row nearest the previous partition's last
  /// base-order row.
  bool boundaryAware = false;
  /// 2 adds a second pass over partitions shifted by half a partition.
  unsigned passes = 1;
  /// OpenMP worker cap; 0 keeps the current setting.
  int threads = 0;
};

/// One finished partition. RunCounts are those of the partition on its own
/// (c + internal path cost); cumulative fields add up all records so far.
struct PartitionRecord {
  unsigned pass = 0;
  std::size_t index = 0;
  std::size_t rows = 0;
  std::uint64_t runCountBefore = 0;
  std::uint64_t runCountAfter = 0;
  double elapsedMs = 0;
  bool reverted = false;
  std::string error;
  std::uint64_t cumulativeBefore = 0;
  std::uint64_t cumulativeAfter = 0;
  /// RLE size estimate (bits) over the partitions so far, before and after.
  std::uint64_t cumulativeRleBitsBefore = 0;
  std::uint64_t cumulativeRleBitsAfter = 0;
};

/// Receives records in partition order; returning false stops the run. The
/// partitions already reported keep their result, the rest keep the base order.
using ProgressSink = std::function<bool(const PartitionRecord&)>;

struct PartitionResult {
  RowOrdering ordering;
  RowOrdering baseOrdering;
  std::uint64_t baseRunCount = 0;
  std::uint64_t runCount = 0;
  double sortMs = 0;
  double heuristicMs = 0;
  bool aborted = false;
  std::vector<PartitionRecord> records;
};

/// Throws std::invalid_argument on a zero partition size, a pass count other
/// than 1 or 2, or an invalid base ordering. Heuristic failures inside a
/// partition revert that partition and are reported in its record.
PartitionResult applyPartitioned(const Table& table, const PartitionPlan& plan, const ProgressSink& sink = {});

}  // namespace rowreorder
