#pragma once

// Tour-construction heuristics for the open-path problem under Hamming
// distance. All of them work on a row-major matrix (a whole table or one
// partition), return a permutation of its row indices and place identical
// rows consecutively: rows are deduplicated first and every group is expanded
// in row-index order at the end.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder {

/// Row count above which the quadratic heuristics refuse to run unless forced.
inline constexpr std::size_t kQuadraticRowLimit = std::size_t{1} << 20;

enum class Heuristic {
  nearestNeighbor,
  multipleLists,
  multipleFragment,
  savings,
  insertNearest,
  insertFarthest,
  insertRandom,
};

/// CLI spellings: nn, ml, mf, savings, ins-near, ins-far, ins-rand.
std::string_view toString(Heuristic h);
Heuristic parseHeuristic(std::string_view name);
/// True for heuristics whose running time is quadratic in the row count.
bool isQuadratic(Heuristic h);

struct HeuristicOptions {
  std::uint64_t seed = 0;
  /// Start row; when unset a seeded random row is used.
  std::optional<RowId> startRow;
  /// Lifts the kQuadraticRowLimit gate.
  bool force = false;
  /// Multiple Lists: number of sorted lists, 0 means one per column.
  std::size_t lists = 0;
  /// Multiple Lists: base column order; empty means non-decreasing distinct
  /// count of the rows' columns.
  std::vector<std::uint32_t> columnOrder;
};

/// Identical rows collapsed to one representative each.
struct DistinctRows {
  RowMatrix rows;
  /// members[g] = original row indices of group g, ascending.
  std::vector<std::vector<RowId>> members;
  /// groupOf[r] = group of original row r.
  std::vector<std::uint32_t> groupOf;
};

DistinctRows deduplicate(const RowMatrix& rows);

/// Expands an ordering of groups into an ordering of the original rows.
RowOrdering expandGroups(const DistinctRows& distinct, std::span<const RowId> groupOrder);

/// Appends a row nearest to the last appended one (ties: lowest index).
RowOrdering nearestNeighbor(const RowMatrix& rows, const HeuristicOptions& options = {});

/// Multiple Lists: like nearest neighbour, but only the neighbours of the last
/// row in K sorted lists are candidates (ties: first list, predecessor first).
/// Throws std::invalid_argument unless 1 <= K <= c.
RowOrdering multipleLists(const RowMatrix& rows, const HeuristicOptions& options = {});

/// Multiple Lists over caller-supplied column orders (e.g. all c! of them).
RowOrdering multipleListsWithOrders(const RowMatrix& rows,
                                    const std::vector<std::vector<std::uint32_t>>& columnOrders,
                                    const HeuristicOptions& options = {});

/// Greedy fragment merging in passes h = 0..c; pairs are scanned in row order.
RowOrdering multipleFragment(const RowMatrix& rows, const HeuristicOptions& options = {});

/// Clarke-Wright savings with a hub at distance c from every row: endpoint
/// merges in non-increasing saving 2c - d, equal savings in seeded random order.
RowOrdering savings(const RowMatrix& rows, const HeuristicOptions& options = {});

enum class InsertionStrategy { nearest, farthest, random };

/// Grows a path from the start row, inserting the selected row where it
/// increases the path cost least (ties: earliest position).
RowOrdering insertion(const RowMatrix& rows, InsertionStrategy strategy, const HeuristicOptions& options = {});

/// Runs `h` on `rows`. Throws HeuristicGateError for a quadratic heuristic on
/// more than kQuadraticRowLimit rows unless options.force is set.
RowOrdering runHeuristic(Heuristic h, const RowMatrix& rows, const HeuristicOptions& options = {});

/// Throws HeuristicGateError when `rowCount` exceeds the quadratic gate.
void checkQuadraticGate(std::string_view name, std::size_t rowCount, bool force);

}  // namespace rowreorder
