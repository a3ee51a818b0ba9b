#pragma once

// Tour-improvement operators. Each takes an ordering of the rows of `rows`
// and returns one whose path cost is no larger; moves are applied only when
// they strictly reduce the cost.

#include <cstddef>
#include <span>
#include <string_view>

#include "rowreorder/table.hpp"

namespace rowreorder {

enum class ImproveMethod { reinsert, ahdo, peephole };

/// CLI spellings: reinsert, ahdo, peephole.
std::string_view toString(ImproveMethod m);
ImproveMethod parseImproveMethod(std::string_view name);

/// One pass over the rows in their input order: each row is removed and put
/// back at the cheapest position if that beats where it was. Quadratic; gated
/// like the construction heuristics unless `force`.
RowOrdering improveOneReinsertion(const RowMatrix& rows, std::span<const RowId> ordering, bool force = false);

/// Swaps adjacent rows while some swap reduces the cost.
RowOrdering improveAHDO(const RowMatrix& rows, std::span<const RowId> ordering);

/// Splits the ordering into consecutive blocks of `blockSize` rows and
/// replaces each block interior by an optimal path between the block's fixed
/// first and last rows. Throws std::invalid_argument unless 3 <= blockSize <= 12.
RowOrdering improvePeephole(const RowMatrix& rows, std::span<const RowId> ordering, std::size_t blockSize = 8);

}  // namespace rowreorder
