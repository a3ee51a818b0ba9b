#include "rowreorder/multilist.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rowreorder/comparators.hpp"
#include "rowreorder/sorting.hpp"

namespace rowreorder {

MultiListIndex::MultiListIndex(const RowMatrix& rows, const std::vector<std::vector<std::uint32_t>>& columnOrders,
                               std::vector<std::uint32_t> multiplicities)
    : live_(rows.rowCount(), 1), multiplicity_(std::move(multiplicities)), liveCount_(rows.rowCount()) {
  const std::size_t n = rows.rowCount();
  if (columnOrders.empty()) throw std::invalid_argument("MultiListIndex: no column orders");
  if (multiplicity_.empty()) multiplicity_.assign(n, 1);
  if (multiplicity_.size() != n) throw std::invalid_argument("MultiListIndex: multiplicity count differs from rows");

  const std::size_t k = columnOrders.size();
  heads_.assign(k, kNoRow);
  prev_.assign(k * n, kNoRow);
  next_.assign(k * n, kNoRow);
  std::vector<RowId> order(n);
  for (std::size_t list = 0; list < k; ++list) {
    std::iota(order.begin(), order.end(), RowId{0});
    sortRowIds(rows, order, RowComparator::lexicographic(columnOrders[list]));
    if (n == 0) continue;
    heads_[list] = order.front();
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) prev_[list * n + order[i]] = order[i - 1];
      if (i + 1 < n) next_[list * n + order[i]] = order[i + 1];
    }
  }
}

void MultiListIndex::remove(RowId r) {
  if (!live(r)) throw std::logic_error("MultiListIndex: row already removed");
  const std::size_t n = live_.size();
  for (std::size_t list = 0; list < heads_.size(); ++list) {
    const RowId p = prev_[list * n + r];
    const RowId s = next_[list * n + r];
    if (p != kNoRow) {
      next_[list * n + p] = s;
    } else {
      heads_[list] = s;
    }
    if (s != kNoRow) prev_[list * n + s] = p;
  }
  live_[r] = 0;
  --liveCount_;
}

std::vector<RowId> MultiListIndex::enumerate(std::size_t list) const {
  std::vector<RowId> out;
  out.reserve(liveCount_);
  for (RowId r = heads_.at(list); r != kNoRow; r = successor(list, r)) out.push_back(r);
  return out;
}

std::vector<std::vector<std::uint32_t>> rotatedColumnOrders(std::span<const std::uint32_t> base, std::size_t k) {
  std::vector<std::vector<std::uint32_t>> orders;
  std::vector<std::uint32_t> current(base.begin(), base.end());
  for (std::size_t i = 0; i < k; ++i) {
    orders.push_back(current);
    if (!current.empty()) std::rotate(current.rbegin(), current.rbegin() + 1, current.rend());
  }
  return orders;
}

}  // namespace rowreorder
