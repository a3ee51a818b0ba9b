#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder {

inline constexpr RowId kNoRow = std::numeric_limits<RowId>::max();

/// K lexicographic orders of the same rows kept as doubly linked lists, so
/// that removing a row unlinks it from every order in O(K).
///
/// Not safe for concurrent mutation; confine an index to one worker.
class MultiListIndex {
 public:
  /// Sorts `rows` lexicographically once per entry of `columnOrders`.
  /// `multiplicities` (optional) records how many table rows each row stands for.
  MultiListIndex(const RowMatrix& rows, const std::vector<std::vector<std::uint32_t>>& columnOrders,
                 std::vector<std::uint32_t> multiplicities = {});

  std::size_t listCount() const noexcept { return heads_.size(); }
  std::size_t rowCount() const noexcept { return live_.size(); }
  std::size_t liveCount() const noexcept { return liveCount_; }
  bool live(RowId r) const { return live_.at(r) != 0; }
  std::uint32_t multiplicity(RowId r) const { return multiplicity_.at(r); }

  RowId predecessor(std::size_t list, RowId r) const { return prev_[list * live_.size() + r]; }
  RowId successor(std::size_t list, RowId r) const { return next_[list * live_.size() + r]; }

  /// Unlinks `r` from every list. Its own links are kept, so they still name
  /// its former neighbours. Throws std::logic_error if `r` is not live.
  void remove(RowId r);

  /// Live rows of `list` in order.
  std::vector<RowId> enumerate(std::size_t list) const;

 private:
  std::vector<RowId> heads_;
  std::vector<RowId> prev_;
  std::vector<RowId> next_;
  std::vector<std::uint8_t> live_;
  std::vector<std::uint32_t> multiplicity_;
  std::size_t liveCount_ = 0;
};

/// The K column orders used by Multiple Lists: `base` followed by its cyclic
/// rotations 1..c -> c,1,..,c-1, repeated K-1 times.
std::vector<std::vector<std::uint32_t>> rotatedColumnOrders(std::span<const std::uint32_t> base, std::size_t k);

}  // namespace rowreorder
