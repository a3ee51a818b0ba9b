#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rowreorder {

/// Dense dictionary code of one column value. Code 0 is the most frequent value.
using Code = std::uint32_t;
/// Index of a row in a table (or in a partition-local row matrix).
using RowId = std::uint32_t;
/// A permutation of row indices: position k holds the row placed k-th.
using RowOrdering = std::vector<RowId>;
/// Original values of one column, indexed by code.
using Dictionary = std::vector<std::string>;

/// Column-major table of dictionary codes.
///
/// Invariants, checked on construction:
///  - every code of column i lies in [0, N_i) and every value of [0, N_i) occurs;
///  - codes are frequency ordered: freq(k) >= freq(k + 1);
///  - all columns have the same length and there is at least one column.
///
/// Tables are immutable once built and safe to share across threads.
class Table {
 public:
  Table() = default;

  /// Builds a table from already-encoded columns. Throws std::invalid_argument
  /// if any invariant is violated. `dictionaries` is either empty or holds one
  /// dictionary per column whose size equals that column's cardinality.
  static Table fromCodes(std::vector<std::vector<Code>> columns,
                         std::vector<Dictionary> dictionaries = {});

  std::size_t rowCount() const noexcept { return rows_; }
  std::size_t columnCount() const noexcept { return columns_.size(); }

  std::span<const Code> column(std::size_t col) const { return columns_.at(col); }
  Code at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

  std::uint32_t cardinality(std::size_t col) const { return cardinalities_.at(col); }
  const std::vector<std::uint32_t>& cardinalities() const noexcept { return cardinalities_; }

  bool hasDictionaries() const noexcept { return !dictionaries_.empty(); }
  const Dictionary& dictionary(std::size_t col) const { return dictionaries_.at(col); }
  const std::vector<Dictionary>& dictionaries() const noexcept { return dictionaries_; }

  /// Row `row` as a tuple of codes, in native column order.
  std::vector<Code> rowTuple(std::size_t row) const;

  /// New table whose k-th row is row `ordering[k]` of this one.
  Table permuted(std::span<const RowId> ordering) const;

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<Code>> columns_;
  std::vector<std::uint32_t> cardinalities_;
  std::vector<Dictionary> dictionaries_;
};

/// Encodes raw columns by decreasing frequency (code 0 = most frequent, ties
/// by first occurrence). Throws std::invalid_argument on ragged input or when
/// there are no columns.
Table dictionaryEncode(const std::vector<std::vector<std::string>>& rawColumns);

/// Integer-valued convenience overload; dictionaries hold the decimal spelling.
Table dictionaryEncode(const std::vector<std::vector<std::int64_t>>& rawColumns);

/// Builds a table from row tuples of integers (row-major input).
Table tableFromRows(const std::vector<std::vector<std::int64_t>>& rows);

/// Throws std::invalid_argument unless `ordering` is a bijection on [0, n).
void validatePermutation(std::span<const RowId> ordering, std::size_t n);

/// The identity ordering 0, 1, ..., n-1.
RowOrdering identityOrdering(std::size_t n);

/// Row-major copy of a table's codes, for algorithms that compare whole rows.
class RowMatrix {
 public:
  RowMatrix() = default;
  RowMatrix(std::size_t rows, std::size_t cols, std::vector<Code> data);
  explicit RowMatrix(const Table& table);

  /// Copies the listed rows of `table` (local row k is table row rows[k]).
  RowMatrix(const Table& table, std::span<const RowId> rows);

  std::size_t rowCount() const noexcept { return rows_; }
  std::size_t columnCount() const noexcept { return cols_; }

  std::span<const Code> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Code> data_;
};

}  // namespace rowreorder
