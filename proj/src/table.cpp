#include "rowreorder/table.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace rowreorder {

namespace {

struct EncodedColumn {
  std::vector<Code> codes;
  Dictionary dictionary;
};

template <class Value, class Spell>
EncodedColumn encodeColumn(const std::vector<Value>& raw, Spell spell) {
  struct Seen {
    std::size_t first;
    std::size_t count;
  };
  std::unordered_map<Value, Seen> seen;
  seen.reserve(raw.size() / 4 + 1);
  std::vector<const Value*> distinct;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = seen.try_emplace(raw[i], Seen{i, 0});
    if (inserted) distinct.push_back(&it->first);
    ++it->second.count;
  }
  if (distinct.size() > std::numeric_limits<Code>::max()) {
    throw std::invalid_argument("column has too many distinct values for 32-bit codes");
  }
  // distinct is already in first-occurrence order; a stable sort on count
  // keeps first occurrence as the tie-breaker.
  std::stable_sort(distinct.begin(), distinct.end(), [&](const Value* a, const Value* b) {
    return seen.at(*a).count > seen.at(*b).count;
  });
  std::unordered_map<Value, Code> codeOf;
  codeOf.reserve(distinct.size());
  EncodedColumn out;
  out.dictionary.reserve(distinct.size());
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    codeOf.emplace(*distinct[k], static_cast<Code>(k));
    out.dictionary.push_back(spell(*distinct[k]));
  }
  out.codes.reserve(raw.size());
  for (const auto& v : raw) out.codes.push_back(codeOf.at(v));
  return out;
}

template <class Value, class Spell>
Table encodeAll(const std::vector<std::vector<Value>>& rawColumns, Spell spell) {
  if (rawColumns.empty()) throw std::invalid_argument("table needs at least one column");
  const std::size_t n = rawColumns.front().size();
  for (const auto& col : rawColumns) {
    if (col.size() != n) throw std::invalid_argument("ragged input: columns differ in length");
  }
  std::vector<std::vector<Code>> codes;
  std::vector<Dictionary> dicts;
  codes.reserve(rawColumns.size());
  dicts.reserve(rawColumns.size());
  for (const auto& col : rawColumns) {
    auto enc = encodeColumn(col, spell);
    codes.push_back(std::move(enc.codes));
    dicts.push_back(std::move(enc.dictionary));
  }
  return Table::fromCodes(std::move(codes), std::move(dicts));
}

}  // namespace

Table Table::fromCodes(std::vector<std::vector<Code>> columns, std::vector<Dictionary> dictionaries) {
  if (columns.empty()) throw std::invalid_argument("table needs at least one column");
  const std::size_t n = columns.front().size();
  if (n > std::numeric_limits<RowId>::max()) {
    throw std::invalid_argument("too many rows for 32-bit row ids");
  }
  if (!dictionaries.empty() && dictionaries.size() != columns.size()) {
    throw std::invalid_argument("dictionary count does not match column count");
  }
  Table t;
  t.rows_ = n;
  t.cardinalities_.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    if (col.size() != n) throw std::invalid_argument("ragged input: columns differ in length");
    std::vector<std::size_t> freq;
    for (Code v : col) {
      if (v >= freq.size()) freq.resize(static_cast<std::size_t>(v) + 1, 0);
      ++freq[v];
    }
    for (std::size_t k = 0; k < freq.size(); ++k) {
      if (freq[k] == 0) {
        throw std::invalid_argument("column " + std::to_string(c) + ": code " + std::to_string(k) +
                                    " never occurs (codes must be dense)");
      }
      if (k > 0 && freq[k] > freq[k - 1]) {
        throw std::invalid_argument("column " + std::to_string(c) +
                                    ": codes are not in non-increasing frequency order");
      }
    }
    if (!dictionaries.empty() && dictionaries[c].size() != freq.size()) {
      throw std::invalid_argument("column " + std::to_string(c) +
                                  ": dictionary size differs from cardinality");
    }
    t.cardinalities_.push_back(static_cast<std::uint32_t>(freq.size()));
  }
  t.columns_ = std::move(columns);
  t.dictionaries_ = std::move(dictionaries);
  return t;
}

std::vector<Code> Table::rowTuple(std::size_t row) const {
  std::vector<Code> out(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) out[c] = columns_[c].at(row);
  return out;
}

Table Table::permuted(std::span<const RowId> ordering) const {
  validatePermutation(ordering, rows_);
  Table t = *this;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    for (std::size_t k = 0; k < rows_; ++k) t.columns_[c][k] = columns_[c][ordering[k]];
  }
  return t;
}

Table dictionaryEncode(const std::vector<std::vector<std::string>>& rawColumns) {
  return encodeAll(rawColumns, [](const std::string& s) { return s; });
}

Table dictionaryEncode(const std::vector<std::vector<std::int64_t>>& rawColumns) {
  return encodeAll(rawColumns, [](std::int64_t v) { return std::to_string(v); });
}

Table tableFromRows(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) throw std::invalid_argument("tableFromRows needs at least one row");
  const std::size_t c = rows.front().size();
  std::vector<std::vector<std::int64_t>> cols(c, std::vector<std::int64_t>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c) throw std::invalid_argument("ragged input: rows differ in length");
    for (std::size_t j = 0; j < c; ++j) cols[j][r] = rows[r][j];
  }
  return dictionaryEncode(cols);
}

void validatePermutation(std::span<const RowId> ordering, std::size_t n) {
  if (ordering.size() != n) {
    throw std::invalid_argument("ordering has " + std::to_string(ordering.size()) +
                                " entries, table has " + std::to_string(n) + " rows");
  }
  std::vector<bool> seen(n, false);
  for (RowId r : ordering) {
    if (r >= n || seen[r]) throw std::invalid_argument("ordering is not a permutation");
    seen[r] = true;
  }
}

RowOrdering identityOrdering(std::size_t n) {
  RowOrdering out(n);
  std::iota(out.begin(), out.end(), RowId{0});
  return out;
}

RowMatrix::RowMatrix(std::size_t rows, std::size_t cols, std::vector<Code> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("row matrix size mismatch");
}

RowMatrix::RowMatrix(const Table& table)
    : rows_(table.rowCount()), cols_(table.columnCount()), data_(rows_ * cols_) {
  for (std::size_t c = 0; c < cols_; ++c) {
    auto col = table.column(c);
    for (std::size_t r = 0; r < rows_; ++r) data_[r * cols_ + c] = col[r];
  }
}

RowMatrix::RowMatrix(const Table& table, std::span<const RowId> rows)
    : rows_(rows.size()), cols_(table.columnCount()), data_(rows_ * cols_) {
  for (std::size_t c = 0; c < cols_; ++c) {
    auto col = table.column(c);
    for (std::size_t r = 0; r < rows_; ++r) data_[r * cols_ + c] = col[rows[r]];
  }
}

}  // namespace rowreorder
