#pragma once

// On-disk formats.
//
// Columnar file (little-endian):
//   "RFRG" | version u32 | n u64 | c u32 | c x cardinality u64
//   | c column blocks of n u32 codes
//   | optional dictionary section: per column, count u64 then count strings,
//     each a u32 byte length followed by UTF-8 bytes, in code order.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder {

inline constexpr char kColumnarMagic[4] = {'R', 'F', 'R', 'G'};
inline constexpr std::uint32_t kColumnarVersion = 1;

struct ColumnarHeader {
  std::uint32_t version = kColumnarVersion;
  std::uint64_t rows = 0;
  std::vector<std::uint64_t> cardinalities;

  std::size_t columns() const noexcept { return cardinalities.size(); }
  /// Byte size of the header as written.
  std::uint64_t byteSize() const noexcept { return 4 + 4 + 8 + 4 + 8 * cardinalities.size(); }
  /// Byte offset of column `col`'s first code, relative to the header start.
  std::uint64_t columnOffset(std::size_t col) const noexcept {
    return byteSize() + 4 * rows * col;
  }
};

void writeColumnarHeader(std::ostream& out, const ColumnarHeader& header);
/// Throws FormatError("header", ...) on bad magic, version or truncation.
ColumnarHeader readColumnarHeader(std::istream& in);

void writeColumnar(const Table& table, std::ostream& out, bool withDictionaries = true);
void writeColumnar(const Table& table, const std::filesystem::path& path, bool withDictionaries = true);

/// Reads and validates a columnar file. Failures throw FormatError naming the
/// failing section ("header", "column <i>", "dictionary", "table").
Table readColumnar(std::istream& in);
Table readColumnar(const std::filesystem::path& path);

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
};

struct CsvData {
  std::vector<std::string> headers;
  /// Column-major field values.
  std::vector<std::vector<std::string>> columns;
};

/// RFC 4180-style reader (quoted fields, doubled quotes, CRLF). All fields are
/// opaque strings. Throws FormatError("csv line <k>") on ragged rows or an
/// unterminated quote, and FormatError("csv", "no rows") on empty input.
CsvData readCsv(std::istream& in, const CsvOptions& options = {});

/// Writes the table's original values (codes when it has no dictionaries).
/// Fields are quoted only when needed.
void writeCsv(const Table& table, std::ostream& out, const CsvOptions& options = {},
              std::span<const std::string> headers = {});

}  // namespace rowreorder
