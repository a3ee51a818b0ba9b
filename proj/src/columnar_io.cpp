#include "rowreorder/columnar_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "rowreorder/errors.hpp"

namespace rowreorder {

namespace {

template <class T>
void putLE(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFU);
  }
  out.write(bytes.data(), bytes.size());
}

template <class T>
T getLE(std::istream& in, const std::string& section) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw FormatError(section, "unexpected end of file");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

void writeCodes(std::ostream& out, std::span<const Code> codes) {
  std::vector<char> buf(codes.size() * 4);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<char>((codes[i] >> (8 * b)) & 0xFFU);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<Code> readCodes(std::istream& in, std::uint64_t count, const std::string& section) {
  std::vector<unsigned char> buf(count * 4);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw FormatError(section, "unexpected end of file");
  }
  std::vector<Code> codes(count);
  for (std::size_t i = 0; i < count; ++i) {
    codes[i] = static_cast<Code>(buf[4 * i]) | static_cast<Code>(buf[4 * i + 1]) << 8 |
               static_cast<Code>(buf[4 * i + 2]) << 16 | static_cast<Code>(buf[4 * i + 3]) << 24;
  }
  return codes;
}

bool needsQuoting(const std::string& field, char delimiter) {
  return field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos ||
         (!field.empty() && (field.front() == ' ' || field.back() == ' '));
}

void writeField(std::ostream& out, const std::string& field, char delimiter) {
  if (!needsQuoting(field, delimiter)) {
    out << field;
    return;
  }
  out << '"';
  for (char ch : field) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace

void writeColumnarHeader(std::ostream& out, const ColumnarHeader& header) {
  out.write(kColumnarMagic, 4);
  putLE<std::uint32_t>(out, header.version);
  putLE<std::uint64_t>(out, header.rows);
  putLE<std::uint32_t>(out, static_cast<std::uint32_t>(header.cardinalities.size()));
  for (auto card : header.cardinalities) putLE<std::uint64_t>(out, card);
}

ColumnarHeader readColumnarHeader(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw FormatError("header", "unexpected end of file");
  if (std::memcmp(magic, kColumnarMagic, 4) != 0) throw FormatError("header", "bad magic");
  ColumnarHeader h;
  h.version = getLE<std::uint32_t>(in, "header");
  if (h.version != kColumnarVersion) {
    throw FormatError("header", "unsupported version " + std::to_string(h.version));
  }
  h.rows = getLE<std::uint64_t>(in, "header");
  const auto c = getLE<std::uint32_t>(in, "header");
  if (c == 0) throw FormatError("header", "zero columns");
  h.cardinalities.resize(c);
  for (auto& card : h.cardinalities) card = getLE<std::uint64_t>(in, "header");
  return h;
}

void writeColumnar(const Table& table, std::ostream& out, bool withDictionaries) {
  ColumnarHeader h;
  h.rows = table.rowCount();
  h.cardinalities.assign(table.cardinalities().begin(), table.cardinalities().end());
  writeColumnarHeader(out, h);
  for (std::size_t c = 0; c < table.columnCount(); ++c) writeCodes(out, table.column(c));
  if (withDictionaries && table.hasDictionaries()) {
    for (const auto& dict : table.dictionaries()) {
      putLE<std::uint64_t>(out, dict.size());
      for (const auto& s : dict) {
        putLE<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
        out.write(s.data(), static_cast<std::streamsize>(s.size()));
      }
    }
  }
  if (!out) throw std::runtime_error("write failed");
}

void writeColumnar(const Table& table, const std::filesystem::path& path, bool withDictionaries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writeColumnar(table, out, withDictionaries);
}

Table readColumnar(std::istream& in) {
  const auto h = readColumnarHeader(in);
  std::vector<std::vector<Code>> columns;
  columns.reserve(h.columns());
  for (std::size_t c = 0; c < h.columns(); ++c) {
    const std::string section = "column " + std::to_string(c);
    auto codes = readCodes(in, h.rows, section);
    for (Code v : codes) {
      if (v >= h.cardinalities[c]) throw FormatError(section, "code out of range");
    }
    columns.push_back(std::move(codes));
  }

  std::vector<Dictionary> dicts;
  if (in.peek() != std::char_traits<char>::eof()) {
    dicts.resize(h.columns());
    for (std::size_t c = 0; c < h.columns(); ++c) {
      const auto count = getLE<std::uint64_t>(in, "dictionary");
      if (count != h.cardinalities[c]) throw FormatError("dictionary", "size differs from cardinality");
      dicts[c].reserve(count);
      for (std::uint64_t k = 0; k < count; ++k) {
        const auto len = getLE<std::uint32_t>(in, "dictionary");
        std::string s(len, '\0');
        if (len > 0 && !in.read(s.data(), len)) throw FormatError("dictionary", "unexpected end of file");
        dicts[c].push_back(std::move(s));
      }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("dictionary", "trailing bytes");
  }
  try {
    auto t = Table::fromCodes(std::move(columns), std::move(dicts));
    for (std::size_t c = 0; c < t.columnCount(); ++c) {
      if (t.cardinality(c) != h.cardinalities[c]) throw FormatError("header", "cardinality mismatch");
    }
    return t;
  } catch (const std::invalid_argument& e) {
    throw FormatError("table", e.what());
  }
}

Table readColumnar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("file", "cannot open " + path.string());
  return readColumnar(in);
}

CsvData readCsv(std::istream& in, const CsvOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool inQuotes = false;
  bool fieldStarted = false;
  std::size_t line = 1;
  std::size_t rowLine = 1;

  auto endField = [&] {
    row.push_back(std::move(field));
    field.clear();
    fieldStarted = false;
  };
  auto endRow = [&] {
    endField();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
    rowLine = line;
  };

  char ch;
  while (in.get(ch)) {
    if (inQuotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          inQuotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && !fieldStarted) {
      inQuotes = true;
      fieldStarted = true;
    } else if (ch == options.delimiter) {
      endField();
    } else if (ch == '\r' && in.peek() == '\n') {
      continue;
    } else if (ch == '\n') {
      ++line;
      endRow();
    } else {
      field.push_back(ch);
      fieldStarted = true;
    }
  }
  if (inQuotes) throw FormatError("csv line " + std::to_string(rowLine), "unterminated quoted field");
  if (fieldStarted || !row.empty()) endRow();

  CsvData out;
  if (options.header && !rows.empty()) {
    out.headers = std::move(rows.front());
    rows.erase(rows.begin());
  }
  if (rows.empty()) throw FormatError("csv", "no rows");
  const std::size_t width = options.header ? out.headers.size() : rows.front().size();
  out.columns.assign(width, {});
  for (auto& col : out.columns) col.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      // Report the 1-based physical line, counting the header row.
      throw FormatError("csv line " + std::to_string(r + 1 + (options.header ? 1 : 0)),
                        "expected " + std::to_string(width) + " fields, found " +
                            std::to_string(rows[r].size()));
    }
    for (std::size_t c = 0; c < width; ++c) out.columns[c].push_back(std::move(rows[r][c]));
  }
  return out;
}

void writeCsv(const Table& table, std::ostream& out, const CsvOptions& options,
              std::span<const std::string> headers) {
  if (!headers.empty()) {
    for (std::size_t c = 0; c < headers.size(); ++c) {
      if (c > 0) out << options.delimiter;
      writeField(out, headers[c], options.delimiter);
    }
    out << '\n';
  }
  for (std::size_t r = 0; r < table.rowCount(); ++r) {
    for (std::size_t c = 0; c < table.columnCount(); ++c) {
      if (c > 0) out << options.delimiter;
      const Code v = table.at(r, c);
      writeField(out, table.hasDictionaries() ? table.dictionary(c)[v] : std::to_string(v),
                 options.delimiter);
    }
    out << '\n';
  }
}

}  // namespace rowreorder
