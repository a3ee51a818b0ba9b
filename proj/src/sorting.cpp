#include "rowreorder/sorting.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numeric>
#include <queue>
#include <string>
#include <system_error>
#include <vector>

#include "rowreorder/columnar_io.hpp"
#include "rowreorder/errors.hpp"

namespace rowreorder {

namespace {

std::filesystem::path resolveSpillDir(const SortOptions& options) {
  if (!options.spillDirectory.empty()) return options.spillDirectory;
  if (const char* env = std::getenv(kSpillDirEnv); env != nullptr && *env != '\0') return env;
  return std::filesystem::temp_directory_path();
}

// Removes the file when it goes out of scope.
class TempFile {
 public:
  explicit TempFile(const std::filesystem::path& dir) {
    static std::atomic<std::uint64_t> counter{0};
    path_ = dir / ("rowreorder-run-" + std::to_string(::getpid()) + "-" +
                   std::to_string(counter.fetch_add(1)) + ".rfrg");
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

void putU64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(b, 8);
}

std::uint64_t getU64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw SpillError("spill file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void putU32At(std::vector<char>& buf, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf[at + i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
}

// Spill run layout: run length u64 | columnar row group (header + column
// blocks) | run length x u32 original row ids.
struct RunLayout {
  std::uint64_t length = 0;
  ColumnarHeader header;

  std::uint64_t groupStart() const noexcept { return 8; }
  std::uint64_t codeOffset(std::size_t col, std::uint64_t pos) const noexcept {
    return groupStart() + header.columnOffset(col) + 4 * pos;
  }
  std::uint64_t idOffset(std::uint64_t pos) const noexcept {
    return groupStart() + header.columnOffset(header.columns()) + 4 * pos;
  }
  std::uint64_t fileSize() const noexcept { return idOffset(length); }
};

// Writes a run in chunks of rows; positions are filled front to back.
class RunWriter {
 public:
  RunWriter(const std::filesystem::path& path, std::uint64_t length,
            const std::vector<std::uint64_t>& cardinalities) {
    layout_.length = length;
    layout_.header.rows = length;
    layout_.header.cardinalities = cardinalities;
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw SpillError("cannot create spill file " + path.string());
    putU64(out_, length);
    writeColumnarHeader(out_, layout_.header);
    out_.flush();
    std::error_code ec;
    std::filesystem::resize_file(path, layout_.fileSize(), ec);
    if (ec || !out_) throw SpillError("cannot size spill file " + path.string() + ": " + ec.message());
  }

  // rows: row-major codes of `ids.size()` rows.
  void append(std::span<const Code> rows, std::span<const RowId> ids) {
    const std::size_t c = layout_.header.columns();
    const std::size_t count = ids.size();
    std::vector<char> buf(4 * count);
    for (std::size_t col = 0; col < c; ++col) {
      for (std::size_t k = 0; k < count; ++k) putU32At(buf, 4 * k, rows[k * c + col]);
      write(layout_.codeOffset(col, written_), buf);
    }
    for (std::size_t k = 0; k < count; ++k) putU32At(buf, 4 * k, ids[k]);
    write(layout_.idOffset(written_), buf);
    written_ += count;
  }

  void close() {
    out_.close();
    if (!out_) throw SpillError("closing spill file failed");
  }

 private:
  void write(std::uint64_t offset, const std::vector<char>& buf) {
    out_.seekp(static_cast<std::streamoff>(offset));
    out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out_) throw SpillError("write to spill file failed");
  }

  std::ofstream out_;
  RunLayout layout_;
  std::uint64_t written_ = 0;
};

// Streams a run back in buffered chunks.
class RunReader {
 public:
  RunReader(const std::filesystem::path& path, std::size_t chunkRows) : chunk_(std::max<std::size_t>(1, chunkRows)) {
    in_.open(path, std::ios::binary);
    if (!in_) throw SpillError("cannot open spill file " + path.string());
    layout_.length = getU64(in_);
    try {
      layout_.header = readColumnarHeader(in_);
    } catch (const FormatError& e) {
      throw SpillError(std::string("corrupt spill file: ") + e.what());
    }
    if (layout_.header.rows != layout_.length) throw SpillError("corrupt spill file: length mismatch");
    refill();
  }

  bool done() const noexcept { return cursor_ >= bufferedCount_; }
  std::span<const Code> row() const {
    const std::size_t c = layout_.header.columns();
    return {codes_.data() + cursor_ * c, c};
  }
  RowId id() const { return ids_[cursor_]; }

  void advance() {
    if (++cursor_ >= bufferedCount_) refill();
  }

 private:
  void refill() {
    const std::uint64_t remaining = layout_.length - next_;
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, chunk_));
    const std::size_t c = layout_.header.columns();
    codes_.assign(count * c, 0);
    ids_.assign(count, 0);
    std::vector<unsigned char> buf(4 * count);
    for (std::size_t col = 0; col < c && count > 0; ++col) {
      read(layout_.codeOffset(col, next_), buf);
      for (std::size_t k = 0; k < count; ++k) codes_[k * c + col] = decode(buf, k);
    }
    if (count > 0) {
      read(layout_.idOffset(next_), buf);
      for (std::size_t k = 0; k < count; ++k) ids_[k] = decode(buf, k);
    }
    next_ += count;
    bufferedCount_ = count;
    cursor_ = 0;
  }

  static std::uint32_t decode(const std::vector<unsigned char>& buf, std::size_t k) {
    return static_cast<std::uint32_t>(buf[4 * k]) | static_cast<std::uint32_t>(buf[4 * k + 1]) << 8 |
           static_cast<std::uint32_t>(buf[4 * k + 2]) << 16 |
           static_cast<std::uint32_t>(buf[4 * k + 3]) << 24;
  }

  void read(std::uint64_t offset, std::vector<unsigned char>& buf) {
    in_.seekg(static_cast<std::streamoff>(offset));
    if (!in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
      throw SpillError("read from spill file failed");
    }
  }

  std::ifstream in_;
  RunLayout layout_;
  std::size_t chunk_;
  std::uint64_t next_ = 0;
  std::size_t bufferedCount_ = 0;
  std::size_t cursor_ = 0;
  std::vector<Code> codes_;
  std::vector<RowId> ids_;
};

struct SpilledRun {
  std::unique_ptr<TempFile> file;
  std::uint64_t length = 0;
};

bool rowLess(const RowComparator& cmp, std::span<const Code> a, RowId ida, std::span<const Code> b, RowId idb) {
  const auto order = cmp(a, b);
  if (order != 0) return order < 0;
  return ida < idb;
}

// Merges `inputs` in sorted order, calling sink(rowCodes, id) for each row.
template <class Sink>
void mergeRuns(std::span<const SpilledRun> inputs, const RowComparator& cmp, std::size_t chunkRows, Sink sink) {
  std::vector<std::unique_ptr<RunReader>> readers;
  readers.reserve(inputs.size());
  for (const auto& run : inputs) readers.push_back(std::make_unique<RunReader>(run.file->path(), chunkRows));

  auto greater = [&](std::size_t a, std::size_t b) {
    return rowLess(cmp, readers[b]->row(), readers[b]->id(), readers[a]->row(), readers[a]->id());
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < readers.size(); ++i) {
    if (!readers[i]->done()) heap.push(i);
  }
  while (!heap.empty()) {
    const auto i = heap.top();
    heap.pop();
    sink(readers[i]->row(), readers[i]->id());
    readers[i]->advance();
    if (!readers[i]->done()) heap.push(i);
  }
}

RowOrdering externalSort(const Table& table, const RowComparator& cmp, const SortOptions& options) {
  const std::size_t n = table.rowCount();
  const std::size_t c = table.columnCount();
  const std::size_t runRows = rowsPerRun(options.memoryBudgetBytes, c);
  const std::size_t fanIn = std::max<std::size_t>(2, options.maxFanIn);
  const auto dir = resolveSpillDir(options);
  const std::vector<std::uint64_t> cards(table.cardinalities().begin(), table.cardinalities().end());

  std::vector<SpilledRun> runs;
  for (std::size_t start = 0; start < n; start += runRows) {
    const std::size_t end = std::min(n, start + runRows);
    std::vector<RowId> ids(end - start);
    std::iota(ids.begin(), ids.end(), static_cast<RowId>(start));
    const RowMatrix rows(table, ids);
    std::vector<RowId> local(ids.size());
    std::iota(local.begin(), local.end(), RowId{0});
    sortRowIds(rows, local, cmp);

    std::vector<Code> sortedCodes(local.size() * c);
    std::vector<RowId> sortedIds(local.size());
    for (std::size_t k = 0; k < local.size(); ++k) {
      auto r = rows.row(local[k]);
      std::copy(r.begin(), r.end(), sortedCodes.begin() + static_cast<std::ptrdiff_t>(k * c));
      sortedIds[k] = ids[local[k]];
    }
    SpilledRun run{std::make_unique<TempFile>(dir), local.size()};
    RunWriter writer(run.file->path(), run.length, cards);
    writer.append(sortedCodes, sortedIds);
    writer.close();
    runs.push_back(std::move(run));
  }

  // Intermediate merge levels while there are more runs than the fan-in.
  while (runs.size() > fanIn) {
    std::vector<SpilledRun> next;
    const std::size_t chunk = std::max<std::size_t>(1, runRows / (fanIn + 1));
    for (std::size_t g = 0; g < runs.size(); g += fanIn) {
      const std::size_t ge = std::min(runs.size(), g + fanIn);
      std::uint64_t length = 0;
      for (std::size_t i = g; i < ge; ++i) length += runs[i].length;
      SpilledRun merged{std::make_unique<TempFile>(dir), length};
      RunWriter writer(merged.file->path(), length, cards);
      std::vector<Code> bufCodes;
      std::vector<RowId> bufIds;
      auto flush = [&] {
        writer.append(bufCodes, bufIds);
        bufCodes.clear();
        bufIds.clear();
      };
      mergeRuns(std::span(runs).subspan(g, ge - g), cmp, chunk, [&](std::span<const Code> row, RowId id) {
        bufCodes.insert(bufCodes.end(), row.begin(), row.end());
        bufIds.push_back(id);
        if (bufIds.size() >= chunk) flush();
      });
      if (!bufIds.empty()) flush();
      writer.close();
      next.push_back(std::move(merged));
    }
    runs = std::move(next);
  }

  RowOrdering out;
  out.reserve(n);
  const std::size_t chunk = std::max<std::size_t>(1, runRows / (runs.size() + 1));
  mergeRuns(runs, cmp, chunk, [&](std::span<const Code>, RowId id) { out.push_back(id); });
  return out;
}

}  // namespace

std::size_t rowsPerRun(std::size_t memoryBudgetBytes, std::size_t columns) {
  const std::size_t bytesPerRow = 4 * columns + 8;
  return std::max<std::size_t>(1, memoryBudgetBytes / bytesPerRow);
}

void sortRowIds(const RowMatrix& rows, std::span<RowId> ids, const RowComparator& comparator) {
  std::stable_sort(ids.begin(), ids.end(), [&](RowId a, RowId b) {
    return comparator(rows.row(a), rows.row(b)) < 0;
  });
}

RowOrdering sortRows(const Table& table, const RowComparator& comparator, const SortOptions& options) {
  const std::size_t n = table.rowCount();
  if (n <= rowsPerRun(options.memoryBudgetBytes, table.columnCount())) {
    RowOrdering out = identityOrdering(n);
    sortRowIds(RowMatrix(table), out, comparator);
    return out;
  }
  return externalSort(table, comparator, options);
}

RowOrdering orderRows(const Table& table, OrderKind kind, const OrderOptions& options) {
  if (kind == OrderKind::vortex && options.normalize) {
    const auto normalized = normalizeByFrequency(table);
    return sortRows(normalized.table, RowComparator::forTable(kind, normalized.table, options.columnOrder),
                    options.sort);
  }
  return sortRows(table, RowComparator::forTable(kind, table, options.columnOrder), options.sort);
}

}  // namespace rowreorder
