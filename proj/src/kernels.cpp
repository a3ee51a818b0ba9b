#include "rowreorder/kernels.hpp"

#include <omp.h>

namespace rowreorder::kernels {

namespace {

std::uint64_t runsOfColumn(std::span<const Code> col, std::span<const RowId> ordering) {
  if (ordering.empty()) return 0;
  std::uint64_t runs = 1;
  Code prev = col[ordering[0]];
  for (std::size_t k = 1; k < ordering.size(); ++k) {
    const Code v = col[ordering[k]];
    runs += v != prev;
    prev = v;
  }
  return runs;
}

std::vector<std::uint64_t> histogramOfColumn(std::span<const Code> col, std::uint32_t cardinality) {
  std::vector<std::uint64_t> h(cardinality, 0);
  for (Code v : col) ++h[v];
  return h;
}

int g_threads = 0;

}  // namespace

namespace serial {

std::vector<std::uint64_t> columnRuns(const Table& table, std::span<const RowId> ordering) {
  std::vector<std::uint64_t> out(table.columnCount());
  for (std::size_t c = 0; c < table.columnCount(); ++c) out[c] = runsOfColumn(table.column(c), ordering);
  return out;
}

std::vector<std::vector<std::uint64_t>> histograms(const Table& table) {
  std::vector<std::vector<std::uint64_t>> out(table.columnCount());
  for (std::size_t c = 0; c < table.columnCount(); ++c) {
    out[c] = histogramOfColumn(table.column(c), table.cardinality(c));
  }
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<std::uint64_t> columnRuns(const Table& table, std::span<const RowId> ordering) {
  const auto cols = static_cast<std::int64_t>(table.columnCount());
  std::vector<std::uint64_t> out(table.columnCount());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < cols; ++c) out[c] = runsOfColumn(table.column(c), ordering);
  return out;
}

std::vector<std::vector<std::uint64_t>> histograms(const Table& table) {
  const auto cols = static_cast<std::int64_t>(table.columnCount());
  std::vector<std::vector<std::uint64_t>> out(table.columnCount());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < cols; ++c) {
    out[c] = histogramOfColumn(table.column(c), table.cardinality(c));
  }
  return out;
}

}  // namespace parallel

void setThreadCount(int threads) {
  g_threads = threads > 0 ? threads : 0;
  omp_set_num_threads(g_threads > 0 ? g_threads : omp_get_num_procs());
}

int threadCount() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

}  // namespace rowreorder::kernels
