#pragma once

// Column-parallel kernels. Each kernel has an OpenMP version used by the
// library and a serial reference kept for equivalence tests and benchmarks.

#include <cstdint>
#include <span>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder::kernels {

namespace serial {
std::vector<std::uint64_t> columnRuns(const Table& table, std::span<const RowId> ordering);
std::vector<std::vector<std::uint64_t>> histograms(const Table& table);
}  // namespace serial

namespace parallel {
std::vector<std::uint64_t> columnRuns(const Table& table, std::span<const RowId> ordering);
std::vector<std::vector<std::uint64_t>> histograms(const Table& table);
}  // namespace parallel

/// Caps OpenMP worker count for subsequent parallel regions; 0 restores the default.
void setThreadCount(int threads);
int threadCount();

}  // namespace rowreorder::kernels
