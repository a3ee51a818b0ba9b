#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rowreorder/comparators.hpp"
#include "rowreorder/datagen.hpp"
#include "rowreorder/metrics.hpp"
#include "rowreorder/table.hpp"

namespace rowreorder {

/// Row-ordering methods compared by the benchmark.
enum class Method {
  lexicographic,
  reflectedGC,
  vortex,
  frequentComponent,
  multipleLists,
  nearestNeighbor,
  savings,
  multipleFragment,
  insertFarthest,
  insertNearest,
  insertRandom,
  lexReinsert,
  vortexReinsert,
  fcReinsert,
  multipleListsPartitioned,
};

/// Spellings: lex, gray, vortex, fc, ml, nn, savings, mf, ins-far, ins-near,
/// ins-rand, lex+reinsert, vortex+reinsert, fc+reinsert, ml-star.
std::string_view toString(Method m);
Method parseMethod(std::string_view name);
/// Every method except the baseline and Reflected GC, in report order.
std::vector<Method> defaultMethods();
/// Largest n a method is benchmarked at by default (quadratic methods are capped).
std::size_t defaultRowCap(Method m);

/// Reorders `table` with `method`. Orders use the non-decreasing cardinality
/// column order; ml-star is Multiple Lists on lexicographic partitions of 131072 rows.
RowOrdering reorderWith(const Table& table, Method method, std::uint64_t seed, bool force = false);

struct BenchConfig {
  Distribution distribution = Distribution::zipf;
  std::vector<std::size_t> rows{8192};
  std::size_t columns = 4;
  std::vector<Method> methods = defaultMethods();
  unsigned repetitions = 5;
  /// Repetition r uses seed + r for both the table and the heuristic.
  std::uint64_t seed = 0;
  /// Overrides every method's defaultRowCap when set.
  std::optional<std::size_t> rowCap;
};

struct BenchCell {
  Method method = Method::lexicographic;
  std::size_t rows = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> lexRunCounts;
  std::vector<std::uint64_t> runCounts;
  /// lexRunCount / runCount per repetition.
  std::vector<double> reductions;
  std::vector<double> seconds;
  double medianReduction = 0;
  double medianSeconds = 0;
  bool skipped = false;
  std::string error;
};

struct BenchReport {
  BenchConfig config;
  /// One cell per (rows, method) including the lexicographic baseline.
  std::vector<BenchCell> cells;

  const BenchCell* find(Method m, std::size_t rows) const;
};

/// Runs the grid. A failing cell records its error and the run continues.
BenchReport runBenchmark(const BenchConfig& config);

std::string reportToJson(const BenchReport& report);
/// Aligned text table: one line per method, one column per row count.
void printReportTable(const BenchReport& report, std::ostream& out);

double median(std::vector<double> values);

struct GuidanceThresholds {
  double omega = 3.0;
  double p0 = 0.3;
};

struct TableCharacterization {
  std::uint64_t rows = 0;
  std::uint64_t distinctRows = 0;
  std::size_t columns = 0;
  std::uint64_t cardinalitySum = 0;
  std::vector<std::uint32_t> cardinalities;
  Ratio omega;
  Ratio p0;
  GuidanceThresholds thresholds;
  /// omega > thresholds.omega and p0 > thresholds.p0.
  bool tryNonLexicographic = false;

  std::string verdict() const;
};

/// omega is computed for a lexicographic sort under `columnOrder` (the stored
/// column order by default). Throws std::invalid_argument on an empty table.
TableCharacterization characterizeTable(const Table& table, const GuidanceThresholds& thresholds = {},
                                        ColumnOrderPolicy columnOrder = ColumnOrderPolicy::natural);

}  // namespace rowreorder
