#include "rowreorder/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rowreorder/heuristics.hpp"
#include "rowreorder/improve.hpp"
#include "rowreorder/partition.hpp"
#include "rowreorder/sorting.hpp"

namespace rowreorder {

namespace {

constexpr Method kAllMethods[] = {
    Method::lexicographic,   Method::reflectedGC,    Method::vortex,        Method::frequentComponent,
    Method::multipleLists,   Method::nearestNeighbor, Method::savings,      Method::multipleFragment,
    Method::insertFarthest,  Method::insertNearest,  Method::insertRandom,  Method::lexReinsert,
    Method::vortexReinsert,  Method::fcReinsert,     Method::multipleListsPartitioned,
};

RowOrdering withHeuristic(const Table& table, Heuristic h, std::uint64_t seed, bool force) {
  HeuristicOptions options;
  options.seed = seed;
  options.force = force;
  options.columnOrder = columnOrderByCardinality(table);
  return runHeuristic(h, RowMatrix(table), options);
}

RowOrdering withReinsertion(const Table& table, OrderKind kind, bool force) {
  return improveOneReinsertion(RowMatrix(table), orderRows(table, kind), force);
}

}  // namespace

std::string_view toString(Method m) {
  switch (m) {
    case Method::lexicographic: return "lex";
    case Method::reflectedGC: return "gray";
    case Method::vortex: return "vortex";
    case Method::frequentComponent: return "fc";
    case Method::multipleLists: return "ml";
    case Method::nearestNeighbor: return "nn";
    case Method::savings: return "savings";
    case Method::multipleFragment: return "mf";
    case Method::insertFarthest: return "ins-far";
    case Method::insertNearest: return "ins-near";
    case Method::insertRandom: return "ins-rand";
    case Method::lexReinsert: return "lex+reinsert";
    case Method::vortexReinsert: return "vortex+reinsert";
    case Method::fcReinsert: return "fc+reinsert";
    case Method::multipleListsPartitioned: return "ml-star";
  }
  return "?";
}

Method parseMethod(std::string_view name) {
  for (auto m : kAllMethods) {
    if (toString(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::vector<Method> defaultMethods() {
  std::vector<Method> out;
  for (auto m : kAllMethods) {
    if (m != Method::lexicographic && m != Method::reflectedGC) out.push_back(m);
  }
  return out;
}

std::size_t defaultRowCap(Method m) {
  switch (m) {
    case Method::nearestNeighbor:
    case Method::savings:
    case Method::multipleFragment:
      return 131072;
    case Method::insertFarthest:
    case Method::insertNearest:
    case Method::insertRandom:
    case Method::lexReinsert:
    case Method::vortexReinsert:
    case Method::fcReinsert:
      return 8192;
    default:
      return ~std::size_t{0};
  }
}

RowOrdering reorderWith(const Table& table, Method method, std::uint64_t seed, bool force) {
  switch (method) {
    case Method::lexicographic: return orderRows(table, OrderKind::lexicographic);
    case Method::reflectedGC: return orderRows(table, OrderKind::reflectedGC);
    case Method::vortex: return orderRows(table, OrderKind::vortex);
    case Method::frequentComponent: return orderRows(table, OrderKind::frequentComponent);
    case Method::multipleLists: return withHeuristic(table, Heuristic::multipleLists, seed, force);
    case Method::nearestNeighbor: return withHeuristic(table, Heuristic::nearestNeighbor, seed, force);
    case Method::savings: return withHeuristic(table, Heuristic::savings, seed, force);
    case Method::multipleFragment: return withHeuristic(table, Heuristic::multipleFragment, seed, force);
    case Method::insertFarthest: return withHeuristic(table, Heuristic::insertFarthest, seed, force);
    case Method::insertNearest: return withHeuristic(table, Heuristic::insertNearest, seed, force);
    case Method::insertRandom: return withHeuristic(table, Heuristic::insertRandom, seed, force);
    case Method::lexReinsert: return withReinsertion(table, OrderKind::lexicographic, force);
    case Method::vortexReinsert: return withReinsertion(table, OrderKind::vortex, force);
    case Method::fcReinsert: return withReinsertion(table, OrderKind::frequentComponent, force);
    case Method::multipleListsPartitioned: {
      PartitionPlan plan;
      plan.heuristic = Heuristic::multipleLists;
      plan.heuristicOptions.seed = seed;
      return applyPartitioned(table, plan).ordering;
    }
  }
  throw std::invalid_argument("unknown method");
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2;
}

const BenchCell* BenchReport::find(Method m, std::size_t rows) const {
  for (const auto& cell : cells) {
    if (cell.method == m && cell.rows == rows) return &cell;
  }
  return nullptr;
}

BenchReport runBenchmark(const BenchConfig& config) {
  if (config.repetitions == 0) throw std::invalid_argument("bench: repetitions must be >= 1");
  BenchReport report;
  report.config = config;
  using Clock = std::chrono::steady_clock;

  for (std::size_t n : config.rows) {
    BenchCell baseline;
    baseline.method = Method::lexicographic;
    baseline.rows = n;
    std::vector<BenchCell> cells;
    for (Method m : config.methods) {
      if (m == Method::lexicographic) continue;
      BenchCell cell;
      cell.method = m;
      cell.rows = n;
      cell.skipped = n > config.rowCap.value_or(defaultRowCap(m));
      cells.push_back(cell);
    }

    for (unsigned r = 0; r < config.repetitions; ++r) {
      const std::uint64_t seed = config.seed + r;
      const Table table = generateTable({n, config.columns, config.distribution, seed});
      auto t0 = Clock::now();
      const auto lexRuns = runCount(table, orderRows(table, OrderKind::lexicographic)).total;
      baseline.seeds.push_back(seed);
      baseline.lexRunCounts.push_back(lexRuns);
      baseline.runCounts.push_back(lexRuns);
      baseline.reductions.push_back(1.0);
      baseline.seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());

      for (auto& cell : cells) {
        if (cell.skipped || !cell.error.empty()) continue;
        try {
          t0 = Clock::now();
          const auto ordering = reorderWith(table, cell.method, seed);
          const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
          const auto runs = runCount(table, ordering).total;
          cell.seeds.push_back(seed);
          cell.lexRunCounts.push_back(lexRuns);
          cell.runCounts.push_back(runs);
          cell.reductions.push_back(static_cast<double>(lexRuns) / static_cast<double>(runs));
          cell.seconds.push_back(secs);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
      }
    }

    baseline.medianReduction = 1.0;
    baseline.medianSeconds = median(baseline.seconds);
    report.cells.push_back(baseline);
    for (auto& cell : cells) {
      cell.medianReduction = median(cell.reductions);
      cell.medianSeconds = median(cell.seconds);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::string reportToJson(const BenchReport& report) {
  nlohmann::json j;
  j["suite"] = toString(report.config.distribution);
  j["columns"] = report.config.columns;
  j["repetitions"] = report.config.repetitions;
  j["seed"] = report.config.seed;
  j["rows"] = report.config.rows;
  j["cells"] = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json c;
    c["method"] = toString(cell.method);
    c["rows"] = cell.rows;
    c["skipped"] = cell.skipped;
    if (!cell.error.empty()) c["error"] = cell.error;
    c["seeds"] = cell.seeds;
    c["lex_runcount"] = cell.lexRunCounts;
    c["runcount"] = cell.runCounts;
    c["reduction"] = cell.reductions;
    c["seconds"] = cell.seconds;
    if (!cell.skipped && cell.error.empty()) {
      c["median_reduction"] = cell.medianReduction;
      c["median_seconds"] = cell.medianSeconds;
    }
    j["cells"].push_back(std::move(c));
  }
  return j.dump(2);
}

void printReportTable(const BenchReport& report, std::ostream& out) {
  std::vector<Method> methods{Method::lexicographic};
  for (Method m : report.config.methods) {
    if (m != Method::lexicographic) methods.push_back(m);
  }
  std::size_t width = 8;
  for (Method m : methods) width = std::max(width, toString(m).size() + 2);

  out << std::left << std::setw(static_cast<int>(width)) << "method";
  for (std::size_t n : report.config.rows) out << std::right << std::setw(12) << ("n=" + std::to_string(n));
  out << '\n';
  for (Method m : methods) {
    out << std::left << std::setw(static_cast<int>(width)) << toString(m);
    for (std::size_t n : report.config.rows) {
      const BenchCell* cell = report.find(m, n);
      std::ostringstream v;
      if (cell == nullptr || cell->skipped) {
        v << "";
      } else if (!cell->error.empty()) {
        v << "error";
      } else {
        v << std::fixed << std::setprecision(3) << cell->medianReduction;
      }
      out << std::right << std::setw(12) << v.str();
    }
    out << '\n';
  }
}

std::string TableCharacterization::verdict() const {
  return tryNonLexicographic ? "try non-lexicographic heuristics" : "lexicographic sufficient";
}

TableCharacterization characterizeTable(const Table& table, const GuidanceThresholds& thresholds,
                                        ColumnOrderPolicy columnOrder) {
  if (table.rowCount() == 0) throw std::invalid_argument("characterize: empty table");
  std::vector<std::uint32_t> order;
  if (columnOrder == ColumnOrderPolicy::natural) {
    order.resize(table.columnCount());
    std::iota(order.begin(), order.end(), 0U);
  }
  const auto stats = computeColumnStats(table, order);
  TableCharacterization out;
  out.rows = table.rowCount();
  out.distinctRows = stats.distinctRows;
  out.columns = table.columnCount();
  out.cardinalities = table.cardinalities();
  for (auto card : out.cardinalities) out.cardinalitySum += card;
  out.omega = omegaBound(stats);
  out.p0 = dispersionP0(table);
  out.thresholds = thresholds;
  out.tryNonLexicographic = out.omega.value() > thresholds.omega && out.p0.value() > thresholds.p0;
  return out;
}

}  // namespace rowreorder
