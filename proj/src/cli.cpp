#include "rowreorder/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rowreorder/bench.hpp"
#include "rowreorder/codecs.hpp"
#include "rowreorder/columnar_io.hpp"
#include "rowreorder/datagen.hpp"
#include "rowreorder/errors.hpp"
#include "rowreorder/heuristics.hpp"
#include "rowreorder/improve.hpp"
#include "rowreorder/kernels.hpp"
#include "rowreorder/metrics.hpp"
#include "rowreorder/partition.hpp"
#include "rowreorder/sorting.hpp"

namespace rowreorder {

namespace {

using nlohmann::json;

// Wraps an error with the pipeline stage it came from, keeping its category.
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FormatError& e) {
    throw FormatError(name + ": " + e.section(), e.what() + e.section().size() + 2);
  } catch (const HeuristicGateError& e) {
    throw HeuristicGateError(name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(name + ": " + e.what());
  } catch (const SpillError& e) {
    throw SpillError(name + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
}

class Emitter {
 public:
  Emitter(std::ostream& out, bool records) : out_(out), records_(records) {}
  bool records() const noexcept { return records_; }
  void record(const json& j) { out_ << j.dump() << '\n'; }
  std::ostream& text() { return out_; }

 private:
  std::ostream& out_;
  bool records_;
};

struct Common {
  std::string format = "text";
  int threads = 0;
};

ColumnOrderPolicy parsePolicy(const std::string& s) {
  if (s == "cardinality") return ColumnOrderPolicy::byCardinality;
  if (s == "natural") return ColumnOrderPolicy::natural;
  throw std::invalid_argument("unknown column order '" + s + "'");
}

std::vector<std::uint32_t> columnOrderFor(const Table& t, ColumnOrderPolicy p) {
  if (p == ColumnOrderPolicy::byCardinality) return columnOrderByCardinality(t);
  std::vector<std::uint32_t> order(t.columnCount());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  return order;
}

void emitCodecReport(Emitter& em, const CodecReport& report) {
  const std::string codec(toString(report.codec));
  const std::string unit = report.codec == CodecId::runCount ? "runs" : "bits";
  if (em.records()) {
    for (std::size_t c = 0; c < report.perColumnBits.size(); ++c) {
      em.record({{"type", "column_size"}, {"codec", codec}, {"column", c}, {unit, report.perColumnBits[c]}});
    }
    em.record({{"type", "size"}, {"codec", codec}, {"block", report.blockSize}, {"rows", report.rowCount},
               {"total_" + unit, report.totalBits}});
    return;
  }
  auto& o = em.text();
  o << "codec " << codec << " (" << unit << ")\n";
  for (std::size_t c = 0; c < report.perColumnBits.size(); ++c) {
    o << "  column " << c << ": " << report.perColumnBits[c] << '\n';
  }
  o << "  total: " << report.totalBits << '\n';
}

json partitionJson(const PartitionRecord& r) {
  json j{{"type", "partition"},
         {"pass", r.pass},
         {"partition", r.index},
         {"rows", r.rows},
         {"runcount_before", r.runCountBefore},
         {"runcount_after", r.runCountAfter},
         {"elapsed_ms", r.elapsedMs},
         {"reverted", r.reverted},
         {"cumulative_runcount_before", r.cumulativeBefore},
         {"cumulative_runcount_after", r.cumulativeAfter},
         {"cumulative_rle_bits_before", r.cumulativeRleBitsBefore},
         {"cumulative_rle_bits_after", r.cumulativeRleBitsAfter}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::vector<std::size_t> parseRowList(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size() || v == 0) throw std::invalid_argument("bad row count '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no row counts given");
  return out;
}

std::vector<Method> parseMethodList(const std::string& s) {
  if (s == "all") return defaultMethods();
  std::vector<Method> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parseMethod(item));
  }
  if (out.empty()) throw std::invalid_argument("no heuristics given");
  return out;
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reorder table rows to reduce the number of runs in column stores"};
  app.name("rowreorder");
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads, "Worker thread cap (0 = all)")->check(CLI::NonNegativeNumber);

  // encode
  auto* encode = app.add_subcommand("encode", "Dictionary-encode a CSV file into the columnar format");
  std::string encIn, encOut, delimiter = ",";
  bool csvHeader = false;
  encode->add_option("input", encIn, "CSV file")->required();
  encode->add_option("-o,--out", encOut, "Columnar output file")->required();
  encode->add_flag("--header", csvHeader, "First CSV line holds column names");
  encode->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();

  // decode
  auto* decode = app.add_subcommand("decode", "Write a columnar file back as CSV");
  std::string decIn, decOut;
  decode->add_option("input", decIn, "Columnar file")->required();
  decode->add_option("-o,--out", decOut, "CSV output file (default: stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "Characterize a table and suggest an ordering strategy");
  std::string statsIn, statsColumnOrder = "natural";
  GuidanceThresholds thresholds;
  stats->add_option("input", statsIn, "Columnar file")->required();
  stats->add_option("--column-order", statsColumnOrder, "Column order of the lexicographic sort omega refers to")
      ->check(CLI::IsMember({"cardinality", "natural"}))
      ->capture_default_str();
  stats->add_option("--omega-threshold", thresholds.omega, "omega above which to try other orders")->capture_default_str();
  stats->add_option("--p0-threshold", thresholds.p0, "p0 above which to try other orders")->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a synthetic table");
  std::string genDist = "zipf", genOut;
  std::size_t genRows = 0, genCols = 4;
  std::uint64_t genSeed = 0;
  generate->add_option("--dist", genDist, "zipf or uniform")->check(CLI::IsMember({"zipf", "uniform"}))->capture_default_str();
  generate->add_option("--rows", genRows, "Row count")->required()->check(CLI::PositiveNumber);
  generate->add_option("--cols", genCols, "Column count")->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--seed", genSeed, "Random seed")->capture_default_str();
  generate->add_option("-o,--out", genOut, "Columnar output file")->required();

  // reorder
  auto* reorder = app.add_subcommand("reorder", "Reorder rows with a sort order or a heuristic");
  std::string reIn, reOut, reOrder, reHeuristic, reCodec, reColumnOrder = "cardinality", spillDir;
  std::size_t rePartition = 0, reBlock = kDefaultBlockSize, reLists = 0, memoryBudget = 0;
  unsigned rePasses = 1;
  bool reRevert = false, reBoundary = false, reForce = false, reNoNormalize = false;
  std::uint64_t reSeed = 0;
  reorder->add_option("input", reIn, "Columnar file")->required();
  reorder->add_option("-o,--out", reOut, "Reordered columnar file");
  auto* orderOpt = reorder->add_option("--order", reOrder, "lex, gray, vortex or fc")
                       ->check(CLI::IsMember({"lex", "gray", "vortex", "fc"}));
  auto* heurOpt = reorder->add_option("--heuristic", reHeuristic, "nn, ml, mf, savings, ins-near, ins-far or ins-rand")
                      ->check(CLI::IsMember({"nn", "ml", "mf", "savings", "ins-near", "ins-far", "ins-rand"}));
  orderOpt->excludes(heurOpt);
  reorder->add_option("--partition", rePartition, "Rows per partition (heuristics only)")->check(CLI::PositiveNumber);
  reorder->add_flag("--revert", reRevert, "Keep the base order where the heuristic does not help");
  reorder->add_flag("--boundary-aware", reBoundary, "Start each partition near the previous partition's end");
  reorder->add_option("--passes", rePasses, "1, or 2 for a half-shifted second pass")->check(CLI::Range(1, 2));
  reorder->add_option("--lists", reLists, "Multiple Lists: number of sorted lists (0 = one per column)");
  reorder->add_option("--column-order", reColumnOrder, "cardinality or natural")
      ->check(CLI::IsMember({"cardinality", "natural"}))
      ->capture_default_str();
  reorder->add_flag("--no-normalize", reNoNormalize, "Vortex: skip frequency normalization");
  reorder->add_option("--codec", reCodec, "Report the compressed size with this codec")
      ->check(CLI::IsMember({"runcount", "rle", "prefix", "sparse", "indirect", "lz"}));
  reorder->add_option("--block", reBlock, "Block size of block codecs")->capture_default_str();
  reorder->add_option("--seed", reSeed, "Random seed")->capture_default_str();
  reorder->add_flag("--force", reForce, "Run quadratic heuristics on more than 2^20 rows");
  reorder->add_option("--memory-budget", memoryBudget, "Sort memory budget in bytes (0 = unlimited)");
  reorder->add_option("--spill-dir", spillDir, std::string("Directory for sort spill files (default: $") + kSpillDirEnv + ")");

  // improve
  auto* improve = app.add_subcommand("improve", "Improve the stored row order locally");
  std::string imIn, imOut, imMethod;
  std::size_t imBlock = 8;
  bool imForce = false;
  improve->add_option("input", imIn, "Columnar file")->required();
  improve->add_option("-o,--out", imOut, "Improved columnar file");
  improve->add_option("--method", imMethod, "reinsert, ahdo or peephole")
      ->required()
      ->check(CLI::IsMember({"reinsert", "ahdo", "peephole"}));
  improve->add_option("--block", imBlock, "Peephole block size (3..12)")->capture_default_str();
  improve->add_flag("--force", imForce, "Run reinsertion on more than 2^20 rows");

  // size
  auto* size = app.add_subcommand("size", "Compressed size of the stored row order");
  std::string sizeIn, sizeCodec;
  std::size_t sizeBlock = kDefaultBlockSize;
  size->add_option("input", sizeIn, "Columnar file")->required();
  size->add_option("--codec", sizeCodec, "runcount, rle, prefix, sparse, indirect or lz")
      ->required()
      ->check(CLI::IsMember({"runcount", "rle", "prefix", "sparse", "indirect", "lz"}));
  size->add_option("--block", sizeBlock, "Block size of block codecs")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Compare methods on synthetic tables");
  std::string benchSuite = "zipf", benchRows = "8192", benchMethods = "all", benchOut;
  unsigned benchReps = 5;
  std::size_t benchCols = 4, benchCap = 0;
  std::uint64_t benchSeed = 0;
  bench->add_option("--suite", benchSuite, "zipf or uniform")->check(CLI::IsMember({"zipf", "uniform"}))->capture_default_str();
  bench->add_option("--rows", benchRows, "Comma-separated row counts")->capture_default_str();
  bench->add_option("--heuristics", benchMethods, "'all' or a comma-separated method list")->capture_default_str();
  bench->add_option("--reps", benchReps, "Repetitions (median reported)")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--cols", benchCols, "Column count")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--seed", benchSeed, "Seed of the first repetition")->capture_default_str();
  bench->add_option("--row-cap", benchCap, "Largest n for every method (0 = per-method defaults)");
  bench->add_option("--out", benchOut, "JSON report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (common.threads > 0) kernels::setThreadCount(common.threads);
  Emitter em(out, common.format == "records");

  try {
    if (*encode) {
      CsvOptions opts;
      opts.header = csvHeader;
      if (delimiter.size() != 1) throw std::invalid_argument("delimiter must be one character");
      opts.delimiter = delimiter[0];
      const auto table = stage("encode", [&] {
        std::ifstream in(encIn, std::ios::binary);
        if (!in) throw FormatError("file", "cannot open " + encIn);
        return dictionaryEncode(readCsv(in, opts).columns);
      });
      stage("write", [&] { writeColumnar(table, encOut); });
      if (em.records()) {
        em.record({{"type", "encode"}, {"rows", table.rowCount()}, {"columns", table.columnCount()},
                   {"cardinalities", table.cardinalities()}});
      } else {
        out << "rows " << table.rowCount() << "\ncolumns " << table.columnCount() << "\ncardinalities";
        for (auto card : table.cardinalities()) out << ' ' << card;
        out << '\n';
      }
    } else if (*decode) {
      const auto table = stage("read", [&] { return readColumnar(decIn); });
      if (decOut.empty()) {
        writeCsv(table, out);
      } else {
        std::ofstream f(decOut, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + decOut);
        writeCsv(table, f);
      }
    } else if (*stats) {
      const auto table = stage("read", [&] { return readColumnar(statsIn); });
      const auto ch = stage("stats", [&] { return characterizeTable(table, thresholds, parsePolicy(statsColumnOrder)); });
      if (em.records()) {
        em.record({{"type", "stats"},
                   {"rows", ch.rows},
                   {"distinct_rows", ch.distinctRows},
                   {"columns", ch.columns},
                   {"cardinalities", ch.cardinalities},
                   {"cardinality_sum", ch.cardinalitySum},
                   {"omega", ch.omega.value()},
                   {"p0", ch.p0.value()},
                   {"omega_threshold", ch.thresholds.omega},
                   {"p0_threshold", ch.thresholds.p0},
                   {"try_non_lexicographic", ch.tryNonLexicographic},
                   {"verdict", ch.verdict()}});
      } else {
        out << std::fixed << std::setprecision(4);
        out << "rows            " << ch.rows << '\n';
        out << "distinct rows   " << ch.distinctRows << '\n';
        out << "columns         " << ch.columns << '\n';
        out << "cardinalities  ";
        for (auto card : ch.cardinalities) out << ' ' << card;
        out << "\ncardinality sum " << ch.cardinalitySum << '\n';
        out << "omega           " << ch.omega.value() << "  (threshold " << ch.thresholds.omega << ")\n";
        out << "p0              " << ch.p0.value() << "  (threshold " << ch.thresholds.p0 << ")\n";
        out << "verdict         " << ch.verdict() << '\n';
      }
    } else if (*generate) {
      const auto table = stage("generate", [&] {
        return generateTable({genRows, genCols, parseDistribution(genDist), genSeed});
      });
      stage("write", [&] { writeColumnar(table, genOut); });
      if (em.records()) {
        em.record({{"type", "generate"}, {"dist", genDist}, {"rows", genRows}, {"columns", genCols}, {"seed", genSeed}});
      } else {
        out << "wrote " << genRows << " x " << genCols << ' ' << genDist << " table to " << genOut << '\n';
      }
    } else if (*reorder) {
      if (reOrder.empty() == reHeuristic.empty()) throw std::invalid_argument("give exactly one of --order or --heuristic");
      if (reOrder.size() > 0 && (rePartition > 0 || reRevert || reBoundary || rePasses != 1)) {
        throw std::invalid_argument("--partition, --revert, --boundary-aware and --passes need --heuristic");
      }
      const auto table = stage("read", [&] { return readColumnar(reIn); });
      const auto policy = parsePolicy(reColumnOrder);
      OrderOptions orderOptions;
      orderOptions.columnOrder = policy;
      orderOptions.normalize = !reNoNormalize;
      if (memoryBudget > 0) orderOptions.sort.memoryBudgetBytes = memoryBudget;
      if (!spillDir.empty()) orderOptions.sort.spillDirectory = spillDir;

      const auto inputRuns = runCount(table, identityOrdering(table.rowCount())).total;
      RowOrdering ordering;
      std::optional<PartitionResult> partitioned;
      if (!reOrder.empty()) {
        ordering = stage("reorder", [&] { return orderRows(table, parseOrderKind(reOrder), orderOptions); });
      } else {
        PartitionPlan plan;
        plan.heuristic = parseHeuristic(reHeuristic);
        plan.partitionSize = rePartition > 0 ? rePartition : std::max<std::size_t>(1, table.rowCount());
        plan.baseOrder = OrderKind::lexicographic;
        plan.baseOrderOptions = orderOptions;
        plan.heuristicOptions.seed = reSeed;
        plan.heuristicOptions.force = reForce;
        plan.heuristicOptions.lists = reLists;
        plan.heuristicOptions.columnOrder = columnOrderFor(table, policy);
        plan.revertIfWorse = reRevert;
        plan.boundaryAware = reBoundary;
        plan.passes = rePasses;
        plan.threads = common.threads;
        if (isQuadratic(plan.heuristic)) {
          checkQuadraticGate(toString(plan.heuristic), std::min(plan.partitionSize, table.rowCount()), reForce);
        }
        if (plan.heuristic == Heuristic::multipleLists && reLists > table.columnCount()) {
          throw std::invalid_argument("--lists must lie in [0, " + std::to_string(table.columnCount()) + "]");
        }
        ProgressSink sink;
        if (em.records()) {
          sink = [&](const PartitionRecord& r) {
            em.record(partitionJson(r));
            return true;
          };
        }
        partitioned = stage("reorder", [&] { return applyPartitioned(table, plan, sink); });
        ordering = partitioned->ordering;
      }
      const auto reordered = table.permuted(ordering);
      if (!reOut.empty()) stage("write", [&] { writeColumnar(reordered, reOut); });
      const auto finalRuns = runCount(table, ordering).total;
      if (em.records()) {
        json j{{"type", "reorder"},
               {"method", reOrder.empty() ? reHeuristic : reOrder},
               {"rows", table.rowCount()},
               {"runcount_input", inputRuns},
               {"runcount", finalRuns}};
        if (partitioned) {
          j["runcount_base"] = partitioned->baseRunCount;
          j["sort_ms"] = partitioned->sortMs;
          j["heuristic_ms"] = partitioned->heuristicMs;
        }
        em.record(j);
      } else {
        out << "rows " << table.rowCount() << '\n';
        out << "runcount input " << inputRuns << '\n';
        if (partitioned) {
          out << "runcount base  " << partitioned->baseRunCount << '\n';
          out << std::fixed << std::setprecision(1) << "sort " << partitioned->sortMs << " ms, heuristic "
              << partitioned->heuristicMs << " ms\n";
        }
        out << "runcount       " << finalRuns << '\n';
      }
      if (!reCodec.empty()) {
        const auto report = stage("size", [&] {
          return compressTable(reordered, identityOrdering(reordered.rowCount()), parseCodecId(reCodec), reBlock);
        });
        emitCodecReport(em, report);
      }
    } else if (*improve) {
      const auto table = stage("read", [&] { return readColumnar(imIn); });
      const RowMatrix rows(table);
      const auto start = identityOrdering(table.rowCount());
      const auto before = pathRunCount(rows, start);
      const auto ordering = stage("improve", [&] {
        switch (parseImproveMethod(imMethod)) {
          case ImproveMethod::reinsert: return improveOneReinsertion(rows, start, imForce);
          case ImproveMethod::ahdo: return improveAHDO(rows, start);
          case ImproveMethod::peephole: return improvePeephole(rows, start, imBlock);
        }
        throw std::invalid_argument("unknown method");
      });
      const auto after = pathRunCount(rows, ordering);
      if (!imOut.empty()) stage("write", [&] { writeColumnar(table.permuted(ordering), imOut); });
      if (em.records()) {
        em.record({{"type", "improve"}, {"method", imMethod}, {"runcount_before", before}, {"runcount_after", after}});
      } else {
        out << "runcount before " << before << "\nruncount after  " << after << '\n';
      }
    } else if (*size) {
      const auto table = stage("read", [&] { return readColumnar(sizeIn); });
      const auto report = stage("size", [&] {
        return compressTable(table, identityOrdering(table.rowCount()), parseCodecId(sizeCodec), sizeBlock);
      });
      emitCodecReport(em, report);
    } else if (*bench) {
      BenchConfig config;
      config.distribution = parseDistribution(benchSuite);
      config.rows = parseRowList(benchRows);
      config.methods = parseMethodList(benchMethods);
      config.repetitions = benchReps;
      config.columns = benchCols;
      config.seed = benchSeed;
      if (benchCap > 0) config.rowCap = benchCap;
      const auto report = stage("bench", [&] { return runBenchmark(config); });
      if (!benchOut.empty()) {
        std::ofstream f(benchOut, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + benchOut);
        f << reportToJson(report) << '\n';
      }
      if (em.records()) {
        for (const auto& cell : report.cells) {
          json j{{"type", "bench"}, {"method", toString(cell.method)}, {"rows", cell.rows}, {"skipped", cell.skipped}};
          if (!cell.skipped && cell.error.empty()) {
            j["median_reduction"] = cell.medianReduction;
            j["median_seconds"] = cell.medianSeconds;
          }
          if (!cell.error.empty()) j["error"] = cell.error;
          em.record(j);
        }
      } else {
        printReportTable(report, out);
      }
    }
  } catch (const HeuristicGateError& e) {
    err << "error: " << e.what() << '\n';
    return kExitGateRefused;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataFormat;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace rowreorder
