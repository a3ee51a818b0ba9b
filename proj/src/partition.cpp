#include "rowreorder/partition.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <stdexcept>

#include "rowreorder/codecs.hpp"
#include "rowreorder/metrics.hpp"

namespace rowreorder {

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Segment> cutSegments(std::size_t n, std::size_t size, std::size_t firstSize) {
  std::vector<Segment> out;
  std::size_t b = 0;
  std::size_t len = firstSize == 0 ? size : firstSize;
  while (b < n) {
    const std::size_t e = std::min(n, b + len);
    out.push_back({b, e});
    b = e;
    len = size;
  }
  return out;
}

struct PartitionWork {
  RowOrdering candidate;  // global row ids, empty when the heuristic failed
  std::string error;
  double elapsedMs = 0;
};

// Per-column runs of `rows` taken in `path` order, folded into an RLE size.
std::uint64_t rleBits(const RowMatrix& rows, std::span<const RowId> path, const Table& table) {
  if (path.empty()) return 0;
  std::uint64_t bits = 0;
  const unsigned wn = bitWidth(table.rowCount());
  for (std::size_t c = 0; c < rows.columnCount(); ++c) {
    std::uint64_t runs = 1;
    for (std::size_t k = 1; k < path.size(); ++k) runs += rows.row(path[k - 1])[c] != rows.row(path[k])[c];
    bits += runs * (bitWidth(table.cardinality(c)) + 2ULL * wn);
  }
  return bits;
}

class PassRunner {
 public:
  PassRunner(const Table& table, const PartitionPlan& plan, HeuristicOptions options, const ProgressSink& sink,
             PartitionResult& result)
      : table_(table), plan_(plan), options_(std::move(options)), sink_(sink), result_(result) {}

  // Runs one pass over `current` and returns the new ordering.
  RowOrdering run(const RowOrdering& current, unsigned pass, std::size_t firstSize) {
    const auto segments = cutSegments(current.size(), plan_.partitionSize, firstSize);
    const std::size_t parts = segments.size();
    std::vector<RowOrdering> chosen(parts);
    std::vector<std::uint8_t> improved(parts, 0);
    std::vector<PartitionRecord*> recordOf(parts, nullptr);
    const std::size_t recordBase = result_.records.size();

    const int workers = plan_.threads > 0 ? plan_.threads : omp_get_max_threads();
    const std::size_t wave = static_cast<std::size_t>(std::max(1, workers)) * 4;
    std::size_t done = 0;
    const auto t0 = Clock::now();
    while (done < parts && !result_.aborted) {
      const std::size_t waveEnd = std::min(parts, done + wave);
      std::vector<PartitionWork> work(waveEnd - done);
      const auto count = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        work[i] = runPartition(current, segments, done + static_cast<std::size_t>(i), pass);
      }
      for (std::size_t i = 0; i < work.size() && !result_.aborted; ++i) {
        const std::size_t k = done + i;
        const auto& seg = segments[k];
        const std::span<const RowId> base(current.data() + seg.begin, seg.end - seg.begin);
        PartitionRecord rec = measure(base, work[i], pass, k);
        if (!rec.reverted) {
          chosen[k] = std::move(work[i].candidate);
          improved[k] = 1;
        }
        result_.records.push_back(rec);
        if (sink_ && !sink_(result_.records.back())) result_.aborted = true;
      }
      done = waveEnd;
    }
    result_.heuristicMs += msSince(t0);
    for (std::size_t k = 0; k < parts && recordBase + k < result_.records.size(); ++k) {
      recordOf[k] = &result_.records[recordBase + k];
    }

    // Anything not accepted keeps the base order.
    for (std::size_t k = 0; k < parts; ++k) {
      if (!improved[k]) {
        chosen[k].assign(current.begin() + static_cast<std::ptrdiff_t>(segments[k].begin),
                         current.begin() + static_cast<std::ptrdiff_t>(segments[k].end));
      }
    }
    if (plan_.revertIfWorse) chooseAgainstBase(current, segments, chosen, improved, recordOf);

    RowOrdering out;
    out.reserve(current.size());
    for (auto& part : chosen) out.insert(out.end(), part.begin(), part.end());
    return out;
  }

 private:
  PartitionWork runPartition(const RowOrdering& current, const std::vector<Segment>& segments, std::size_t k,
                             unsigned pass) const {
    PartitionWork w;
    const auto t0 = Clock::now();
    const auto& seg = segments[k];
    const std::span<const RowId> base(current.data() + seg.begin, seg.end - seg.begin);
    try {
      const RowMatrix rows(table_, base);
      HeuristicOptions opts = options_;
      opts.seed = options_.seed + (static_cast<std::uint64_t>(pass) << 40) + k;
      opts.startRow.reset();
      if (plan_.boundaryAware && seg.begin > 0) opts.startRow = nearestTo(rows, current[seg.begin - 1]);
      const auto local = runHeuristic(plan_.heuristic, rows, opts);
      validatePermutation(local, base.size());
      w.candidate.resize(local.size());
      for (std::size_t i = 0; i < local.size(); ++i) w.candidate[i] = base[local[i]];
    } catch (const std::exception& e) {
      w.candidate.clear();
      w.error = e.what();
    }
    w.elapsedMs = msSince(t0);
    return w;
  }

  RowId nearestTo(const RowMatrix& rows, RowId tableRow) const {
    const auto target = table_.rowTuple(tableRow);
    RowId best = 0;
    unsigned bestDist = ~0U;
    for (RowId r = 0; r < rows.rowCount(); ++r) {
      const unsigned d = hammingUnchecked(rows.row(r), target);
      if (d < bestDist) {
        bestDist = d;
        best = r;
      }
    }
    return best;
  }

  PartitionRecord measure(std::span<const RowId> base, const PartitionWork& w, unsigned pass, std::size_t k) {
    const RowMatrix global(table_, base);
    const auto localIdentity = identityOrdering(base.size());
    PartitionRecord rec;
    rec.pass = pass;
    rec.index = k;
    rec.rows = base.size();
    rec.elapsedMs = w.elapsedMs;
    rec.error = w.error;
    rec.runCountBefore = pathRunCount(global, localIdentity);
    const std::uint64_t rleBefore = rleBits(global, localIdentity, table_);
    std::uint64_t rleAfter = rleBefore;
    rec.runCountAfter = rec.runCountBefore;
    if (!w.error.empty()) {
      rec.reverted = true;
    } else {
      // Positions of the candidate rows inside `base`.
      std::vector<RowId> local(w.candidate.size());
      std::vector<std::pair<RowId, RowId>> pos(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) pos[i] = {base[i], static_cast<RowId>(i)};
      std::sort(pos.begin(), pos.end());
      for (std::size_t i = 0; i < w.candidate.size(); ++i) {
        local[i] = std::lower_bound(pos.begin(), pos.end(), std::pair<RowId, RowId>{w.candidate[i], 0})->second;
      }
      const auto after = pathRunCount(global, local);
      if (plan_.revertIfWorse && after > rec.runCountBefore) {
        rec.reverted = true;
      } else {
        rec.runCountAfter = after;
        rleAfter = rleBits(global, local, table_);
      }
    }
    cumulativeBefore_ += rec.runCountBefore;
    cumulativeAfter_ += rec.runCountAfter;
    rleBefore_ += rleBefore;
    rleAfter_ += rleAfter;
    rec.cumulativeBefore = cumulativeBefore_;
    rec.cumulativeAfter = cumulativeAfter_;
    rec.cumulativeRleBitsBefore = rleBefore_;
    rec.cumulativeRleBitsAfter = rleAfter_;
    return rec;
  }

  // Picks base or new order per partition minimizing the total path cost,
  // boundary edges included. The all-base choice is feasible, so the result
  // never costs more than `current`.
  void chooseAgainstBase(const RowOrdering& current, const std::vector<Segment>& segments,
                         std::vector<RowOrdering>& chosen, const std::vector<std::uint8_t>& improved,
                         const std::vector<PartitionRecord*>& recordOf) const {
    const std::size_t parts = segments.size();
    if (parts == 0) return;
    auto dist = [&](RowId a, RowId b) -> std::uint64_t {
      std::uint64_t d = 0;
      for (std::size_t c = 0; c < table_.columnCount(); ++c) d += table_.at(a, c) != table_.at(b, c);
      return d;
    };
    auto inner = [&](std::span<const RowId> p) {
      std::uint64_t s = 0;
      for (std::size_t i = 1; i < p.size(); ++i) s += dist(p[i - 1], p[i]);
      return s;
    };
    std::vector<std::array<std::span<const RowId>, 2>> option(parts);
    for (std::size_t k = 0; k < parts; ++k) {
      option[k][0] = std::span<const RowId>(current.data() + segments[k].begin, segments[k].end - segments[k].begin);
      option[k][1] = improved[k] ? std::span<const RowId>(chosen[k]) : option[k][0];
    }
    constexpr std::uint64_t kInf = ~std::uint64_t{0};
    std::vector<std::array<std::uint64_t, 2>> cost(parts, {kInf, kInf});
    std::vector<std::array<std::uint8_t, 2>> back(parts, {0, 0});
    for (int s = 0; s < 2; ++s) cost[0][s] = inner(option[0][s]);
    for (std::size_t k = 1; k < parts; ++k) {
      for (int s = 0; s < 2; ++s) {
        const auto own = inner(option[k][s]);
        for (int t = 0; t < 2; ++t) {
          const auto c = cost[k - 1][t] + dist(option[k - 1][t].back(), option[k][s].front()) + own;
          // Prefer the base state on ties by visiting it first.
          if (c < cost[k][s]) {
            cost[k][s] = c;
            back[k][s] = static_cast<std::uint8_t>(t);
          }
        }
      }
    }
    int state = cost[parts - 1][1] < cost[parts - 1][0] ? 1 : 0;
    for (std::size_t k = parts; k-- > 0;) {
      if (state == 0 && improved[k]) {
        chosen[k].assign(option[k][0].begin(), option[k][0].end());
        if (recordOf[k] != nullptr && !recordOf[k]->reverted) recordOf[k]->reverted = true;
      }
      if (k > 0) state = back[k][state];
    }
  }

  const Table& table_;
  const PartitionPlan& plan_;
  HeuristicOptions options_;
  const ProgressSink& sink_;
  PartitionResult& result_;
  std::uint64_t cumulativeBefore_ = 0;
  std::uint64_t cumulativeAfter_ = 0;
  std::uint64_t rleBefore_ = 0;
  std::uint64_t rleAfter_ = 0;
};

}  // namespace

PartitionResult applyPartitioned(const Table& table, const PartitionPlan& plan, const ProgressSink& sink) {
  if (plan.partitionSize == 0) throw std::invalid_argument("partition size must be >= 1");
  if (plan.passes < 1 || plan.passes > 2) throw std::invalid_argument("passes must be 1 or 2");

  PartitionResult result;
  const auto t0 = Clock::now();
  if (plan.baseOrdering) {
    validatePermutation(*plan.baseOrdering, table.rowCount());
    result.baseOrdering = *plan.baseOrdering;
  } else {
    result.baseOrdering = orderRows(table, plan.baseOrder, plan.baseOrderOptions);
  }
  result.sortMs = msSince(t0);
  result.baseRunCount = runCount(table, result.baseOrdering).total;

  HeuristicOptions options = plan.heuristicOptions;
  if (plan.heuristic == Heuristic::multipleLists && options.columnOrder.empty()) {
    options.columnOrder = columnOrderByCardinality(table);
  }
  PassRunner runner(table, plan, options, sink, result);
  RowOrdering current = result.baseOrdering;
  for (unsigned pass = 0; pass < plan.passes && !result.aborted; ++pass) {
    const std::size_t firstSize = pass == 0 ? 0 : plan.partitionSize / 2;
    if (pass > 0 && firstSize == 0) break;
    current = runner.run(current, pass, firstSize);
  }
  result.ordering = std::move(current);
  result.runCount = runCount(table, result.ordering).total;
  return result;
}

}  // namespace rowreorder
