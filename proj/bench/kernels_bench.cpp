// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <random>

#include "rowreorder/codecs.hpp"
#include "rowreorder/datagen.hpp"
#include "rowreorder/kernels.hpp"
#include "rowreorder/partition.hpp"

using namespace rowreorder;

namespace {

const Table& sampleTable(std::size_t rows) {
  static std::map<std::size_t, Table> cache;
  auto it = cache.find(rows);
  if (it == cache.end()) it = cache.emplace(rows, generateZipf(rows, 8, 42)).first;
  return it->second;
}

RowOrdering shuffled(std::size_t n) {
  auto o = identityOrdering(n);
  std::mt19937_64 rng(1);
  std::shuffle(o.begin(), o.end(), rng);
  return o;
}

void columnRunsSerial(benchmark::State& state) {
  const auto& t = sampleTable(state.range(0));
  const auto o = shuffled(t.rowCount());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::columnRuns(t, o));
  state.SetItemsProcessed(state.iterations() * t.rowCount() * t.columnCount());
}

void columnRunsParallel(benchmark::State& state) {
  const auto& t = sampleTable(state.range(0));
  const auto o = shuffled(t.rowCount());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::columnRuns(t, o));
  state.SetItemsProcessed(state.iterations() * t.rowCount() * t.columnCount());
}

void histogramsSerial(benchmark::State& state) {
  const auto& t = sampleTable(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::histograms(t));
}

void histogramsParallel(benchmark::State& state) {
  const auto& t = sampleTable(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::histograms(t));
}

void compressSerial(benchmark::State& state) {
  const auto& t = sampleTable(state.range(0));
  const auto o = identityOrdering(t.rowCount());
  for (auto _ : state) benchmark::DoNotOptimize(compressTableSerial(t, o, CodecId::sparse));
}

void compressParallel(benchmark::State& state) {
  const auto& t = sampleTable(state.range(0));
  const auto o = identityOrdering(t.rowCount());
  for (auto _ : state) benchmark::DoNotOptimize(compressTable(t, o, CodecId::sparse));
}

void partitionedMultipleLists(benchmark::State& state) {
  const auto& t = sampleTable(1 << 17);
  PartitionPlan plan;
  plan.partitionSize = 8192;
  plan.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(applyPartitioned(t, plan).runCount);
}

}  // namespace

BENCHMARK(columnRunsSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(columnRunsParallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(histogramsSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(histogramsParallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(compressSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(compressParallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(partitionedMultipleLists)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
