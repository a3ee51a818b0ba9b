#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rowreorder/kernels.hpp"
#include "rowreorder/metrics.hpp"

using namespace rowreorder;

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(107);
  for (int threads : {0, 1, 3}) {
    kernels::setThreadCount(threads);
    for (int t = 0; t < 20; ++t) {
      const auto table = tableFromRows(oracle::randomRows(rng, 1 + rng() % 3000, 1 + rng() % 8, 2 + rng() % 40));
      auto ord = identityOrdering(table.rowCount());
      std::shuffle(ord.begin(), ord.end(), rng);
      REQUIRE(kernels::parallel::columnRuns(table, ord) == kernels::serial::columnRuns(table, ord));
      REQUIRE(kernels::parallel::histograms(table) == kernels::serial::histograms(table));
      REQUIRE(kernels::serial::columnRuns(table, ord) == oracle::runsPerColumn(oracle::permute(oracle::rowsOf(table), ord)));
    }
  }
  kernels::setThreadCount(0);
}

TEST_CASE("thread cap") {
  kernels::setThreadCount(2);
  CHECK(kernels::threadCount() == 2);
  kernels::setThreadCount(0);
  CHECK(kernels::threadCount() >= 1);
}
