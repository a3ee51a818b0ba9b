#include <doctest.h>

#include "oracles.hpp"
#include "rowreorder/datagen.hpp"
#include "rowreorder/metrics.hpp"

using namespace rowreorder;

namespace {

/// Occurrences of the original value `v` in column `c` (values are 1-based decimals).
std::uint64_t countValue(const Table& t, std::size_t c, std::int64_t v) {
  const auto& dict = t.dictionary(c);
  const auto it = std::find(dict.begin(), dict.end(), std::to_string(v));
  if (it == dict.end()) return 0;
  const Code code = static_cast<Code>(it - dict.begin());
  return static_cast<std::uint64_t>(std::count(t.column(c).begin(), t.column(c).end(), code));
}

std::vector<std::vector<std::uint64_t>> histograms(const Table& t) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::size_t c = 0; c < t.columnCount(); ++c) {
    std::vector<std::uint64_t> h(t.cardinality(c));
    for (auto v : t.column(c)) ++h[v];
    out.push_back(h);
  }
  return out;
}

}  // namespace

TEST_CASE("generators are deterministic per seed") {
  CHECK(generateZipf(2000, 3, 5) == generateZipf(2000, 3, 5));
  CHECK(generateUniform(2000, 3, 5) == generateUniform(2000, 3, 5));
  CHECK(!(generateZipf(2000, 3, 5) == generateZipf(2000, 3, 6)));
  CHECK(generateTable({100, 2, Distribution::uniform, 1}) == generateUniform(100, 2, 1));
  CHECK_THROWS_AS(generateTable({0, 2, Distribution::zipf, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generateTable({5, 0, Distribution::zipf, 1}), std::invalid_argument);
  CHECK((parseDistribution("uniform") == Distribution::uniform));
  CHECK_THROWS_AS(parseDistribution("normal"), std::invalid_argument);
}

TEST_CASE("zipf frequencies fall off as 1/i") {
  const auto t = generateZipf(200000, 2, 3);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::int64_t i = 1; i <= 4; ++i) {
      const double ratio = static_cast<double>(countValue(t, c, i)) / static_cast<double>(countValue(t, c, 2 * i));
      CAPTURE(i);
      CHECK(ratio == doctest::Approx(2.0).epsilon(0.10));
    }
  }
  const auto small = generateZipf(100000, 1, 4);
  const double r12 = static_cast<double>(countValue(small, 0, 1)) / static_cast<double>(countValue(small, 0, 2));
  CHECK(r12 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("generated tables have the expected omega and dispersion") {
  const auto z = generateZipf(8192, 4, 1);
  CHECK(omegaBound(computeColumnStats(z)).value() == doctest::Approx(3.0).epsilon(0.5 / 3.0));
  const auto u = generateUniform(8192, 4, 1);
  CHECK(omegaBound(computeColumnStats(u)).value() == doctest::Approx(3.6).epsilon(0.3 / 3.6));
  CHECK(dispersionP0(u).value() < 0.01);
  for (std::size_t c = 0; c < 4; ++c) CHECK(u.cardinality(c) <= 8192);
}

TEST_CASE("independent column shuffles keep histograms") {
  const auto t = generateZipf(3000, 3, 2);
  const auto s = shuffleColumnsIndependently(t, 7);
  CHECK(histograms(s) == histograms(t));
  CHECK(!(s == t));
  CHECK(shuffleColumnsIndependently(t, 7) == s);
  const auto one = generateZipf(1, 3, 2);
  CHECK(shuffleColumnsIndependently(one, 1) == one);
}

TEST_CASE("shuffling breaks correlation between columns") {
  // Two copies of the same column: only 50 distinct rows before shuffling.
  std::vector<std::int64_t> col;
  for (int i = 0; i < 1000; ++i) col.push_back(i % 50);
  const auto t = dictionaryEncode(std::vector<std::vector<std::int64_t>>{col, col});
  const auto s = shuffleColumnsIndependently(t, 3);
  const auto before = oracle::distinctCount(oracle::rowsOf(t)), after = oracle::distinctCount(oracle::rowsOf(s));
  MESSAGE("distinct rows " << before << " -> " << after);
  CHECK(after >= before);
}

TEST_CASE("column seeds differ") {
  CHECK(columnSeed(1, 0) != columnSeed(1, 1));
  CHECK(columnSeed(1, 0) != columnSeed(2, 0));
}
