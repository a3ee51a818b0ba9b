#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "figures.hpp"
#include "oracles.hpp"
#include "rowreorder/comparators.hpp"
#include "rowreorder/datagen.hpp"
#include "rowreorder/errors.hpp"
#include "rowreorder/metrics.hpp"
#include "rowreorder/sorting.hpp"

using namespace rowreorder;

namespace {

std::vector<Code> tup(std::initializer_list<Code> v) { return v; }

/// All tuples of the mixed-radix product space, lexicographically, 0-based.
std::vector<std::vector<Code>> productSpace(const std::vector<Code>& radices) {
  std::vector<std::vector<Code>> out{{}};
  for (Code r : radices) {
    std::vector<std::vector<Code>> next;
    for (const auto& prefix : out) {
      for (Code v = 0; v < r; ++v) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(t);
      }
    }
    out = std::move(next);
  }
  return out;
}

Table productTable(const std::vector<Code>& radices) {
  oracle::Rows rows;
  for (const auto& t : productSpace(radices)) rows.emplace_back(t.begin(), t.end());
  return tableFromRows(rows);
}

figures::Rows plusOne(const oracle::Rows& rows) {
  figures::Rows out = rows;
  for (auto& r : out)
    for (auto& v : r) ++v;
  return out;
}

std::uint64_t maxStep(const Table& t, const RowOrdering& o) {
  const RowMatrix m(t);
  unsigned worst = 0;
  for (std::size_t k = 1; k < o.size(); ++k) worst = std::max(worst, hammingUnchecked(m.row(o[k - 1]), m.row(o[k])));
  return worst;
}

unsigned minStep(const Table& t, const RowOrdering& o) {
  const RowMatrix m(t);
  unsigned best = ~0u;
  for (std::size_t k = 1; k < o.size(); ++k) best = std::min(best, hammingUnchecked(m.row(o[k - 1]), m.row(o[k])));
  return best;
}

OrderOptions natural() {
  OrderOptions o;
  o.columnOrder = ColumnOrderPolicy::natural;
  return o;
}

}  // namespace

TEST_CASE("lexicographic comparator") {
  CHECK(compareLexicographic(tup({0, 2}), tup({1, 0})) < 0);
  CHECK(compareLexicographic(tup({1, 2}), tup({1, 2})) == 0);
  const std::vector<std::uint32_t> swapped{1, 0};
  CHECK(compareLexicographic(tup({0, 2}), tup({1, 0}), swapped) > 0);
}

TEST_CASE("sorting a shuffle of the example table restores its listing") {
  auto rows = figures::kInitial;
  std::mt19937_64 rng(1);
  std::shuffle(rows.begin(), rows.end(), rng);
  const auto t = tableFromRows(rows);
  // Dictionary codes are frequency ordered, so compare through the raw values.
  std::vector<RowId> ord(t.rowCount());
  std::iota(ord.begin(), ord.end(), 0u);
  std::stable_sort(ord.begin(), ord.end(), [&](RowId a, RowId b) { return rows[a] < rows[b]; });
  CHECK(oracle::permute(rows, ord) == figures::kInitial);
  // Codes are frequency ranks, so sorting the table orders code tuples.
  const auto coded = tableFromRows(figures::kInitial);
  auto codeRows = oracle::rowsOf(coded);
  std::sort(codeRows.begin(), codeRows.end());
  const auto lex = orderRows(coded, OrderKind::lexicographic, natural());
  CHECK(oracle::permute(oracle::rowsOf(coded), lex) == codeRows);
  CHECK(runCount(coded, lex).total == oracle::runs(codeRows));
}

TEST_CASE("reflected GC comparator") {
  const Code n2 = 3;
  CHECK(compareReflectedGC(tup({0, n2}), tup({1, n2})) < 0);
  CHECK(compareReflectedGC(tup({1, n2}), tup({1, n2 - 1})) < 0);
  CHECK(compareReflectedGC(tup({2, 1}), tup({2, 1})) == 0);
  const auto t = productTable({4, 4});
  const auto o = orderRows(t, OrderKind::reflectedGC, natural());
  CHECK(plusOne(oracle::permute(oracle::rowsOf(t), o)) == figures::kReflected44);
}

TEST_CASE("vortex comparator") {
  CHECK(compareVortex(tup({0, 3}), tup({0, 2})) < 0);
  CHECK(compareVortex(tup({1, 1}), tup({1, 1})) == 0);
  const auto t = productTable({4, 4});
  OrderOptions o = natural();
  o.normalize = false;
  const auto ord = orderRows(t, OrderKind::vortex, o);
  CHECK(plusOne(oracle::permute(oracle::rowsOf(t), ord)) == figures::kVortex44);
}

TEST_CASE("frequent-component sort of the example table") {
  const auto t = tableFromRows(figures::kInitial);
  const auto o = orderRows(t, OrderKind::frequentComponent, natural());
  CHECK(oracle::permute(figures::kInitial, o) == figures::kFrequentComponentSolution);
  CHECK(oracle::permute(figures::kInitial, o).front() == std::vector<std::int64_t>{7, 4});
}

TEST_CASE("frequent-component on uniform histograms matches lexicographic") {
  // {1,2} x {1,2,3,4}: every value of a column is equally frequent.
  const auto t = productTable({2, 4});
  const auto fc = orderRows(t, OrderKind::frequentComponent);
  const auto lex = orderRows(t, OrderKind::lexicographic);
  CHECK(fc == lex);
  CHECK(RowComparator::forTable(OrderKind::lexicographic, t).columnOrder() == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("normalization by frequency") {
  const auto t = tableFromRows(figures::kInitial);
  const auto n = normalizeByFrequency(t);
  CHECK(plusOne(oracle::rowsOf(n.table)) == figures::kNormalized);
  const auto again = normalizeByFrequency(n.table);
  CHECK(oracle::rowsOf(again.table) == oracle::rowsOf(n.table));
  const auto constant = normalizeByFrequency(tableFromRows({{5}, {5}, {5}}));
  CHECK(oracle::rowsOf(constant.table) == oracle::Rows{{0}, {0}, {0}});
  // Every inverse maps a rank back to the original code.
  for (std::size_t c = 0; c < t.columnCount(); ++c) {
    for (std::size_t r = 0; r < t.rowCount(); ++r) CHECK(n.inverse[c][n.table.at(r, c)] == t.at(r, c));
  }
}

TEST_CASE("vortex pipeline on the example table") {
  const auto t = tableFromRows(figures::kInitial);
  const auto o = orderRows(t, OrderKind::vortex, natural());
  CHECK(oracle::permute(figures::kNormalized, o) == figures::kVortexSolution);
}

TEST_CASE("comparators are total orders") {
  std::mt19937_64 rng(17);
  const auto base = tableFromRows(oracle::randomRows(rng, 300, 4, 5));
  const std::vector<RowComparator> cmps{
      RowComparator::forTable(OrderKind::lexicographic, base),
      RowComparator::forTable(OrderKind::reflectedGC, base),
      RowComparator::forTable(OrderKind::vortex, base),
      RowComparator::forTable(OrderKind::frequentComponent, base),
  };
  std::uniform_int_distribution<Code> v(0, 3);
  auto draw = [&] {
    std::vector<Code> x(4);
    for (auto& e : x) e = v(rng);
    return x;
  };
  for (const auto& cmp : cmps) {
    for (int i = 0; i < 100000; ++i) {
      const auto x = draw(), y = draw();
      const auto xy = cmp(x, y), yx = cmp(y, x);
      REQUIRE((xy == 0) == (x == y));
      REQUIRE((xy < 0) == (yx > 0));
      if (i % 4 == 0) {
        const auto z = draw();
        if (cmp(x, y) <= 0 && cmp(y, z) <= 0) REQUIRE(cmp(x, z) <= 0);
      }
    }
  }
}

TEST_CASE("gray-code property over full product spaces") {
  for (Code n = 2; n <= 5; ++n) {
    for (std::size_t c = 1; c <= 3; ++c) {
      const auto t = productTable(std::vector<Code>(c, n));
      OrderOptions o = natural();
      o.normalize = false;
      for (auto kind : {OrderKind::vortex, OrderKind::reflectedGC}) {
        const auto ord = orderRows(t, kind, o);
        CAPTURE(n);
        CAPTURE(c);
        REQUIRE(maxStep(t, ord) == 1);
        REQUIRE(minStep(t, ord) == 1);
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < c; ++i) total *= n;
        REQUIRE(runCount(t, ord).total == total + c - 1);
      }
      std::uint64_t lexRuns = 0, prod = 1;
      for (std::size_t j = 0; j < c; ++j) lexRuns += (prod *= n);
      REQUIRE(runCount(t, orderRows(t, OrderKind::lexicographic, o)).total == lexRuns);
    }
  }
}

TEST_CASE("vortex gray code over mixed radices N..N, N-1..N-1") {
  for (Code n = 3; n <= 5; ++n) {
    for (std::size_t c = 2; c <= 3; ++c) {
      for (std::size_t k = 1; k < c; ++k) {
        std::vector<Code> radices(c, n);
        for (std::size_t i = k; i < c; ++i) radices[i] = n - 1;
        // Raw product codes: keep the values as they are.
        std::vector<std::vector<Code>> cols(c);
        for (const auto& tpl : productSpace(radices))
          for (std::size_t i = 0; i < c; ++i) cols[i].push_back(tpl[i]);
        const auto t = Table::fromCodes(cols);
        OrderOptions o = natural();
        o.normalize = false;
        CAPTURE(n);
        CAPTURE(c);
        CAPTURE(k);
        REQUIRE(maxStep(t, orderRows(t, OrderKind::vortex, o)) == 1);
      }
    }
  }
}

TEST_CASE("tuples holding the most frequent value in the first k positions come first under vortex") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<Code> v(0, 4);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t c = 2 + rng() % 3;
    const std::size_t k = 1 + rng() % c;
    std::vector<Code> x(c), y(c);
    for (auto& e : x) e = v(rng);
    for (auto& e : y) e = v(rng);
    auto hasZero = [&](const std::vector<Code>& z) { return std::find(z.begin(), z.begin() + k, 0u) != z.begin() + k; };
    if (hasZero(x) && !hasZero(y)) REQUIRE(compareVortex(x, y) < 0);
    if (hasZero(y) && !hasZero(x)) REQUIRE(compareVortex(x, y) > 0);
  }
}

TEST_CASE("vortex is nearly indifferent to the column order") {
  auto relativeGap = [](const Table& t) {
    const auto inc = columnOrderByCardinality(t);
    const std::vector<std::uint32_t> dec(inc.rbegin(), inc.rend());
    const auto n = normalizeByFrequency(t).table;
    const double a = static_cast<double>(runCount(n, sortRows(n, RowComparator::vortex(inc))).total);
    const double b = static_cast<double>(runCount(n, sortRows(n, RowComparator::vortex(dec))).total);
    return std::abs(a - b) / std::min(a, b);
  };
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CHECK(relativeGap(generateZipf(8192, 4, seed)) < 0.01);
    CHECK(relativeGap(generateUniform(8192, 4, seed)) < 0.01);
    // Columns with different skews so the two cardinality orders differ.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::int64_t>> cols(4, std::vector<std::int64_t>(50000));
    for (std::size_t c = 0; c < 4; ++c) {
      std::geometric_distribution<int> g(0.15 + 0.2 * static_cast<double>(c));
      for (auto& x : cols[c]) x = g(rng);
    }
    CHECK(relativeGap(dictionaryEncode(cols)) < 0.01);
  }
}

TEST_CASE("sorting is stable and sorted input stays put") {
  const auto t = productTable({3, 3});
  CHECK(orderRows(t, OrderKind::lexicographic, natural()) == identityOrdering(9));
  const auto dup = tableFromRows({{2, 1}, {1, 1}, {2, 1}, {1, 1}});
  CHECK(orderRows(dup, OrderKind::lexicographic, natural()) == RowOrdering{0, 2, 1, 3});
}

TEST_CASE("external sort matches the in-memory sort") {
  std::mt19937_64 rng(29);
  const auto dir = std::filesystem::temp_directory_path() / "rowreorder-sort-test";
  std::filesystem::create_directories(dir);
  for (int t = 0; t < 12; ++t) {
    const auto table = tableFromRows(oracle::randomRows(rng, 50 + rng() % 3000, 1 + rng() % 4, 2 + rng() % 8));
    for (auto kind : {OrderKind::lexicographic, OrderKind::reflectedGC, OrderKind::vortex, OrderKind::frequentComponent}) {
      const auto cmp = RowComparator::forTable(kind, table);
      const auto inMemory = sortRows(table, cmp);
      SortOptions tiny;
      tiny.memoryBudgetBytes = 64 * (4 * table.columnCount() + 8);
      tiny.spillDirectory = dir;
      REQUIRE(sortRows(table, cmp, tiny) == inMemory);
      SortOptions narrow = tiny;
      narrow.maxFanIn = 3;
      REQUIRE(sortRows(table, cmp, narrow) == inMemory);
    }
  }
  CHECK(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

TEST_CASE("external sort reports spill failures") {
  const auto table = productTable({5, 5, 5});
  SortOptions opts;
  opts.memoryBudgetBytes = 100;
  opts.spillDirectory = "/nonexistent/rowreorder/spill";
  CHECK_THROWS_AS(sortRows(table, RowComparator::lexicographic(), opts), SpillError);
}

TEST_CASE("spill directory falls back to the environment variable") {
  const auto dir = std::filesystem::temp_directory_path() / "rowreorder-env-spill";
  std::filesystem::create_directories(dir);
  ::setenv(kSpillDirEnv, dir.c_str(), 1);
  const auto table = productTable({6, 6, 6});
  SortOptions opts;
  opts.memoryBudgetBytes = 20 * 20;
  CHECK(sortRows(table, RowComparator::lexicographic(), opts) == sortRows(table, RowComparator::lexicographic()));
  ::setenv(kSpillDirEnv, "/nonexistent/rowreorder/env", 1);
  CHECK_THROWS_AS(sortRows(table, RowComparator::lexicographic(), opts), SpillError);
  ::unsetenv(kSpillDirEnv);
  std::filesystem::remove_all(dir);
}

TEST_CASE("order kind spellings") {
  CHECK((parseOrderKind("gray") == OrderKind::reflectedGC));
  CHECK(toString(OrderKind::frequentComponent) == "fc");
  CHECK_THROWS_AS(parseOrderKind("hilbert"), std::invalid_argument);
}
