#include "rowreorder/datagen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rowreorder {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view toString(Distribution d) { return d == Distribution::zipf ? "zipf" : "uniform"; }

Distribution parseDistribution(std::string_view name) {
  if (name == "zipf") return Distribution::zipf;
  if (name == "uniform") return Distribution::uniform;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

std::uint64_t columnSeed(std::uint64_t seed, std::uint64_t column) {
  return splitmix64(splitmix64(seed) ^ splitmix64(column + 0x632BE59BD9B4E019ULL));
}

Table generateTable(const GenSpec& spec) {
  if (spec.rows == 0 || spec.columns == 0) throw std::invalid_argument("generate: rows and columns must be >= 1");
  const std::size_t n = spec.rows;
  std::vector<double> cumulative;
  if (spec.distribution == Distribution::zipf) {
    cumulative.resize(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += 1.0 / static_cast<double>(i + 1);
      cumulative[i] = sum;
    }
  }

  std::vector<std::vector<std::int64_t>> columns(spec.columns, std::vector<std::int64_t>(n));
  const auto cols = static_cast<std::ptrdiff_t>(spec.columns);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    std::mt19937_64 gen(columnSeed(spec.seed, static_cast<std::uint64_t>(c)));
    auto& col = columns[c];
    if (spec.distribution == Distribution::uniform) {
      std::uniform_int_distribution<std::int64_t> pick(1, static_cast<std::int64_t>(n));
      for (auto& v : col) v = pick(gen);
    } else {
      std::uniform_real_distribution<double> unit(0.0, cumulative.back());
      for (auto& v : col) {
        const double u = unit(gen);
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        v = std::min<std::int64_t>(static_cast<std::int64_t>(it - cumulative.begin()), static_cast<std::int64_t>(n) - 1) + 1;
      }
    }
  }
  return dictionaryEncode(columns);
}

Table generateZipf(std::size_t rows, std::size_t columns, std::uint64_t seed) {
  return generateTable({rows, columns, Distribution::zipf, seed});
}

Table generateUniform(std::size_t rows, std::size_t columns, std::uint64_t seed) {
  return generateTable({rows, columns, Distribution::uniform, seed});
}

Table shuffleColumnsIndependently(const Table& table, std::uint64_t seed) {
  std::vector<std::vector<Code>> columns;
  columns.reserve(table.columnCount());
  for (std::size_t c = 0; c < table.columnCount(); ++c) {
    auto col = table.column(c);
    std::vector<Code> shuffled(col.begin(), col.end());
    std::mt19937_64 gen(columnSeed(seed, c));
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    columns.push_back(std::move(shuffled));
  }
  return Table::fromCodes(std::move(columns), table.dictionaries());
}

}  // namespace rowreorder
