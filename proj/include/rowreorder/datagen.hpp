#pragma once

#include <cstdint>
#include <string_view>

#include "rowreorder/table.hpp"

namespace rowreorder {

enum class Distribution { zipf, uniform };

std::string_view toString(Distribution d);
/// Parses "zipf" or "uniform". Throws std::invalid_argument.
Distribution parseDistribution(std::string_view name);

struct GenSpec {
  std::size_t rows = 0;
  std::size_t columns = 0;
  Distribution distribution = Distribution::zipf;
  std::uint64_t seed = 0;
};

/// Independent columns over the values 1..n (n = rows). Zipf draws value i with
/// probability proportional to 1/i; uniform draws each value with probability
/// 1/n. Column j uses its own stream seeded from (seed, j), so the result does
/// not depend on the thread count. Throws std::invalid_argument when rows or
/// columns is 0.
Table generateTable(const GenSpec& spec);
Table generateZipf(std::size_t rows, std::size_t columns, std::uint64_t seed);
Table generateUniform(std::size_t rows, std::size_t columns, std::uint64_t seed);

/// Permutes each column with its own seeded permutation; histograms are kept.
Table shuffleColumnsIndependently(const Table& table, std::uint64_t seed);

/// Stream seed for column `column` derived from `seed` (splitmix64 mixing).
std::uint64_t columnSeed(std::uint64_t seed, std::uint64_t column);

}  // namespace rowreorder
