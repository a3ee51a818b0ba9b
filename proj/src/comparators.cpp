#include "rowreorder/comparators.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rowreorder/kernels.hpp"
#include "rowreorder/metrics.hpp"

namespace rowreorder {

namespace {

// Fixed-capacity scratch space that falls back to the heap for wide tuples.
template <class T, std::size_t Inline = 32>
class Scratch {
 public:
  explicit Scratch(std::size_t n) {
    if (n > Inline) heap_.resize(n);
    view_ = n > Inline ? std::span<T>(heap_) : std::span<T>(fixed_.data(), n);
  }
  std::span<T> span() noexcept { return view_; }

 private:
  std::array<T, Inline> fixed_{};
  std::vector<T> heap_;
  std::span<T> view_;
};

inline std::uint32_t columnAt(std::span<const std::uint32_t> order, std::size_t k) {
  return order.empty() ? static_cast<std::uint32_t>(k) : order[k];
}

void checkArity(std::span<const Code> x, std::span<const Code> y,
                std::span<const std::uint32_t> order) {
  if (x.size() != y.size()) throw std::invalid_argument("comparator: tuple lengths differ");
  if (!order.empty() && order.size() != x.size()) {
    throw std::invalid_argument("comparator: column order length differs from tuple length");
  }
}

// (value, position) pairs packed so that integer order is pair order.
void vortexKey(std::span<const Code> x, std::span<const std::uint32_t> order,
               std::span<std::uint64_t> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (static_cast<std::uint64_t>(x[columnAt(order, k)]) << 32) | k;
  }
  std::sort(out.begin(), out.end());
}

struct Triple {
  std::uint64_t frequency;
  std::uint32_t position;
  Code value;
  auto operator<=>(const Triple&) const = default;
};

void frequentComponentKey(std::span<const Code> x, const ColumnFrequencies& freqs,
                          std::span<const std::uint32_t> order, std::span<Triple> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto col = columnAt(order, k);
    const Code v = x[col];
    const auto& f = freqs.at(col);
    out[k] = Triple{v < f.size() ? f[v] : 0, static_cast<std::uint32_t>(k), v};
  }
  // Reverse lexicographic: most frequent component first.
  std::sort(out.begin(), out.end(), std::greater<>{});
}

}  // namespace

std::strong_ordering compareLexicographic(std::span<const Code> x, std::span<const Code> y,
                                          std::span<const std::uint32_t> columnOrder) {
  checkArity(x, y, columnOrder);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto col = columnAt(columnOrder, k);
    if (x[col] != y[col]) return x[col] <=> y[col];
  }
  return std::strong_ordering::equal;
}

std::strong_ordering compareReflectedGC(std::span<const Code> x, std::span<const Code> y,
                                        std::span<const std::uint32_t> columnOrder) {
  checkArity(x, y, columnOrder);
  std::uint64_t parity = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto col = columnAt(columnOrder, k);
    if (x[col] != y[col]) {
      return (parity & 1U) == 0 ? x[col] <=> y[col] : y[col] <=> x[col];
    }
    parity += x[col];
  }
  return std::strong_ordering::equal;
}

std::strong_ordering compareVortex(std::span<const Code> x, std::span<const Code> y,
                                   std::span<const std::uint32_t> columnOrder) {
  checkArity(x, y, columnOrder);
  Scratch<std::uint64_t> kx(x.size());
  Scratch<std::uint64_t> ky(y.size());
  vortexKey(x, columnOrder, kx.span());
  vortexKey(y, columnOrder, ky.span());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto a = kx.span()[k];
    const auto b = ky.span()[k];
    if (a != b) {
      const bool evenIndex = (k % 2) == 1;  // 1-based index k + 1
      const bool less = (a < b) != evenIndex;
      return less ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return std::strong_ordering::equal;
}

std::strong_ordering compareFrequentComponent(std::span<const Code> x, std::span<const Code> y,
                                              const ColumnFrequencies& frequencies,
                                              std::span<const std::uint32_t> columnOrder) {
  checkArity(x, y, columnOrder);
  Scratch<Triple> tx(x.size());
  Scratch<Triple> ty(y.size());
  frequentComponentKey(x, frequencies, columnOrder, tx.span());
  frequentComponentKey(y, frequencies, columnOrder, ty.span());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto cmp = tx.span()[k] <=> ty.span()[k];
    if (cmp != 0) return cmp;
  }
  return std::strong_ordering::equal;
}

std::string_view toString(OrderKind kind) {
  switch (kind) {
    case OrderKind::lexicographic: return "lex";
    case OrderKind::reflectedGC: return "gray";
    case OrderKind::vortex: return "vortex";
    case OrderKind::frequentComponent: return "fc";
  }
  return "?";
}

OrderKind parseOrderKind(std::string_view name) {
  if (name == "lex") return OrderKind::lexicographic;
  if (name == "gray") return OrderKind::reflectedGC;
  if (name == "vortex") return OrderKind::vortex;
  if (name == "fc") return OrderKind::frequentComponent;
  throw std::invalid_argument("unknown order '" + std::string(name) + "'");
}

RowComparator RowComparator::lexicographic(std::vector<std::uint32_t> columnOrder) {
  return {OrderKind::lexicographic, std::move(columnOrder), {}};
}

RowComparator RowComparator::reflectedGC(std::vector<std::uint32_t> columnOrder) {
  return {OrderKind::reflectedGC, std::move(columnOrder), {}};
}

RowComparator RowComparator::vortex(std::vector<std::uint32_t> columnOrder) {
  return {OrderKind::vortex, std::move(columnOrder), {}};
}

RowComparator RowComparator::frequentComponent(ColumnFrequencies frequencies,
                                               std::vector<std::uint32_t> columnOrder) {
  return {OrderKind::frequentComponent, std::move(columnOrder), std::move(frequencies)};
}

RowComparator RowComparator::forTable(OrderKind kind, const Table& table, ColumnOrderPolicy policy) {
  std::vector<std::uint32_t> order;
  if (policy == ColumnOrderPolicy::byCardinality) {
    order = columnOrderByCardinality(table);
  } else {
    order.resize(table.columnCount());
    std::iota(order.begin(), order.end(), 0U);
  }
  ColumnFrequencies freqs;
  if (kind == OrderKind::frequentComponent) freqs = kernels::parallel::histograms(table);
  return {kind, std::move(order), std::move(freqs)};
}

std::strong_ordering RowComparator::operator()(std::span<const Code> x, std::span<const Code> y) const {
  switch (kind_) {
    case OrderKind::lexicographic: return compareLexicographic(x, y, columnOrder_);
    case OrderKind::reflectedGC: return compareReflectedGC(x, y, columnOrder_);
    case OrderKind::vortex: return compareVortex(x, y, columnOrder_);
    case OrderKind::frequentComponent:
      return compareFrequentComponent(x, y, frequencies_, columnOrder_);
  }
  return std::strong_ordering::equal;
}

NormalizedTable normalizeByFrequency(const Table& table) {
  const auto hist = kernels::parallel::histograms(table);
  std::vector<std::vector<Code>> columns;
  NormalizedTable out;
  columns.reserve(table.columnCount());
  out.inverse.reserve(table.columnCount());
  std::vector<Dictionary> dicts;
  for (std::size_t c = 0; c < table.columnCount(); ++c) {
    auto col = table.column(c);
    const auto card = table.cardinality(c);
    std::vector<std::size_t> first(card, col.size());
    for (std::size_t r = 0; r < col.size(); ++r) first[col[r]] = std::min(first[col[r]], r);

    std::vector<Code> inverse(card);
    std::iota(inverse.begin(), inverse.end(), Code{0});
    std::sort(inverse.begin(), inverse.end(), [&](Code a, Code b) {
      return std::tie(hist[c][b], first[a]) < std::tie(hist[c][a], first[b]);
    });
    std::vector<Code> rankOf(card);
    for (Code rank = 0; rank < card; ++rank) rankOf[inverse[rank]] = rank;

    std::vector<Code> ranked(col.size());
    for (std::size_t r = 0; r < col.size(); ++r) ranked[r] = rankOf[col[r]];
    columns.push_back(std::move(ranked));
    if (table.hasDictionaries()) {
      Dictionary d(card);
      for (Code rank = 0; rank < card; ++rank) d[rank] = table.dictionary(c)[inverse[rank]];
      dicts.push_back(std::move(d));
    }
    out.inverse.push_back(std::move(inverse));
  }
  out.table = Table::fromCodes(std::move(columns), std::move(dicts));
  return out;
}

}  // namespace rowreorder
