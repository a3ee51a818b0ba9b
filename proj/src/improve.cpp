#include "rowreorder/improve.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rowreorder/heuristics.hpp"
#include "rowreorder/metrics.hpp"
#include "rowreorder/multilist.hpp"

namespace rowreorder {

std::string_view toString(ImproveMethod m) {
  switch (m) {
    case ImproveMethod::reinsert: return "reinsert";
    case ImproveMethod::ahdo: return "ahdo";
    case ImproveMethod::peephole: return "peephole";
  }
  return "?";
}

ImproveMethod parseImproveMethod(std::string_view name) {
  if (name == "reinsert") return ImproveMethod::reinsert;
  if (name == "ahdo") return ImproveMethod::ahdo;
  if (name == "peephole") return ImproveMethod::peephole;
  throw std::invalid_argument("unknown improvement method '" + std::string(name) + "'");
}

RowOrdering improveOneReinsertion(const RowMatrix& rows, std::span<const RowId> ordering, bool force) {
  const std::size_t n = rows.rowCount();
  validatePermutation(ordering, n);
  checkQuadraticGate("reinsert", n, force);
  if (n < 3) return {ordering.begin(), ordering.end()};
  auto dist = [&](RowId a, RowId b) { return hammingUnchecked(rows.row(a), rows.row(b)); };

  std::vector<RowId> prev(n, kNoRow);
  std::vector<RowId> next(n, kNoRow);
  std::vector<unsigned> edge(n, 0);  // edge[u] = d(u, next[u])
  for (std::size_t i = 0; i + 1 < n; ++i) {
    next[ordering[i]] = ordering[i + 1];
    prev[ordering[i + 1]] = ordering[i];
    edge[ordering[i]] = dist(ordering[i], ordering[i + 1]);
  }
  RowId head = ordering.front();

  auto link = [&](RowId u, RowId v) {  // u or v may be kNoRow
    if (u != kNoRow) {
      next[u] = v;
      edge[u] = v == kNoRow ? 0 : dist(u, v);
    } else {
      head = v;
    }
    if (v != kNoRow) prev[v] = u;
  };

  for (RowId x : ordering) {
    const RowId p = prev[x];
    const RowId s = next[x];
    const unsigned gain = (p != kNoRow ? edge[p] : 0) + (s != kNoRow ? edge[x] : 0) -
                          (p != kNoRow && s != kNoRow ? dist(p, s) : 0);
    if (gain == 0) continue;
    link(p, s);

    unsigned dU = dist(x, head);
    unsigned bestCost = dU;
    RowId bestAfter = kNoRow;
    for (RowId u = head; u != kNoRow; u = next[u]) {
      const RowId v = next[u];
      unsigned cost;
      unsigned dV = 0;
      if (v == kNoRow) {
        cost = dU;
      } else {
        dV = dist(x, v);
        cost = dU + dV - edge[u];
      }
      if (cost < bestCost) {
        bestCost = cost;
        bestAfter = u;
      }
      dU = dV;
    }

    const RowId after = bestCost < gain ? bestAfter : p;
    const RowId before = after == kNoRow ? head : next[after];
    link(after, x);
    link(x, before);
  }

  RowOrdering out;
  out.reserve(n);
  for (RowId u = head; u != kNoRow; u = next[u]) out.push_back(u);
  return out;
}

RowOrdering improveAHDO(const RowMatrix& rows, std::span<const RowId> ordering) {
  const std::size_t n = rows.rowCount();
  validatePermutation(ordering, n);
  RowOrdering out(ordering.begin(), ordering.end());
  auto dist = [&](std::size_t i, std::size_t j) { return static_cast<long>(hammingUnchecked(rows.row(out[i]), rows.row(out[j]))); };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      // Swap positions i and i+1: only the two outer edges change.
      long delta = 0;
      if (i > 0) delta += dist(i - 1, i + 1) - dist(i - 1, i);
      if (i + 2 < n) delta += dist(i, i + 2) - dist(i + 1, i + 2);
      if (delta < 0) {
        std::swap(out[i], out[i + 1]);
        changed = true;
      }
    }
  }
  return out;
}

namespace {

// Optimal order of `inner` between fixed rows `first` and `last` (Held-Karp).
std::vector<RowId> bestInterior(const RowMatrix& rows, RowId first, RowId last, std::span<const RowId> inner,
                                unsigned& cost) {
  const std::size_t m = inner.size();
  auto dist = [&](RowId a, RowId b) { return hammingUnchecked(rows.row(a), rows.row(b)); };
  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr unsigned kInf = std::numeric_limits<unsigned>::max();
  std::vector<unsigned> dp((full + 1) * m, kInf);
  std::vector<std::uint8_t> from((full + 1) * m, 0);
  std::vector<unsigned> d(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) d[a * m + b] = dist(inner[a], inner[b]);
    dp[(std::size_t{1} << a) * m + a] = dist(first, inner[a]);
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      const unsigned cur = dp[mask * m + j];
      if (cur == kInf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t nm = mask | (std::size_t{1} << k);
        const unsigned cand = cur + d[j * m + k];
        if (cand < dp[nm * m + k]) {
          dp[nm * m + k] = cand;
          from[nm * m + k] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }
  std::size_t bestJ = 0;
  cost = kInf;
  for (std::size_t j = 0; j < m; ++j) {
    const unsigned total = dp[full * m + j] + dist(inner[j], last);
    if (total < cost) {
      cost = total;
      bestJ = j;
    }
  }
  std::vector<RowId> order(m);
  std::size_t mask = full;
  std::size_t j = bestJ;
  for (std::size_t pos = m; pos-- > 0;) {
    order[pos] = inner[j];
    const std::size_t pj = from[mask * m + j];
    mask &= ~(std::size_t{1} << j);
    j = pj;
  }
  return order;
}

}  // namespace

RowOrdering improvePeephole(const RowMatrix& rows, std::span<const RowId> ordering, std::size_t blockSize) {
  if (blockSize < 3 || blockSize > 12) {
    throw std::invalid_argument("peephole block size must lie in [3, 12], got " + std::to_string(blockSize));
  }
  const std::size_t n = rows.rowCount();
  validatePermutation(ordering, n);
  RowOrdering out(ordering.begin(), ordering.end());
  for (std::size_t s = 0; s + 2 < n; s += blockSize) {
    const std::size_t e = std::min(n, s + blockSize) - 1;
    const std::span<RowId> block(out.data() + s, e - s + 1);
    const std::span<const RowId> path(block);
    const unsigned current = static_cast<unsigned>(pathCost(rows, path));
    unsigned optimal = 0;
    const auto interior = bestInterior(rows, block.front(), block.back(), path.subspan(1, block.size() - 2), optimal);
    if (optimal < current) std::copy(interior.begin(), interior.end(), block.begin() + 1);
  }
  return out;
}

}  // namespace rowreorder
