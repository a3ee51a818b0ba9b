#include "rowreorder/heuristics.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "rowreorder/errors.hpp"
#include "rowreorder/metrics.hpp"
#include "rowreorder/multilist.hpp"

namespace rowreorder {

namespace {

std::uint32_t pickStartGroup(const DistinctRows& distinct, const HeuristicOptions& options) {
  const std::size_t n = distinct.groupOf.size();
  if (options.startRow) {
    if (*options.startRow >= n) throw std::invalid_argument("start row out of range");
    return distinct.groupOf[*options.startRow];
  }
  std::mt19937_64 gen(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return distinct.groupOf[pick(gen)];
}

std::vector<std::uint32_t> columnOrderByDistinctCount(const RowMatrix& rows) {
  std::vector<std::uint32_t> counts(rows.columnCount());
  std::vector<Code> values(rows.rowCount());
  for (std::size_t c = 0; c < rows.columnCount(); ++c) {
    for (std::size_t r = 0; r < rows.rowCount(); ++r) values[r] = rows.row(r)[c];
    std::sort(values.begin(), values.end());
    counts[c] = static_cast<std::uint32_t>(std::unique(values.begin(), values.end()) - values.begin());
  }
  return columnOrderByCardinality(counts);
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0U); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  std::vector<std::uint32_t> parent;
};

// Greedy endpoint merging in passes of increasing distance. Within a pass,
// pairs (visit[i], visit[j]) with i < j are tried in lexicographic (i, j) order.
RowOrdering greedyMerge(const RowMatrix& rows, std::span<const RowId> visit) {
  const std::size_t m = rows.rowCount();
  if (m <= 1) return identityOrdering(m);
  std::vector<std::uint8_t> degree(m, 0);
  std::vector<std::array<RowId, 2>> adj(m, {kNoRow, kNoRow});
  UnionFind uf(m);
  std::size_t merges = 0;
  const std::size_t c = rows.columnCount();

  for (unsigned h = 0; h <= c && merges + 1 < m; ++h) {
    for (std::size_t i = 0; i < m && merges + 1 < m; ++i) {
      const RowId a = visit[i];
      if (degree[a] == 2) continue;
      const auto ra = rows.row(a);
      for (std::size_t j = i + 1; j < m; ++j) {
        const RowId b = visit[j];
        if (degree[b] == 2 || hammingUnchecked(ra, rows.row(b)) != h) continue;
        const auto fa = uf.find(a);
        const auto fb = uf.find(b);
        if (fa == fb) continue;
        uf.parent[fa] = fb;
        adj[a][degree[a]++] = b;
        adj[b][degree[b]++] = a;
        ++merges;
        if (degree[a] == 2) break;
      }
    }
  }

  RowId start = 0;
  while (degree[start] == 2) ++start;
  RowOrdering path;
  path.reserve(m);
  RowId prev = kNoRow;
  for (RowId cur = start; cur != kNoRow;) {
    path.push_back(cur);
    RowId next = kNoRow;
    for (std::uint8_t k = 0; k < degree[cur]; ++k) {
      if (adj[cur][k] != prev) next = adj[cur][k];
    }
    prev = cur;
    cur = next;
  }
  if (path.size() != m) throw std::logic_error("greedy merge left several fragments");
  return path;
}

RowOrdering multipleListsOnDistinct(const DistinctRows& distinct,
                                    const std::vector<std::vector<std::uint32_t>>& columnOrders,
                                    const HeuristicOptions& options) {
  std::vector<std::uint32_t> mult(distinct.members.size());
  for (std::size_t g = 0; g < mult.size(); ++g) mult[g] = static_cast<std::uint32_t>(distinct.members[g].size());
  MultiListIndex index(distinct.rows, columnOrders, std::move(mult));

  RowOrdering groups;
  groups.reserve(index.rowCount());
  RowId cur = pickStartGroup(distinct, options);
  index.remove(cur);
  groups.push_back(cur);
  while (index.liveCount() > 0) {
    const auto rc = distinct.rows.row(cur);
    RowId best = kNoRow;
    unsigned bestDist = 0;
    for (std::size_t list = 0; list < index.listCount(); ++list) {
      for (RowId cand : {index.predecessor(list, cur), index.successor(list, cur)}) {
        if (cand == kNoRow) continue;
        const unsigned d = hammingUnchecked(rc, distinct.rows.row(cand));
        if (best == kNoRow || d < bestDist) {
          best = cand;
          bestDist = d;
        }
      }
    }
    if (best == kNoRow) throw std::logic_error("multiple lists: no live neighbour");
    index.remove(best);
    groups.push_back(best);
    cur = best;
  }
  return expandGroups(distinct, groups);
}

}  // namespace

std::string_view toString(Heuristic h) {
  switch (h) {
    case Heuristic::nearestNeighbor: return "nn";
    case Heuristic::multipleLists: return "ml";
    case Heuristic::multipleFragment: return "mf";
    case Heuristic::savings: return "savings";
    case Heuristic::insertNearest: return "ins-near";
    case Heuristic::insertFarthest: return "ins-far";
    case Heuristic::insertRandom: return "ins-rand";
  }
  return "?";
}

Heuristic parseHeuristic(std::string_view name) {
  for (auto h : {Heuristic::nearestNeighbor, Heuristic::multipleLists, Heuristic::multipleFragment,
                 Heuristic::savings, Heuristic::insertNearest, Heuristic::insertFarthest,
                 Heuristic::insertRandom}) {
    if (toString(h) == name) return h;
  }
  throw std::invalid_argument("unknown heuristic '" + std::string(name) + "'");
}

bool isQuadratic(Heuristic h) { return h != Heuristic::multipleLists; }

DistinctRows deduplicate(const RowMatrix& rows) {
  DistinctRows out;
  out.groupOf = groupIdenticalRows(rows);
  const std::uint32_t groups =
      out.groupOf.empty() ? 0 : *std::max_element(out.groupOf.begin(), out.groupOf.end()) + 1;
  out.members.resize(groups);
  std::vector<Code> data;
  data.reserve(static_cast<std::size_t>(groups) * rows.columnCount());
  for (RowId r = 0; r < rows.rowCount(); ++r) {
    auto& m = out.members[out.groupOf[r]];
    if (m.empty()) {
      const auto row = rows.row(r);
      data.insert(data.end(), row.begin(), row.end());
    }
    m.push_back(r);
  }
  out.rows = RowMatrix(groups, rows.columnCount(), std::move(data));
  return out;
}

RowOrdering expandGroups(const DistinctRows& distinct, std::span<const RowId> groupOrder) {
  RowOrdering out;
  out.reserve(distinct.groupOf.size());
  for (RowId g : groupOrder) {
    const auto& m = distinct.members.at(g);
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

RowOrdering nearestNeighbor(const RowMatrix& rows, const HeuristicOptions& options) {
  if (rows.rowCount() == 0) return {};
  const auto distinct = deduplicate(rows);
  const std::size_t m = distinct.rows.rowCount();
  std::vector<RowId> remaining;
  remaining.reserve(m);
  RowId cur = pickStartGroup(distinct, options);
  for (RowId g = 0; g < m; ++g) {
    if (g != cur) remaining.push_back(g);
  }
  RowOrdering groups{cur};
  groups.reserve(m);
  while (!remaining.empty()) {
    const auto rc = distinct.rows.row(cur);
    std::size_t bestPos = 0;
    unsigned bestDist = ~0U;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const unsigned d = hammingUnchecked(rc, distinct.rows.row(remaining[i]));
      if (d < bestDist) {
        bestDist = d;
        bestPos = i;
        if (d <= 1) break;  // rows are distinct, so 1 is the minimum
      }
    }
    cur = remaining[bestPos];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(bestPos));
    groups.push_back(cur);
  }
  return expandGroups(distinct, groups);
}

RowOrdering multipleLists(const RowMatrix& rows, const HeuristicOptions& options) {
  const std::size_t c = rows.columnCount();
  const std::size_t k = options.lists == 0 ? c : options.lists;
  if (k < 1 || k > c) {
    throw std::invalid_argument("multiple lists: K must lie in [1, " + std::to_string(c) + "]");
  }
  if (rows.rowCount() == 0) return {};
  auto base = options.columnOrder.empty() ? columnOrderByDistinctCount(rows) : options.columnOrder;
  if (base.size() != c) throw std::invalid_argument("multiple lists: column order has wrong length");
  return multipleListsOnDistinct(deduplicate(rows), rotatedColumnOrders(base, k), options);
}

RowOrdering multipleListsWithOrders(const RowMatrix& rows,
                                    const std::vector<std::vector<std::uint32_t>>& columnOrders,
                                    const HeuristicOptions& options) {
  for (const auto& o : columnOrders) {
    if (o.size() != rows.columnCount()) throw std::invalid_argument("multiple lists: column order has wrong length");
  }
  if (rows.rowCount() == 0) return {};
  return multipleListsOnDistinct(deduplicate(rows), columnOrders, options);
}

RowOrdering multipleFragment(const RowMatrix& rows, const HeuristicOptions&) {
  const auto distinct = deduplicate(rows);
  const auto visit = identityOrdering(distinct.rows.rowCount());
  return expandGroups(distinct, greedyMerge(distinct.rows, visit));
}

RowOrdering savings(const RowMatrix& rows, const HeuristicOptions& options) {
  const auto distinct = deduplicate(rows);
  auto visit = identityOrdering(distinct.rows.rowCount());
  std::mt19937_64 gen(options.seed);
  std::shuffle(visit.begin(), visit.end(), gen);
  return expandGroups(distinct, greedyMerge(distinct.rows, visit));
}

RowOrdering insertion(const RowMatrix& rows, InsertionStrategy strategy, const HeuristicOptions& options) {
  if (rows.rowCount() == 0) return {};
  const auto distinct = deduplicate(rows);
  const auto& dr = distinct.rows;
  const std::size_t m = dr.rowCount();
  auto dist = [&](RowId a, RowId b) { return hammingUnchecked(dr.row(a), dr.row(b)); };

  std::vector<RowId> next(m, kNoRow);
  std::vector<unsigned> edge(m, 0);  // edge[u] = d(u, next[u])
  std::vector<std::uint8_t> inTour(m, 0);
  const RowId start = pickStartGroup(distinct, options);
  RowId head = start;
  inTour[start] = 1;

  std::vector<unsigned> minDist;
  std::vector<RowId> randomOrder;
  if (strategy == InsertionStrategy::random) {
    for (RowId g = 0; g < m; ++g) {
      if (g != start) randomOrder.push_back(g);
    }
    std::mt19937_64 gen(options.seed ^ 0x9E3779B97F4A7C15ULL);
    std::shuffle(randomOrder.begin(), randomOrder.end(), gen);
  } else {
    minDist.resize(m);
    for (RowId g = 0; g < m; ++g) minDist[g] = dist(start, g);
  }

  for (std::size_t step = 1; step < m; ++step) {
    RowId x = kNoRow;
    if (strategy == InsertionStrategy::random) {
      x = randomOrder[step - 1];
    } else {
      for (RowId g = 0; g < m; ++g) {
        if (inTour[g]) continue;
        if (x == kNoRow || (strategy == InsertionStrategy::nearest ? minDist[g] < minDist[x]
                                                                   : minDist[g] > minDist[x])) {
          x = g;
        }
      }
    }

    // Candidate positions in path order: before head, after each row.
    unsigned dHead = dist(x, head);
    unsigned bestCost = dHead;
    RowId bestAfter = kNoRow;  // kNoRow = new head
    unsigned dU = dHead;
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
    if (bestAfter == kNoRow) {
      next[x] = head;
      edge[x] = dHead;
      head = x;
    } else {
      const RowId v = next[bestAfter];
      next[x] = v;
      edge[x] = v == kNoRow ? 0 : dist(x, v);
      next[bestAfter] = x;
      edge[bestAfter] = dist(bestAfter, x);
    }
    inTour[x] = 1;
    if (strategy != InsertionStrategy::random) {
      for (RowId g = 0; g < m; ++g) {
        if (!inTour[g]) minDist[g] = std::min(minDist[g], dist(x, g));
      }
    }
  }

  RowOrdering groups;
  groups.reserve(m);
  for (RowId u = head; u != kNoRow; u = next[u]) groups.push_back(u);
  return expandGroups(distinct, groups);
}

void checkQuadraticGate(std::string_view name, std::size_t rowCount, bool force) {
  if (!force && rowCount > kQuadraticRowLimit) {
    throw HeuristicGateError(std::string(name) + " is quadratic and refuses " + std::to_string(rowCount) +
                             " rows (limit " + std::to_string(kQuadraticRowLimit) +
                             "); partition the table or force it");
  }
}

RowOrdering runHeuristic(Heuristic h, const RowMatrix& rows, const HeuristicOptions& options) {
  if (isQuadratic(h)) checkQuadraticGate(toString(h), rows.rowCount(), options.force);
  switch (h) {
    case Heuristic::nearestNeighbor: return nearestNeighbor(rows, options);
    case Heuristic::multipleLists: return multipleLists(rows, options);
    case Heuristic::multipleFragment: return multipleFragment(rows, options);
    case Heuristic::savings: return savings(rows, options);
    case Heuristic::insertNearest: return insertion(rows, InsertionStrategy::nearest, options);
    case Heuristic::insertFarthest: return insertion(rows, InsertionStrategy::farthest, options);
    case Heuristic::insertRandom: return insertion(rows, InsertionStrategy::random, options);
  }
  throw std::invalid_argument("unknown heuristic");
}

}  // namespace rowreorder
