#pragma once

#include <cstdint>
#include <future>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "flipforge/marking.hpp"
#include "flipforge/paths.hpp"

namespace flipforge {

struct SearchBudget {
  std::size_t max_states = 5'000'000;
  int threads = 1;
};

using VertexKey = std::vector<std::uint32_t>;

namespace explorer {

// Deterministic neighbor expansion, in arc id order.
inline std::vector<std::pair<ArcRef, MarkedTriangulation>> neighbors(
    const MarkedTriangulation& m) {
  std::vector<std::pair<ArcRef, MarkedTriangulation>> out;
  for (std::int32_t a = 0; a < m.map().arcs(); ++a)
    if (m.map().is_flippable({a})) out.emplace_back(ArcRef{a}, m.flip({a}));
  return out;
}

// Expands a frontier, optionally across threads; results are merged in
// frontier order so the outcome is independent of the thread count.
inline std::vector<std::vector<std::pair<ArcRef, MarkedTriangulation>>> expand_frontier(
    const std::vector<MarkedTriangulation>& frontier, int threads) {
  std::vector<std::vector<std::pair<ArcRef, MarkedTriangulation>>> out(frontier.size());
  if (threads <= 1 || frontier.size() < 16) {
    for (size_t i = 0; i < frontier.size(); ++i) out[i] = neighbors(frontier[i]);
    return out;
  }
  std::vector<std::future<void>> jobs;
  std::size_t chunk = (frontier.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(frontier.size(), lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = neighbors(frontier[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace explorer

// Exact flip distance via bidirectional breadth-first search over isotopy
// classes.  Both vertices must be marked over the same base.
inline std::int64_t distance(const MarkedTriangulation& S, const MarkedTriangulation& T,
                             const SearchBudget& budget = {}) {
  if (!(*S.base() == *T.base()))
    throw BaseMismatch("distance between vertices marked over different bases");
  VertexKey ks = S.key(), kt = T.key();
  if (ks == kt) return 0;
  std::unordered_map<VertexKey, std::int64_t, KeyHash> seen[2];
  std::vector<MarkedTriangulation> frontier[2];
  seen[0].emplace(std::move(ks), 0);
  seen[1].emplace(std::move(kt), 0);
  frontier[0].push_back(S);
  frontier[1].push_back(T);
  std::int64_t depth[2] = {0, 0};
  std::size_t states = 2;
  while (!frontier[0].empty() && !frontier[1].empty()) {
    int side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    auto expanded = explorer::expand_frontier(frontier[side], budget.threads);
    std::vector<MarkedTriangulation> next;
    for (auto& batch : expanded)
      for (auto& [a, m] : batch) {
        VertexKey k = m.key();
        auto other = seen[1 - side].find(k);
        if (other != seen[1 - side].end())
          return depth[side] + 1 + other->second;
        if (seen[side].emplace(std::move(k), depth[side] + 1).second) {
          next.push_back(std::move(m));
          if (++states > budget.max_states)
            throw SearchBudgetExceeded("distance search exceeded its state budget");
        }
      }
    frontier[side] = std::move(next);
    ++depth[side];
  }
  throw SearchBudgetExceeded("search spaces exhausted without meeting");
}

// Layered structure whose maximal source-to-sink paths are exactly the
// geodesics between two vertices.
struct GeodesicDag {
  std::int64_t dist = 0;
  std::vector<MarkedTriangulation> vertices;   // grouped by layer
  std::vector<std::int64_t> layer_of;
  std::vector<std::vector<int>> succ;          // edges toward the target
  std::uint64_t geodesic_count = 0;

  size_t size() const { return vertices.size(); }
};

inline GeodesicDag all_geodesics(const MarkedTriangulation& S, const MarkedTriangulation& T,
                                 const SearchBudget& budget = {}) {
  std::int64_t d = distance(S, T, budget);
  // Forward sweep: distances from S out to depth d.
  std::unordered_map<VertexKey, std::int64_t, KeyHash> dist_s, dist_t;
  auto sweep = [&](const MarkedTriangulation& from,
                   std::unordered_map<VertexKey, std::int64_t, KeyHash>& out) {
    out.emplace(from.key(), 0);
    std::vector<MarkedTriangulation> frontier{from};
    std::size_t states = 1;
    for (std::int64_t depth = 0; depth < d && !frontier.empty(); ++depth) {
      auto expanded = explorer::expand_frontier(frontier, budget.threads);
      std::vector<MarkedTriangulation> next;
      for (auto& batch : expanded)
        for (auto& [a, m] : batch) {
          VertexKey k = m.key();
          if (out.emplace(std::move(k), depth + 1).second) {
            next.push_back(std::move(m));
            if (++states > budget.max_states)
              throw SearchBudgetExceeded("geodesic sweep exceeded its state budget");
          }
        }
      frontier = std::move(next);
    }
  };
  sweep(S, dist_s);
  sweep(T, dist_t);

  GeodesicDag dag;
  dag.dist = d;
  std::unordered_map<VertexKey, int, KeyHash> index;
  // Collect geodesic vertices layer by layer, deterministically: BFS from S
  // again, keeping only vertices with dist_s + dist_t == d.
  std::vector<MarkedTriangulation> layer{S};
  FLIPFORGE_CHECK(dist_t.at(S.key()) == d);
  for (std::int64_t l = 0; l <= d; ++l) {
    std::vector<MarkedTriangulation> next;
    for (auto& m : layer) {
      VertexKey k = m.key();
      if (index.count(k)) continue;
      index.emplace(std::move(k), static_cast<int>(dag.vertices.size()));
      dag.vertices.push_back(m);
      dag.layer_of.push_back(l);
    }
    if (l == d) break;
    for (auto& m : layer)
      for (auto& [a, nb] : explorer::neighbors(m)) {
        VertexKey k = nb.key();
        auto is = dist_s.find(k);
        auto it = dist_t.find(k);
        if (is != dist_s.end() && it != dist_t.end() && is->second == l + 1 &&
            is->second + it->second == d)
          next.push_back(std::move(nb));
      }
    layer = std::move(next);
  }
  dag.succ.assign(dag.vertices.size(), {});
  for (size_t i = 0; i < dag.vertices.size(); ++i) {
    if (dag.layer_of[i] == d) continue;
    for (auto& [a, nb] : explorer::neighbors(dag.vertices[i])) {
      auto it = index.find(nb.key());
      if (it != index.end() && dag.layer_of[it->second] == dag.layer_of[i] + 1)
        dag.succ[i].push_back(it->second);
    }
  }
  // Path count by backward dynamic programming.
  {
    std::vector<std::uint64_t> ways(dag.vertices.size(), 0);
    for (int i = static_cast<int>(dag.vertices.size()) - 1; i >= 0; --i) {
      if (dag.layer_of[i] == d) {
        ways[i] = 1;
        continue;
      }
      for (int s : dag.succ[i]) ways[i] += ways[s];
    }
    dag.geodesic_count = dag.vertices.empty() ? 0 : ways[0];
  }
  return dag;
}

// Unidirectional BFS from a vertex until a predicate holds; exact distance.
template <typename Pred>
std::int64_t distance_until(const MarkedTriangulation& start, Pred&& pred,
                            const SearchBudget& budget = {}) {
  if (pred(start)) return 0;
  std::unordered_map<VertexKey, int, KeyHash> seen;
  seen.emplace(start.key(), 0);
  std::vector<MarkedTriangulation> frontier{start};
  std::int64_t depth = 0;
  std::size_t states = 1;
  while (!frontier.empty()) {
    std::vector<MarkedTriangulation> next;
    for (auto& m : frontier)
      for (auto& [a, nb] : explorer::neighbors(m)) {
        if (pred(nb)) return depth + 1;
        VertexKey k = nb.key();
        if (seen.emplace(std::move(k), 0).second) {
          next.push_back(std::move(nb));
          if (++states > budget.max_states)
            throw SearchBudgetExceeded("predicate search exceeded its state budget");
        }
      }
    frontier = std::move(next);
    ++depth;
  }
  throw SearchBudgetExceeded("predicate search exhausted the component");
}

inline std::int64_t distance_to_key(const MarkedTriangulation& start, const VertexKey& target,
                                    const SearchBudget& budget = {}) {
  return distance_until(
      start, [&](const MarkedTriangulation& m) { return m.key() == target; }, budget);
}

// Distance from a vertex to the stratum of a multiarc given over the base.
inline std::int64_t distance_to_stratum(const MarkedTriangulation& start, const MultiArc& A,
                                        const SearchBudget& budget = {}) {
  auto contains = [&](const MarkedTriangulation& m) {
    for (const auto& w : A.components)
      if (m.find_arc(w) < 0) return false;
    return true;
  };
  return distance_until(start, contains, budget);
}

struct BallReport {
  int radius = 0;
  std::vector<std::size_t> layer_sizes;           // layer_sizes[0] == 1
  std::vector<VertexKey> frontier;                // keys at the final layer
  std::size_t cumulative(int m) const {
    std::size_t c = 0;
    for (int i = 0; i <= m && i < static_cast<int>(layer_sizes.size()); ++i)
      c += layer_sizes[i];
    return c;
  }
};

inline BallReport ball(const MarkedTriangulation& center, int radius,
                       const SearchBudget& budget = {}) {
  BallReport report;
  report.radius = radius;
  std::unordered_map<VertexKey, int, KeyHash> seen;
  seen.emplace(center.key(), 0);
  std::vector<MarkedTriangulation> frontier{center};
  report.layer_sizes.push_back(1);
  std::size_t states = 1;
  for (int depth = 0; depth < radius && !frontier.empty(); ++depth) {
    auto expanded = explorer::expand_frontier(frontier, budget.threads);
    std::vector<MarkedTriangulation> next;
    for (auto& batch : expanded)
      for (auto& [a, m] : batch) {
        VertexKey k = m.key();
        if (seen.emplace(std::move(k), depth + 1).second) {
          next.push_back(std::move(m));
          if (++states > budget.max_states)
            throw SearchBudgetExceeded("ball exceeded its state budget");
        }
      }
    report.layer_sizes.push_back(next.size());
    frontier = std::move(next);
  }
  for (auto& m : frontier) report.frontier.push_back(m.key());
  return report;
}

// Induced subgraph of triangulations containing a multiarc (given over the
// start vertex's base), explored out to `radius` flips from `start`.
struct StratumWindow {
  std::vector<MarkedTriangulation> vertices;
  std::vector<std::pair<int, int>> edges;  // index pairs, i < j
};

inline StratumWindow stratum_subgraph(const MarkedTriangulation& start, const MultiArc& A,
                                      int radius, const SearchBudget& budget = {}) {
  for (const auto& w : A.components)
    if (start.find_arc(w) < 0) throw NotInStratum("start vertex does not contain the multiarc");
  auto protected_arcs = [&](const MarkedTriangulation& m) {
    std::vector<bool> keep(m.map().arcs(), false);
    for (const auto& w : A.components) {
      std::int32_t a = m.find_arc(w);
      FLIPFORGE_CHECK(a >= 0);
      keep[a] = true;
    }
    return keep;
  };
  StratumWindow out;
  std::unordered_map<VertexKey, int, KeyHash> index;
  index.emplace(start.key(), 0);
  out.vertices.push_back(start);
  std::vector<int> frontier{0};
  std::size_t states = 1;
  for (int depth = 0; depth < radius && !frontier.empty(); ++depth) {
    std::vector<int> next;
    for (int vi : frontier) {
      MarkedTriangulation m = out.vertices[vi];
      auto keep = protected_arcs(m);
      for (std::int32_t a = 0; a < m.map().arcs(); ++a) {
        if (keep[a] || !m.map().is_flippable({a})) continue;
        MarkedTriangulation nb = m.flip({a});
        VertexKey k = nb.key();
        auto [it, fresh] = index.emplace(std::move(k), static_cast<int>(out.vertices.size()));
        if (fresh) {
          out.vertices.push_back(std::move(nb));
          next.push_back(it->second);
          if (++states > budget.max_states)
            throw SearchBudgetExceeded("stratum window exceeded its state budget");
        }
        int u = vi, v = it->second;
        if (u > v) std::swap(u, v);
        if (u != v) out.edges.emplace_back(u, v);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

}  // namespace flipforge
