#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "flipforge/builders.hpp"
#include "flipforge/explorer.hpp"
#include "flipforge/paths.hpp"
#include "helpers.hpp"

using namespace flipforge;

namespace {

// Plain unidirectional BFS, used as an independent oracle for distance().
std::int64_t bfs_distance_oracle(const MarkedTriangulation& S, const MarkedTriangulation& T,
                                 std::size_t cap = 200000) {
  VertexKey target = T.key();
  std::unordered_map<VertexKey, std::int64_t, KeyHash> seen;
  seen.emplace(S.key(), 0);
  std::vector<MarkedTriangulation> frontier{S};
  std::int64_t depth = 0;
  if (S.key() == target) return 0;
  while (!frontier.empty()) {
    std::vector<MarkedTriangulation> next;
    for (auto& m : frontier)
      for (auto& [a, nb] : explorer::neighbors(m)) {
        VertexKey k = nb.key();
        if (k == target) return depth + 1;
        if (seen.emplace(std::move(k), depth + 1).second) {
          next.push_back(std::move(nb));
          FLIPFORGE_CHECK(seen.size() < cap);
        }
      }
    frontier = std::move(next);
    ++depth;
  }
  throw SearchBudgetExceeded("oracle exhausted");
}

}  // namespace

TEST_CASE("pentagon flip graph is a 5-cycle") {
  auto m = MarkedTriangulation::identity(builders::polygon(5));
  auto b = ball(m, 5);
  CHECK(b.layer_sizes == std::vector<std::size_t>{1, 2, 2, 0});
  // On a 5-cycle the distance-2 pairs have a unique geodesic.
  auto two = m.flip({0}).flip({1});
  CHECK(distance(m, two) == 2);
  auto dag = all_geodesics(m, two);
  CHECK(dag.dist == 2);
  CHECK(dag.geodesic_count == 1);
  CHECK(dag.size() == 3);
  // Exhaustive: every pair of the five triangulations is within distance 2.
  std::vector<MarkedTriangulation> all{m};
  {
    auto cur = m;
    for (int i = 0; i < 4; ++i) {
      auto nbs = explorer::neighbors(cur);
      bool moved = false;
      for (auto& [a, nb] : nbs) {
        bool fresh = true;
        for (auto& v : all)
          if (v.key() == nb.key()) fresh = false;
        if (fresh) {
          all.push_back(nb);
          cur = nb;
          moved = true;
          break;
        }
      }
      REQUIRE(moved);
    }
  }
  for (auto& x : all)
    for (auto& y : all) CHECK(distance(x, y) <= 2);
}

TEST_CASE("adjacent pair gives a single-edge geodesic DAG") {
  auto m = MarkedTriangulation::identity(builders::polygon(6));
  auto n = m.flip({1});
  CHECK(distance(m, n) == 1);
  auto dag = all_geodesics(m, n);
  CHECK(dag.geodesic_count == 1);
  CHECK(dag.size() == 2);
}

TEST_CASE("once-punctured torus ball grows like the trivalent tree") {
  auto m = MarkedTriangulation::identity(builders::once_punctured_torus());
  auto b = ball(m, 4);
  CHECK(b.layer_sizes == std::vector<std::size_t>{1, 3, 6, 12, 24});
}

TEST_CASE("cylinder flip graph is the infinite line") {
  auto m = MarkedTriangulation::identity(builders::cylinder());
  auto b = ball(m, 5);
  CHECK(b.layer_sizes == std::vector<std::size_t>{1, 2, 2, 2, 2, 2});
  MultiArc empty;
  empty.base = m.base();
  auto window = stratum_subgraph(m, empty, 5);
  CHECK(window.vertices.size() == 11);  // a path of 11 vertices
  CHECK(window.edges.size() == 10);
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
  std::mt19937_64 rng(2025);
  auto base = MarkedTriangulation::identity(builders::polygon(7));
  std::vector<MarkedTriangulation> pts{base};
  for (int i = 0; i < 3; ++i) pts.push_back(testutil::random_walk(base, 4, rng));
  for (auto& x : pts)
    for (auto& y : pts) {
      auto d1 = distance(x, y);
      CHECK(d1 == distance(y, x));
      CHECK(d1 == bfs_distance_oracle(x, y));
      for (auto& z : pts) CHECK(d1 <= distance(x, z) + distance(z, y));
    }
}

TEST_CASE("flip neighbors have intersection one and distance one") {
  std::mt19937_64 rng(9);
  for (auto T0 : {builders::polygon(6), builders::once_punctured_torus()}) {
    auto m = testutil::random_walk(MarkedTriangulation::identity(T0), 3, rng);
    for (auto& [a, nb] : explorer::neighbors(m)) {
      CHECK(distance(m, nb) == 1);
      // i(T, T') = 1: total crossings between the two arc systems.
      std::int64_t total = 0;
      for (std::int32_t i = 0; i < m.map().arcs(); ++i)
        for (std::int32_t j = 0; j < nb.map().arcs(); ++j)
          total += intersection_number(m.word({i}), nb.word({j}));
      CHECK(total == 1);
    }
  }
}

TEST_CASE("stratum window of a once-punctured torus arc is the line graph") {
  auto m = MarkedTriangulation::identity(builders::once_punctured_torus());
  MultiArc A;
  A.base = m.base();
  A.components = {m.word({0})};
  A.orientations = {true};
  auto window = stratum_subgraph(m, A, 5);
  CHECK(window.vertices.size() == 11);
  CHECK(window.edges.size() == 10);
  // Every vertex still contains the protected arc.
  for (auto& v : window.vertices) CHECK(v.find_arc(A.components[0]) >= 0);
}

TEST_CASE("degree bound: vertex degree <= kappa with equality iff no self-folded triangle") {
  std::mt19937_64 rng(77);
  for (auto T0 : {builders::polygon(7), builders::punctured_disk(2)}) {
    auto m = testutil::random_walk(MarkedTriangulation::identity(T0), 10, rng);
    int deg = static_cast<int>(explorer::neighbors(m).size());
    CHECK(deg <= m.map().arcs());
    bool self_folded = false;
    for (std::int32_t a = 0; a < m.map().arcs(); ++a)
      if (!m.map().is_flippable({a})) self_folded = true;
    CHECK((deg == m.map().arcs()) == !self_folded);
  }
}

TEST_CASE("ball layer sizes are independent of thread count") {
  auto m = MarkedTriangulation::identity(builders::polygon(8));
  SearchBudget b1, b4;
  b1.threads = 1;
  b4.threads = 4;
  auto r1 = ball(m, 4, b1);
  auto r4 = ball(m, 4, b4);
  CHECK(r1.layer_sizes == r4.layer_sizes);
  CHECK(r1.frontier == r4.frontier);
}

TEST_CASE("budget exhaustion raises SearchBudgetExceeded") {
  auto m = MarkedTriangulation::identity(builders::once_punctured_torus());
  SearchBudget tiny;
  tiny.max_states = 5;
  CHECK_THROWS_AS(ball(m, 6, tiny), SearchBudgetExceeded);
}
