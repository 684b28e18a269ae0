#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "flipforge/builders.hpp"
#include "flipforge/projection.hpp"
#include "helpers.hpp"

using namespace flipforge;

namespace {
std::shared_ptr<const Triangulation> share(Triangulation T) {
  return std::make_shared<const Triangulation>(std::move(T));
}
}  // namespace

TEST_CASE("combing a disjoint word leaves it unchanged") {
  auto base = share(builders::polygon(7));
  OrientedArc a{words::side_word(base, base->arc_lo({0})), true};
  auto t = testutil::polygon_chord_word(base, 7, 4, 6);
  REQUIRE(intersection_number(a.word, t) == 0);
  auto out = comb(a, t);
  REQUIRE(out.size() == 1);
  CHECK(words::normalized(out[0]) == words::normalized(t));
}

TEST_CASE("pentagon comb: one crossing splits into two boundary-parallel pieces at the head") {
  auto base = share(builders::polygon(5));
  // a = the fan arc 0-2 oriented towards vertex 2; t = chord 1-3.
  ArcWord aw = words::side_word(base, base->arc_lo({0}));
  bool head2_forward = (aw.end_vertex() == 2);
  OrientedArc a{aw, head2_forward};
  auto t = testutil::polygon_chord_word(base, 5, 1, 3);
  auto out = comb(a, t);
  REQUIRE(out.size() == 2);
  for (const auto& w : out) {
    CHECK((w.start_vertex() == 2 || w.end_vertex() == 2));  // ends at the head
    CHECK(w.crossings.empty());                             // boundary-parallel pieces
  }
}

TEST_CASE("comb output components are pairwise disjoint and end at the head") {
  std::mt19937_64 rng(515);
  for (int trial = 0; trial < 25; ++trial) {
    auto T0 = (trial % 2 == 0) ? builders::polygon(8) : builders::punctured_disk(2);
    auto m = MarkedTriangulation::identity(T0);
    auto base = m.base();
    auto probe = testutil::random_walk(m, 6, rng);
    // a: an arc of the base; t: an arc of the probe crossing it if possible.
    OrientedArc a{words::side_word(base, base->arc_lo({0})), (trial & 1) != 0};
    int head = a.forward ? a.word.end_vertex() : a.word.start_vertex();
    for (std::int32_t j = 0; j < probe.map().arcs(); ++j) {
      ArcWord t = probe.word({j});
      auto out = comb(a, t);
      std::int64_t icount = intersection_number(a.word, t);
      if (icount == 0) continue;
      for (const auto& w : out) CHECK((w.start_vertex() == head || w.end_vertex() == head));
      for (size_t x = 0; x < out.size(); ++x)
        for (size_t y = x + 1; y < out.size(); ++y)
          CHECK(intersection_number(out[x], out[y]) == 0);
      // i(comb(s), comb(t)) <= i(s, t) for pairs of pushed arcs.
      for (std::int32_t k = 0; k < j; ++k) {
        ArcWord s = probe.word({k});
        if (intersection_number(a.word, s) == 0) continue;
        auto outs = comb(a, s);
        std::int64_t pushed = 0;
        for (const auto& ws : outs)
          for (const auto& wt : out) pushed += intersection_number(ws, wt);
        CHECK(pushed <= intersection_number(s, t));
      }
    }
  }
}

TEST_CASE("pentagon projection lands on the expected triangulation") {
  auto m0 = MarkedTriangulation::identity(builders::polygon(5));
  auto base = m0.base();
  // T = the fan at vertex 1 = {13, 14}; a = 0-2 oriented to head 2.
  auto T = [&] {
    // walk to the triangulation containing chords (1,3) and (1,4)
    auto want13 = words::normalized(testutil::polygon_chord_word(base, 5, 1, 3));
    auto want14 = words::normalized(testutil::polygon_chord_word(base, 5, 1, 4));
    std::vector<MarkedTriangulation> frontier{m0};
    std::unordered_map<VertexKey, int, KeyHash> seen{{m0.key(), 0}};
    while (true) {
      std::vector<MarkedTriangulation> next;
      for (auto& v : frontier) {
        bool has13 = false, has14 = false;
        for (std::int32_t a = 0; a < v.map().arcs(); ++a) {
          auto n = words::normalized(v.word({a}));
          if (n == want13) has13 = true;
          if (n == want14) has14 = true;
        }
        if (has13 && has14) return v;
        for (auto& [a, nb] : explorer::neighbors(v))
          if (seen.emplace(nb.key(), 0).second) next.push_back(std::move(nb));
      }
      REQUIRE_FALSE(next.empty());
      frontier = std::move(next);
    }
  }();
  ArcWord aw = words::side_word(base, base->arc_lo({0}));
  OrientedArc a{aw, aw.end_vertex() == 2};
  auto proj = project_arc(T, a);
  // Expected image: {02, 24}.
  auto want02 = words::normalized(words::side_word(base, base->arc_lo({0})));
  auto want24 = words::normalized(testutil::polygon_chord_word(base, 5, 2, 4));
  REQUIRE(proj.arcs.size() == 2);
  std::vector<ArcWord> got{words::normalized(proj.arcs[0]), words::normalized(proj.arcs[1])};
  CHECK(((got[0] == want02 && got[1] == want24) || (got[0] == want24 && got[1] == want02)));
  CHECK(distance(T, proj.vertex) == 2);
}

TEST_CASE("projection is a retraction: stratum members are fixed") {
  std::mt19937_64 rng(616);
  for (int trial = 0; trial < 10; ++trial) {
    auto m0 = MarkedTriangulation::identity(builders::polygon(7));
    auto base = m0.base();
    ArcWord aw = words::side_word(base, base->arc_lo({1}));
    OrientedArc a{aw, (trial & 1) != 0};
    // Random stratum member: flip anything except the protected arc.
    auto v = m0;
    for (int s = 0; s < 5; ++s) {
      std::vector<std::int32_t> ok;
      for (std::int32_t x = 0; x < v.map().arcs(); ++x)
        if (v.map().is_flippable({x}) && v.find_arc(aw) != x) ok.push_back(x);
      v = v.flip({ok[rng() % ok.size()]});
      REQUIRE(v.find_arc(aw) >= 0);
    }
    auto proj = project_arc(v, a);
    CHECK(proj.key == v.key());
    CHECK(proj.vertex.key() == v.key());
  }
}

TEST_CASE("projection is 1-Lipschitz across flip-graph edges") {
  std::mt19937_64 rng(717);
  for (auto T0 : {builders::polygon(6), builders::polygon(7)}) {
    auto m0 = MarkedTriangulation::identity(T0);
    auto base = m0.base();
    ArcWord aw = words::side_word(base, base->arc_lo({0}));
    OrientedArc a{aw, true};
    for (int trial = 0; trial < 8; ++trial) {
      auto v = testutil::random_walk(m0, 4, rng);
      auto pv = project_arc(v, a);
      for (auto& [f, nb] : explorer::neighbors(v)) {
        auto pn = project_arc(nb, a);
        // Images are equal or adjacent: arc class sets share all but at
        // most one element.
        if (pv.key == pn.key) continue;
        std::size_t common = 0;
        for (const auto& x : pv.arcs)
          for (const auto& y : pn.arcs)
            if (words::normalized(x) == words::normalized(y)) ++common;
        CHECK(common + 1 == pv.arcs.size());
      }
    }
  }
}

TEST_CASE("multiarc projection: composition order and bounds") {
  auto m0 = MarkedTriangulation::identity(builders::polygon(6));
  auto base = m0.base();
  // A = two disjoint chords present in the base fan: arcs 0 and 2.
  MultiArc A;
  A.base = base;
  A.components = {words::side_word(base, base->arc_lo({0})),
                  words::side_word(base, base->arc_lo({2}))};
  A.orientations = {true, true};
  // T in F_A projects to itself.
  auto pj = project_multiarc(m0, A);
  CHECK(pj.key == m0.key());
  // |A| = 1 composition equals project_arc.
  MultiArc single;
  single.base = base;
  single.components = {A.components[0]};
  single.orientations = {true};
  std::mt19937_64 rng(818);
  auto v = testutil::random_walk(m0, 5, rng);
  auto p1 = project_multiarc(v, single);
  auto p2 = project_arc(v, {A.components[0], true});
  CHECK(p1.key == p2.key);
}

TEST_CASE("hexagon: both projection-distance inequalities hold on sampled vertices") {
  std::mt19937_64 rng(919);
  auto m0 = MarkedTriangulation::identity(builders::polygon(6));
  auto base = m0.base();
  MultiArc A;
  A.base = base;
  A.components = {words::side_word(base, base->arc_lo({1}))};
  A.orientations = {true};
  for (int trial = 0; trial < 10; ++trial) {
    auto v = testutil::random_walk(m0, 3 + trial % 3, rng);
    auto rep = projection_distance_checks(v, A);
    CHECK(rep.sandwich_holds);
  }
  // Order dependence: d(pi_sigma(T), pi_eps(T)) <= d(T, F_A).
  MultiArc two;
  two.base = base;
  two.components = {words::side_word(base, base->arc_lo({0})),
                    words::side_word(base, base->arc_lo({2}))};
  two.orientations = {true, true};
  MultiArc swapped = two;
  std::swap(swapped.components[0], swapped.components[1]);
  swapped.orientations = {false, true};
  for (int trial = 0; trial < 6; ++trial) {
    auto v = testutil::random_walk(m0, 3, rng);
    auto pa = project_multiarc(v, two);
    auto pb = project_multiarc(v, swapped);
    auto d_ab = distance_to_key(pa.vertex, pb.key);
    auto d_strat = distance_to_stratum(v, two);
    CHECK(d_ab <= d_strat);
  }
}

TEST_CASE("strong convexity on the 8-gon stratum of one diagonal") {
  auto m0 = MarkedTriangulation::identity(builders::polygon(8));
  auto base = m0.base();
  MultiArc A;
  A.base = base;
  A.components = {words::side_word(base, base->arc_lo({2}))};
  A.orientations = {true};
  // Collect stratum vertices within a window and check all geodesics.
  auto window = stratum_subgraph(m0, A, 4);
  std::vector<std::pair<MarkedTriangulation, MarkedTriangulation>> pairs;
  for (size_t i = 0; i < window.vertices.size(); i += 3)
    for (size_t j = i + 1; j < window.vertices.size(); j += 3)
      pairs.push_back({window.vertices[i], window.vertices[j]});
  auto rep = check_strong_convexity(A, pairs);
  CHECK(rep.pairs_checked == pairs.size());
  CHECK(rep.violations == 0);
  CHECK(rep.geodesics_total >= pairs.size());
}
