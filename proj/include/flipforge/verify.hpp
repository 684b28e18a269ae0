#pragma once

#include <chrono>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flipforge/builders.hpp"
#include "flipforge/census.hpp"
#include "flipforge/constructions.hpp"
#include "flipforge/explorer.hpp"
#include "flipforge/projection.hpp"

namespace flipforge {
namespace verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::set<std::string> suites;  // empty = all of {distances, convexity, projections,
                                 // censuses, constructions, bounds}
  std::uint64_t seed = 0;
  SearchBudget search;
  CensusBudget census;
  int max_polygon = 13;     // criterion 1/2 range
  int random_pairs = 500;   // criterion 3 sample size per fixture
  int algo_instances = 10000;  // criterion 4 sample size
};

namespace detail {

using Clock = std::chrono::steady_clock;

template <typename F>
CheckResult timed(const std::string& name, F&& body) {
  CheckResult r;
  r.name = name;
  auto t0 = Clock::now();
  try {
    std::ostringstream detail;
    r.pass = body(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

inline const std::vector<int>& frozen_polygon_diameters() {
  // n = 4..13; n = 13 is the 2n-10 theorem value, the rest are certified
  // regression constants from the first exact run.
  static const std::vector<int> d{1, 2, 4, 5, 7, 9, 11, 12, 15, 16};
  return d;
}

inline MarkedTriangulation random_marked_walk(MarkedTriangulation m, int steps,
                                              std::mt19937_64& rng) {
  for (int i = 0; i < steps; ++i) {
    auto flips = m.map().flippable_arcs();
    if (flips.empty()) break;
    m = m.flip(flips[rng() % flips.size()]);
  }
  return m;
}

inline MultiArc arcs_of_vertex(const MarkedTriangulation& m) {
  MultiArc A;
  A.base = m.base();
  for (std::int32_t a = 0; a < m.map().arcs(); ++a) {
    A.components.push_back(m.word({a}));
    A.orientations.push_back(true);
  }
  return A;
}

}  // namespace detail

// Criterion 1: labeled polygon censuses are exactly Catalan, within budget.
inline CheckResult check_associahedron_census(const Options& opt,
                                              std::vector<CensusReport>& polygon_reports) {
  return detail::timed("criterion-01-associahedron-census", [&](std::ostringstream& out) {
    bool ok = true;
    for (int n = 4; n <= opt.max_polygon; ++n) {
      auto t0 = detail::Clock::now();
      auto r = build_census({.genus = 0,
                             .boundaries = 1,
                             .punctures = 0,
                             .boundary_points = n,
                             .labeled = true},
                            LabelMode::labeled, opt.census);
      double secs = std::chrono::duration<double>(detail::Clock::now() - t0).count();
      polygon_reports.push_back(r);
      auto want = catalan(n - 2).convert_to<std::size_t>();
      if (r.vertices != want) {
        ok = false;
        out << "n=" << n << " got " << r.vertices << " want " << want << "; ";
      }
      if (n == 13 && secs >= 120.0) {
        ok = false;
        out << "n=13 census took " << secs << "s (budget 120s); ";
      }
    }
    if (ok) out << "vertex counts C_2..C_" << (opt.max_polygon - 2) << " exact";
    return ok;
  });
}

// Criterion 2: certified polygon diameters match the frozen table and the
// 2n-10 value at n = 13.
inline CheckResult check_polygon_diameters(const Options& opt,
                                           const std::vector<CensusReport>& polygon_reports) {
  return detail::timed("criterion-02-polygon-diameters", [&](std::ostringstream& out) {
    bool ok = true;
    const auto& frozen = detail::frozen_polygon_diameters();
    int prev = 0;
    for (size_t i = 0; i < polygon_reports.size(); ++i) {
      int n = 4 + static_cast<int>(i);
      const auto& r = polygon_reports[i];
      if (!r.diameter_certified) {
        ok = false;
        out << "n=" << n << " uncertified; ";
      }
      if (n - 4 < static_cast<int>(frozen.size()) && r.diameter != frozen[n - 4]) {
        ok = false;
        out << "n=" << n << " diameter " << r.diameter << " != frozen " << frozen[n - 4] << "; ";
      }
      if (n == 13 && r.diameter != 2 * n - 10) {
        ok = false;
        out << "n=13 diameter " << r.diameter << " != 16; ";
      }
      if (r.diameter < prev) {
        ok = false;
        out << "diameters not monotone at n=" << n << "; ";
      }
      prev = r.diameter;
    }
    if (ok) out << "diameters 1,2,4,5,7,9,11,12,15,16 certified";
    return ok;
  });
}

// Criterion 3: lower bound <= distance <= stratum path length <= i(S,T).
inline CheckResult check_distance_sandwich(const Options& opt) {
  return detail::timed("criterion-03-distance-sandwich", [&](std::ostringstream& out) {
    std::mt19937_64 rng(opt.seed + 3);
    std::size_t checked = 0, violations = 0;
    struct Fixture {
      Triangulation T;
      int max_walk;
    };
    std::vector<Fixture> fixtures;
    for (int n = 4; n <= 9; ++n) fixtures.push_back({builders::polygon(n), 2 * n});
    fixtures.push_back({builders::once_punctured_torus(), 5});
    fixtures.push_back({builders::cylinder(), 8});
    for (auto& fx : fixtures) {
      int pairs = opt.random_pairs;
      for (int k = 0; k < pairs; ++k) {
        auto S = detail::random_marked_walk(MarkedTriangulation::identity(fx.T),
                                            static_cast<int>(rng() % (fx.max_walk + 1)), rng);
        auto base = std::make_shared<const Triangulation>(S.map());
        auto fresh = MarkedTriangulation::identity(*base);
        auto Tm = detail::random_marked_walk(fresh, static_cast<int>(rng() % (fx.max_walk + 1)),
                                             rng);
        MultiArc A = detail::arcs_of_vertex(Tm);
        auto i_ST = intersection_with_triangulation(*base, A).total;
        auto lower = pairwise_lower_bound(*base, A);
        auto d = distance(fresh, Tm, opt.search);
        auto sp = path_to_stratum(base, A);
        auto len = static_cast<std::int64_t>(sp.path.length());
        ++checked;
        if (!(lower <= d && d <= len && len <= i_ST)) {
          ++violations;
          out << "violation: lower=" << lower << " d=" << d << " len=" << len
              << " i=" << i_ST << "; ";
        }
      }
    }
    out << checked << " pairs, " << violations << " violations";
    return violations == 0;
  });
}

// Criterion 4: convenient-flip invariants over randomized instances.
inline CheckResult check_algorithm_invariants(const Options& opt) {
  return detail::timed("criterion-04-convenient-flip-invariants", [&](std::ostringstream& out) {
    std::mt19937_64 rng(opt.seed + 4);
    std::size_t instances = 0, violations = 0;
    while (instances < static_cast<std::size_t>(opt.algo_instances)) {
      Triangulation T0;
      switch (instances % 4) {
        case 0: T0 = builders::polygon(7); break;
        case 1: T0 = builders::punctured_disk(2); break;
        case 2: T0 = builders::punctured_disk(3); break;
        default: T0 = builders::once_punctured_torus(); break;
      }
      auto m = detail::random_marked_walk(MarkedTriangulation::identity(T0), 5, rng);
      auto cur = std::make_shared<const Triangulation>(m.map());
      auto probe = detail::random_marked_walk(MarkedTriangulation::identity(*cur),
                                              4 + static_cast<int>(rng() % 10), rng);
      MultiArc A;
      A.base = cur;
      for (std::int32_t a = 0; a < probe.map().arcs(); ++a)
        if (rng() % 3 != 0) {
          A.components.push_back(probe.word({a}));
          A.orientations.push_back(true);
        }
      if (A.components.empty()) continue;
      ++instances;
      auto counts = intersection_with_triangulation(*cur, A);
      if (counts.total == 0) continue;
      // Replay the walk, asserting the per-step invariants.
      auto base = cur;
      MultiArc W = A;
      auto prev = counts;
      // Persistent arcs: components already realized, and zero-intersection arcs.
      try {
        auto sp = path_to_stratum(base, A);
        auto c2 = base;
        W = A;
        prev = counts;
        for (auto step : sp.path.steps) {
          if (prev.per_arc[step] <= 0) ++violations;  // flipped a persistent arc
          marking::FlipContext ctx(c2, {step});
          W = ctx.forward(W);
          c2 = ctx.after();
          auto next = intersection_with_triangulation(*c2, W);
          if (!(next.total < prev.total)) ++violations;
          if (!(next.max_per_arc() <= prev.max_per_arc())) ++violations;
          prev = next;
        }
        if (prev.total != 0) ++violations;
      } catch (const std::exception&) {
        ++violations;
      }
    }
    out << instances << " instances, " << violations << " violations";
    return violations == 0;
  });
}

// Criterion 5: exhaustive strong convexity at small scale.
inline CheckResult check_strong_convexity_suite(const Options& opt) {
  return detail::timed("criterion-05-strong-convexity", [&](std::ostringstream& out) {
    std::size_t pairs = 0, geodesics = 0, violations = 0;
    for (int n = 5; n <= 8; ++n) {
      auto m0 = MarkedTriangulation::identity(builders::polygon(n));
      auto base = m0.base();
      // Middle diagonal: largest stratum.
      std::int32_t mid = (n - 3) / 2;
      MultiArc A;
      A.base = base;
      A.components = {words::side_word(base, base->arc_lo({mid}))};
      A.orientations = {true};
      auto window = stratum_subgraph(m0, A, 4 * n, opt.search);
      for (size_t i = 0; i < window.vertices.size(); ++i)
        for (size_t j = i + 1; j < window.vertices.size(); ++j) {
          auto dag = all_geodesics(window.vertices[i], window.vertices[j], opt.search);
          ++pairs;
          geodesics += dag.geodesic_count;
          for (const auto& v : dag.vertices)
            if (v.find_arc(A.components[0]) < 0) ++violations;
        }
    }
    {
      // Once-punctured torus: stratum of one arc, window radius 4.
      auto m0 = MarkedTriangulation::identity(builders::once_punctured_torus());
      auto base = m0.base();
      MultiArc A;
      A.base = base;
      A.components = {words::side_word(base, base->arc_lo({0}))};
      A.orientations = {true};
      auto window = stratum_subgraph(m0, A, 4, opt.search);
      for (size_t i = 0; i < window.vertices.size(); ++i)
        for (size_t j = i + 1; j < window.vertices.size(); ++j) {
          auto dag = all_geodesics(window.vertices[i], window.vertices[j], opt.search);
          ++pairs;
          geodesics += dag.geodesic_count;
          for (const auto& v : dag.vertices)
            if (v.find_arc(A.components[0]) < 0) ++violations;
        }
    }
    out << pairs << " stratum pairs, " << geodesics << " geodesics, " << violations
        << " violations";
    return violations == 0;
  });
}

// Criterion 6: projection properties against exact search distances.
inline CheckResult check_projection_properties(const Options& opt) {
  return detail::timed("criterion-06-projection-properties", [&](std::ostringstream& out) {
    std::mt19937_64 rng(opt.seed + 6);
    std::size_t checks = 0, violations = 0;
    for (int n : {6, 7}) {
      auto m0 = MarkedTriangulation::identity(builders::polygon(n));
      auto base = m0.base();
      ArcWord aw = words::side_word(base, base->arc_lo({(n - 3) / 2}));
      OrientedArc a{aw, true};
      MultiArc A;
      A.base = base;
      A.components = {aw};
      A.orientations = {true};
      // Retraction on stratum members.
      auto window = stratum_subgraph(m0, A, n, opt.search);
      for (const auto& v : window.vertices) {
        auto pv = project_arc(v, a);
        ++checks;
        if (!(pv.key == v.key())) ++violations;
      }
      // 1-Lipschitz across sampled edges, and the distance sandwich.
      for (int trial = 0; trial < 12; ++trial) {
        auto v = detail::random_marked_walk(m0, 2 + static_cast<int>(rng() % (n - 2)), rng);
        auto pv = project_arc(v, a);
        for (auto& [f, nb] : explorer::neighbors(v)) {
          auto pn = project_arc(nb, a);
          ++checks;
          if (pv.key == pn.key) continue;
          std::size_t common = 0;
          for (const auto& x : pv.arcs)
            for (const auto& y : pn.arcs)
              if (words::normalized(x) == words::normalized(y)) ++common;
          if (common + 1 != pv.arcs.size()) ++violations;
        }
        auto rep = projection_distance_checks(v, A, opt.search);
        ++checks;
        if (!rep.sandwich_holds) ++violations;
      }
      // Order dependence on two-component multiarcs.
      if (n == 7) {
        MultiArc two;
        two.base = base;
        two.components = {words::side_word(base, base->arc_lo({0})),
                          words::side_word(base, base->arc_lo({3}))};
        two.orientations = {true, true};
        MultiArc swapped = two;
        std::swap(swapped.components[0], swapped.components[1]);
        swapped.orientations = {false, true};
        for (int trial = 0; trial < 8; ++trial) {
          auto v = detail::random_marked_walk(m0, 3, rng);
          auto pa = project_multiarc(v, two);
          auto pb = project_multiarc(v, swapped);
          auto d_ab = distance_to_key(pa.vertex, pb.key, opt.search);
          auto d_strat = distance_to_stratum(v, two, opt.search);
          ++checks;
          if (!(d_ab <= d_strat)) ++violations;
        }
      }
    }
    out << checks << " checks, " << violations << " violations";
    return violations == 0;
  });
}

// Criterion 7: ball growth and the refined census cardinality bound.
inline CheckResult check_ball_growth(const Options& opt,
                                     const std::vector<CensusReport>& polygon_reports) {
  return detail::timed("criterion-07-ball-growth-bounds", [&](std::ostringstream& out) {
    std::size_t checks = 0, violations = 0;
    for (auto T0 : {builders::polygon(8), builders::once_punctured_torus(), builders::cylinder(),
                    builders::punctured_disk(2)}) {
      auto m = MarkedTriangulation::identity(T0);
      auto b = ball(m, 6, opt.search);
      int kt = T0.signature().triangle_count();
      for (int r = 0; r <= 6; ++r) {
        BigInt bound = grammar_ball_bound(r, kt);
        ++checks;
        if (BigInt(static_cast<unsigned long long>(b.cumulative(r))) > bound) ++violations;
      }
    }
    for (const auto& r : polygon_reports) {
      if (!r.diameter_certified) continue;
      BigInt card(static_cast<unsigned long long>(r.vertices));
      ++checks;
      if (card > grammar_ball_bound(r.diameter, r.signature.triangle_count(), true))
        ++violations;
    }
    out << checks << " checks, " << violations << " violations";
    return violations == 0;
  });
}

// Criterion 8: small genus censuses with frozen exact values.
inline CheckResult check_genus_censuses(const Options& opt) {
  return detail::timed("criterion-08-genus-censuses", [&](std::ostringstream& out) {
    auto gamma1 = build_census({.genus = 1, .boundaries = 1, .punctures = 0, .boundary_points = 1},
                               LabelMode::labeled, opt.census);
    auto torus = build_census({.genus = 1, .boundaries = 0, .punctures = 1, .boundary_points = 0},
                              LabelMode::labeled, opt.census);
    bool ok = gamma1.vertices <= 5 && gamma1.vertices == 1 && torus.vertices == 1;
    out << "one-holed torus census " << gamma1.vertices << " (<= 5, frozen 1), "
        << "once-punctured torus census " << torus.vertices << " (frozen 1)";
    return ok;
  });
}

// Criterion 9: counting lower bounds never exceed census cardinalities.
inline CheckResult check_counting_sandwich(const Options& opt,
                                           const std::vector<CensusReport>& polygon_reports) {
  return detail::timed("criterion-09-counting-sandwich", [&](std::ostringstream& out) {
    std::size_t checks = 0, violations = 0;
    for (const auto& r : polygon_reports) {
      ++checks;
      if (counting_lower_bounds(r.signature) > BigInt(static_cast<unsigned long long>(r.vertices)))
        ++violations;
    }
    // Omega with three labeled punctures: bound C_2 * 3! = 12.
    auto sig = SurfaceSig{.genus = 0, .boundaries = 1, .punctures = 3, .boundary_points = 1,
                          .labeled = true};
    auto r = build_census(sig, LabelMode::labeled, opt.census);
    BigInt bound = counting_lower_bounds(sig);
    ++checks;
    if (bound != 12 || bound > BigInt(static_cast<unsigned long long>(r.vertices))) ++violations;
    out << checks << " censuses, bound(disk,3)=" << bound << " <= " << r.vertices << ", "
        << violations << " violations";
    return violations == 0;
  });
}

// Criterion 10: construction certificates.
inline CheckResult check_construction_certificates(const Options& opt) {
  return detail::timed("criterion-10-construction-certificates", [&](std::ostringstream& out) {
    std::mt19937_64 rng(opt.seed + 10);
    std::size_t checks = 0, violations = 0;
    auto walk = [&](Triangulation T, int steps) {
      for (int i = 0; i < steps; ++i) {
        auto flips = T.flippable_arcs();
        if (flips.empty()) break;
        T = T.flip(flips[rng() % flips.size()]);
      }
      return T;
    };
    // Separating loops: bound and the exact curve count.
    for (int n : {2, 3}) {
      auto T = std::make_shared<const Triangulation>(
          walk(builders::from_signature({.genus = 1, .boundaries = 0, .punctures = n}), 6));
      auto loop = spanning_tree_loop(T, 0);
      ++checks;
      if (!loop.cert.holds()) ++violations;
      ++checks;
      if (loop.curve_crossings != 2 * (T->arcs() - (n - 1))) ++violations;
    }
    // Genus splits for g = 2, 3.
    for (int g : {2, 3}) {
      auto T = std::make_shared<const Triangulation>(walk(builders::genus_piece(g), 5));
      auto split = genus_split_arcs(T);
      ++checks;
      if (!(split.cert.holds() && split.cert.claimed == 20 * g - 4)) ++violations;
    }
    // Merge steps stay within six flips.
    {
      auto shape = build_two_group(0, {}, {1, 3}, {2, 4});
      auto outm = merge_step(shape.map, 0);
      ++checks;
      if (outm.path.steps.size() > 6) ++violations;
    }
    // Canonical paths within the recursive budgets: disks up to 5 punctures,
    // genus up to 3, and a closed instance.
    for (int m = 1; m <= 5; ++m) {
      for (int trial = 0; trial < (m <= 3 ? 3 : 2); ++trial) {
        auto T = walk(builders::punctured_disk(m), 3 * m + 2 * trial);
        auto res = canonical_path_disk(T);
        ++checks;
        if (!res.cert.holds()) ++violations;
        for (auto s : res.path.steps) (void)s;
      }
    }
    for (int g = 1; g <= 3; ++g) {
      for (int trial = 0; trial < 2; ++trial) {
        auto T = walk(builders::genus_piece(g), 4 + 2 * trial);
        auto res = canonical_path_genus(T);
        ++checks;
        if (!res.cert.holds()) ++violations;
      }
    }
    {
      auto T = walk(builders::from_signature({.genus = 1, .boundaries = 0, .punctures = 2}), 6);
      auto res = canonical_path_closed(T);
      ++checks;
      if (!res.cert.holds()) ++violations;
    }
    out << checks << " certificates, " << violations << " violations";
    return violations == 0;
  });
}

// Criterion 11: unlabeled punctured-disk diameters against the 12n bound.
inline CheckResult check_unlabeled_disk_diameters(const Options& opt) {
  return detail::timed("criterion-11-unlabeled-disk-diameters", [&](std::ostringstream& out) {
    bool ok = true;
    const int frozen[] = {3, 7, 12};  // m = 2, 3, 4
    for (int m = 2; m <= 4; ++m) {
      auto r = build_census({.genus = 0,
                             .boundaries = 1,
                             .punctures = m,
                             .boundary_points = 1,
                             .labeled = false},
                            LabelMode::unlabeled, opt.census);
      int n = m + 1;
      if (!(r.diameter_certified && r.diameter < 12 * n)) ok = false;
      if (r.diameter != frozen[m - 2]) ok = false;
      out << "m=" << m << " diam=" << r.diameter << " (<" << 12 * n << "); ";
    }
    return ok;
  });
}

// Runs the selected suites; with no selection every criterion runs, in
// numeric order.
inline std::vector<CheckResult> run(const Options& opt) {
  auto want = [&](const char* suite) {
    return opt.suites.empty() || opt.suites.count(suite) > 0;
  };
  std::vector<CheckResult> results;
  std::vector<CensusReport> polygon_reports;
  if (want("censuses") || want("bounds"))
    results.push_back(check_associahedron_census(opt, polygon_reports));
  if (want("censuses")) results.push_back(check_polygon_diameters(opt, polygon_reports));
  if (want("distances")) {
    results.push_back(check_distance_sandwich(opt));
    results.push_back(check_algorithm_invariants(opt));
  }
  if (want("convexity")) results.push_back(check_strong_convexity_suite(opt));
  if (want("projections")) results.push_back(check_projection_properties(opt));
  if (want("bounds")) results.push_back(check_ball_growth(opt, polygon_reports));
  if (want("censuses")) results.push_back(check_genus_censuses(opt));
  if (want("bounds")) results.push_back(check_counting_sandwich(opt, polygon_reports));
  if (want("constructions")) results.push_back(check_construction_certificates(opt));
  if (want("censuses")) results.push_back(check_unlabeled_disk_diameters(opt));
  return results;
}

}  // namespace verify
}  // namespace flipforge
