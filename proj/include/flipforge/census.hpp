#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "flipforge/builders.hpp"
#include "flipforge/codes.hpp"

namespace flipforge {

using BigInt = boost::multiprecision::cpp_int;

struct CensusBudget {
  std::size_t max_vertices = 1'000'000;
  std::size_t certify_diameter_below = 100'000;  // all-source BFS cutoff
  int threads = 1;
};

// Quotient of the flip graph by orientation-preserving homeomorphisms
// (pointwise on labeled marked points, setwise on unlabeled ones).
struct QuotientGraph {
  SurfaceSig signature;
  LabelMode mode = LabelMode::labeled;
  std::vector<Triangulation> reps;  // one representative per class
  std::vector<CanonicalCode> codes;
  std::vector<std::vector<int>> adj;  // simple graph, self-loops dropped

  std::size_t vertex_count() const { return reps.size(); }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& v : adj) e += v.size();
    return e / 2;
  }
};

struct CensusReport {
  SurfaceSig signature;
  LabelMode mode = LabelMode::labeled;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  int diameter = 0;
  bool diameter_certified = false;
  std::vector<std::size_t> eccentricity_histogram;  // index = eccentricity
};

namespace census_detail {

inline std::vector<int> bfs_dists(const QuotientGraph& G, int src) {
  std::vector<int> dist(G.vertex_count(), -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : G.adj[u])
      if (dist[v] == -1) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist;
}

}  // namespace census_detail

inline QuotientGraph build_quotient(const SurfaceSig& sig, LabelMode mode,
                                    const CensusBudget& budget = {}) {
  QuotientGraph G;
  G.signature = sig;
  G.mode = mode;
  Triangulation seed = builders::from_signature(sig);
  std::unordered_map<CanonicalCode, int, CanonicalCodeHash> index;
  G.reps.push_back(seed);
  G.codes.push_back(canonical_code(seed, mode));
  index.emplace(G.codes[0], 0);
  std::vector<std::pair<int, int>> edges;
  for (size_t qi = 0; qi < G.reps.size(); ++qi) {
    Triangulation cur = G.reps[qi];  // copy: reps may reallocate
    for (auto& [a, nb] : enumerate_flips(cur)) {
      auto code = canonical_code(nb, mode);
      auto [it, fresh] = index.emplace(std::move(code), static_cast<int>(G.reps.size()));
      if (fresh) {
        if (G.reps.size() >= budget.max_vertices)
          throw CensusBudgetExceeded("census exceeded its vertex budget");
        G.reps.push_back(nb);
        G.codes.push_back(it->first);
      }
      int u = static_cast<int>(qi), v = it->second;
      if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  G.adj.assign(G.reps.size(), {});
  for (auto [u, v] : edges) {
    G.adj[u].push_back(v);
    G.adj[v].push_back(u);
  }
  return G;
}

// Exact diameter and eccentricity histogram.  In labeled mode vertices in a
// common unlabeled-code orbit share their eccentricity (label permutations
// act as graph automorphisms), so one BFS per orbit suffices.
inline CensusReport census_report(const QuotientGraph& G,
                                  const CensusBudget& budget = {}) {
  CensusReport r;
  r.signature = G.signature;
  r.mode = G.mode;
  r.vertices = G.vertex_count();
  r.edges = G.edge_count();
  if (r.vertices == 0) return r;
  if (r.vertices == 1) {
    r.diameter = 0;
    r.diameter_certified = true;
    r.eccentricity_histogram = {1};
    return r;
  }
  if (r.vertices <= budget.certify_diameter_below) {
    std::vector<int> orbit_rep(r.vertices);
    std::vector<std::vector<int>> orbit_members;
    if (G.mode == LabelMode::labeled) {
      std::unordered_map<CanonicalCode, int, CanonicalCodeHash> orbit_index;
      for (size_t v = 0; v < r.vertices; ++v) {
        auto oc = canonical_code(G.reps[v], LabelMode::unlabeled);
        auto [it, fresh] =
            orbit_index.emplace(std::move(oc), static_cast<int>(orbit_members.size()));
        if (fresh) orbit_members.push_back({});
        orbit_members[it->second].push_back(static_cast<int>(v));
      }
    } else {
      for (size_t v = 0; v < r.vertices; ++v) orbit_members.push_back({static_cast<int>(v)});
    }
    int diam = 0;
    std::vector<std::size_t> hist;
    for (const auto& members : orbit_members) {
      auto dist = census_detail::bfs_dists(G, members[0]);
      int ecc = 0;
      for (int d : dist) {
        if (d == -1) throw InternalInvariantViolation("quotient graph is disconnected");
        ecc = std::max(ecc, d);
      }
      diam = std::max(diam, ecc);
      if (static_cast<size_t>(ecc) >= hist.size()) hist.resize(ecc + 1, 0);
      hist[ecc] += members.size();
    }
    r.diameter = diam;
    r.diameter_certified = true;
    r.eccentricity_histogram = std::move(hist);
  } else {
    // Double sweep: a lower bound on the diameter, flagged uncertified.
    auto d0 = census_detail::bfs_dists(G, 0);
    int far = 0;
    for (size_t v = 0; v < d0.size(); ++v)
      if (d0[v] > d0[far]) far = static_cast<int>(v);
    auto d1 = census_detail::bfs_dists(G, far);
    int diam = 0;
    for (int d : d1) diam = std::max(diam, d);
    r.diameter = diam;
    r.diameter_certified = false;
  }
  return r;
}

inline CensusReport build_census(const SurfaceSig& sig, LabelMode mode,
                                 const CensusBudget& budget = {}) {
  return census_report(build_quotient(sig, mode, budget), budget);
}

// ---- Closed-form bounds and counts -----------------------------------------

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt catalan(int n) {
  // C_n = (2n)! / (n! (n+1)!)
  if (n < 0) return 0;
  return factorial(2 * n) / (factorial(n) * factorial(n + 1));
}

inline BigInt big_pow(BigInt base, int exp) {
  BigInt out = 1;
  while (exp > 0) {
    if (exp & 1) out *= base;
    base *= base;
    exp >>= 1;
  }
  return out;
}

// Ball-cardinality bound from the graph grammar on dual trivalent graphs:
// 4^(10m) * 4^(kappa_tilde), or the refined census form 3^(kappa_tilde) * 8^m.
inline BigInt grammar_ball_bound(int m, int kappa_tilde, bool refined = false) {
  FLIPFORGE_CHECK(m >= 0 && kappa_tilde >= 0);
  if (refined) return big_pow(3, kappa_tilde) * big_pow(8, m);
  return big_pow(4, 10 * m) * big_pow(4, kappa_tilde);
}

// Census lower bounds by counting: the genus piece contributes
// (g-1)/2 * (g-1)!, the labeled punctured disk C_(n-2) * (n-1)!, and a
// closed surface at least the product of the two.
inline BigInt genus_counting_bound(int g) {
  if (g < 2) return 0;
  return (BigInt(g - 1) * factorial(g - 1)) / 2;
}

inline BigInt disk_counting_bound(int punctures) {
  // Omega with (n-1) = punctures interior points: C_(n-2) * (n-1)!.
  int n = punctures + 1;
  if (n < 2) return 1;
  return catalan(n - 2) * factorial(n - 1);
}

// Brown-type count for the unlabeled punctured disk: 2(4n-7)!/((n-1)!(3n-4)!).
inline BigInt brown_unlabeled_disk_bound(int n) {
  if (n < 2) return 1;
  return 2 * factorial(4 * n - 7) / (factorial(n - 1) * factorial(3 * n - 4));
}

inline BigInt counting_lower_bounds(const SurfaceSig& sig) {
  bool gamma_shape = sig.boundaries == 1 && sig.boundary_points == 1 && sig.punctures == 0;
  bool omega_shape =
      sig.genus == 0 && sig.boundaries == 1 && sig.boundary_points == 1 && sig.punctures >= 1;
  bool closed = sig.boundaries == 0;
  if (gamma_shape) return genus_counting_bound(sig.genus);
  if (omega_shape) {
    if (!sig.labeled) return brown_unlabeled_disk_bound(sig.punctures + 1);
    return disk_counting_bound(sig.punctures);
  }
  if (closed && sig.labeled) {
    BigInt g = genus_counting_bound(sig.genus);
    BigInt o = disk_counting_bound(sig.punctures > 0 ? sig.punctures - 1 : 0);
    BigInt prod = (g > 0 ? g : BigInt(1)) * (o > 0 ? o : BigInt(1));
    return prod;
  }
  return 1;  // no stated bound applies
}

// One evaluated closed-form diameter statement.
struct DiameterBound {
  std::string name;
  bool is_upper = true;
  bool applies = false;
  double value = 0.0;   // bound on the diameter when it applies
  bool exact = false;   // equality rather than inequality
};

inline std::vector<DiameterBound> diameter_bounds(const SurfaceSig& sig, LabelMode mode) {
  std::vector<DiameterBound> out;
  const int g = sig.genus, b = sig.boundaries, s = sig.punctures, p = sig.boundary_points;
  const bool labeled = mode == LabelMode::labeled;
  {
    DiameterBound d{.name = "polygon_exact_2n_minus_10", .is_upper = true};
    d.applies = (g == 0 && b == 1 && s == 0 && p > 12 && labeled);
    d.value = 2.0 * p - 10.0;
    d.exact = true;
    out.push_back(d);
  }
  {
    DiameterBound d{.name = "genus_upper_1000_g_log", .is_upper = true};
    bool gamma = (b == 1 && p == 1 && s == 0 && g >= 1);
    bool one_puncture = (b == 0 && s == 1 && g >= 1);
    d.applies = gamma || one_puncture;
    d.value = 1000.0 * g * std::log(g + 1.0);
    out.push_back(d);
  }
  {
    DiameterBound d{.name = "puncture_upper_400_n_log", .is_upper = true};
    int n = s + 1;
    d.applies = (g == 0 && b == 1 && p == 1 && s >= 1 && labeled);
    d.value = 400.0 * n * std::log(n + 1.0);
    out.push_back(d);
  }
  {
    DiameterBound d{.name = "unmarked_disk_upper_12n", .is_upper = true};
    int n = s + 1;
    d.applies = (g == 0 && b == 1 && p == 1 && s >= 1 && !labeled);
    d.value = 12.0 * n;
    out.push_back(d);
  }
  {
    DiameterBound d{.name = "sphere_upper_410_n_log", .is_upper = true};
    d.applies = (g == 0 && b == 0 && s >= 3 && labeled);
    d.value = 410.0 * s * std::log(static_cast<double>(s));
    out.push_back(d);
  }
  {
    DiameterBound d{.name = "sphere_unlabeled_upper_22n", .is_upper = true};
    d.applies = (g == 0 && b == 0 && s >= 3 && !labeled);
    d.value = 22.0 * s;
    out.push_back(d);
  }
  {
    DiameterBound d{.name = "count_lower_2e-5", .is_upper = false};
    d.applies = (b == 0 && labeled && s >= 1);
    d.value = 2e-5 * (s * std::log(s + 1.0) + g * std::log(g + 1.0));
    out.push_back(d);
  }
  return out;
}

// Lower bound on the diameter from the counting inequality:
// diam > (log card(MF(Gamma)) + log card(MF(Omega)) - kappa_tilde log 4) / (10 log 4).
inline double cardinality_diameter_lower_bound(const SurfaceSig& sig) {
  BigInt cg = genus_counting_bound(sig.genus);
  BigInt co = disk_counting_bound(sig.punctures > 0 ? sig.punctures - 1 : 0);
  auto safe_log = [](const BigInt& v) {
    return v <= 1 ? 0.0 : std::log(v.convert_to<double>());
  };
  return (safe_log(cg) + safe_log(co) - sig.triangle_count() * std::log(4.0)) /
         (10.0 * std::log(4.0));
}

}  // namespace flipforge
