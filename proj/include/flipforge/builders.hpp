#pragma once

#include <array>
#include <numeric>
#include <vector>

#include "flipforge/surface.hpp"

namespace flipforge {
namespace builders {

namespace detail {

// Derive corner vertex ids from a glue table by walking vertex fans; ids are
// assigned in fan discovery order over corners.
inline std::vector<int> vertices_from_fans(int n, const std::vector<Side>& glue) {
  auto ccw = [&](Corner k) -> Corner {
    Side g = glue[side_enc(k / 3, (k % 3 + 2) % 3)];
    return g == kNoSide ? -1 : side_enc(side_tri(g), side_idx(g));
  };
  auto cw = [&](Corner k) -> Corner {
    Side g = glue[side_enc(k / 3, k % 3)];
    return g == kNoSide ? -1 : side_enc(side_tri(g), (side_idx(g) + 1) % 3);
  };
  std::vector<int> vid(3 * n, -1);
  int next = 0;
  for (Corner k0 = 0; k0 < 3 * n; ++k0) {
    if (vid[k0] != -1) continue;
    Corner start = k0;
    int guard = 0;
    while (true) {
      Corner p = cw(start);
      if (p == -1 || p == k0) break;
      start = p;
      if (++guard > 3 * n) throw InvalidGluing("fan walk does not terminate");
    }
    if (cw(start) != -1) start = k0;  // closed fan
    Corner k = start;
    guard = 0;
    while (true) {
      vid[k] = next;
      Corner nk = ccw(k);
      if (nk == -1 || nk == start) break;
      k = nk;
      if (++guard > 3 * n) throw InvalidGluing("fan walk does not terminate");
    }
    ++next;
  }
  return vid;
}

struct GlueTable {
  int triangles = 0;
  std::vector<Side> glue;

  void pair(Side a, Side b) {
    FLIPFORGE_CHECK(glue[a] == kNoSide && glue[b] == kNoSide && a != b);
    glue[a] = b;
    glue[b] = a;
  }
  Triangulation finish(bool labeled) const {
    return Triangulation::from_tables(triangles, glue, vertices_from_fans(triangles, glue),
                                      std::nullopt, labeled);
  }
};

// Fan triangulation of an N-gon (N >= 3).  Boundary side at polygon position
// j (vertex j -> j+1) is returned by `pos`.
inline GlueTable polygon_fan(int N) {
  FLIPFORGE_CHECK(N >= 3);
  GlueTable g;
  g.triangles = N - 2;
  g.glue.assign(3 * g.triangles, kNoSide);
  for (int i = 0; i + 1 < N - 2; ++i) g.pair(side_enc(i, 2), side_enc(i + 1, 0));
  return g;
}
inline Side polygon_pos(int N, int j) {
  if (j == 0) return side_enc(0, 0);
  if (j == N - 1) return side_enc(N - 3, 2);
  return side_enc(j - 1, 1);
}

// Subdivide triangle t of a glue table around a new interior vertex.  Sides
// 1 and 2 of t migrate to the two new triangles; partners that are
// themselves sides of t migrate with them.
inline void cone_triangle(GlueTable& g, int t) {
  int n1 = g.triangles, n2 = g.triangles + 1;
  g.triangles += 2;
  g.glue.resize(3 * g.triangles, kNoSide);
  Side B = g.glue[side_enc(t, 1)], C = g.glue[side_enc(t, 2)];
  auto remap = [&](Side s) {
    if (s == side_enc(t, 1)) return side_enc(n1, 0);
    if (s == side_enc(t, 2)) return side_enc(n2, 0);
    return s;
  };
  g.glue[side_enc(n1, 0)] = (B == kNoSide) ? kNoSide : remap(B);
  g.glue[side_enc(n2, 0)] = (C == kNoSide) ? kNoSide : remap(C);
  if (g.glue[side_enc(n1, 0)] != kNoSide) g.glue[g.glue[side_enc(n1, 0)]] = side_enc(n1, 0);
  if (g.glue[side_enc(n2, 0)] != kNoSide) g.glue[g.glue[side_enc(n2, 0)]] = side_enc(n2, 0);
  Side A = g.glue[side_enc(t, 0)];
  if (A == side_enc(t, 1) || A == side_enc(t, 2)) {
    g.glue[side_enc(t, 0)] = remap(A);
    g.glue[remap(A)] = side_enc(t, 0);
  }
  g.glue[side_enc(t, 1)] = kNoSide;
  g.glue[side_enc(t, 2)] = kNoSide;
  g.pair(side_enc(t, 1), side_enc(n1, 2));
  g.pair(side_enc(n1, 1), side_enc(n2, 2));
  g.pair(side_enc(n2, 1), side_enc(t, 2));
}

}  // namespace detail

// Fan-triangulated disk with n labeled boundary points.
inline Triangulation polygon(int n) {
  auto g = detail::polygon_fan(n);
  return g.finish(true);
}

// Sphere with three punctures: two triangles glued along all sides.
inline Triangulation thrice_punctured_sphere(bool labeled = true) {
  detail::GlueTable g;
  g.triangles = 2;
  g.glue.assign(6, kNoSide);
  g.pair(side_enc(0, 0), side_enc(1, 0));
  g.pair(side_enc(0, 1), side_enc(1, 2));
  g.pair(side_enc(0, 2), side_enc(1, 1));
  return g.finish(labeled);
}

// Canonical triangulation for an arbitrary triangulable signature.  Built
// from a fan-triangulated polygon with side gluings for handles and extra
// boundary circuits, plus coned-in interior punctures.  For b >= 2 the
// boundary points are distributed as evenly as possible over the circuits,
// largest share on the first.
inline Triangulation from_signature(const SurfaceSig& sig) {
  if (!sig.triangulable()) throw NotTriangulable("signature not triangulable: " + sig.str());
  const int g = sig.genus, b = sig.boundaries, s = sig.punctures, p = sig.boundary_points;

  if (b == 0) {
    detail::GlueTable t;
    int cones = 0;
    if (g == 0) {
      t.triangles = 2;
      t.glue.assign(6, kNoSide);
      t.pair(side_enc(0, 0), side_enc(1, 0));
      t.pair(side_enc(0, 1), side_enc(1, 2));
      t.pair(side_enc(0, 2), side_enc(1, 1));
      cones = s - 3;
    } else {
      int N = 4 * g;
      t = detail::polygon_fan(N);
      for (int h = 0; h < g; ++h) {
        int q = 4 * h;
        t.pair(detail::polygon_pos(N, q), detail::polygon_pos(N, q + 2));
        t.pair(detail::polygon_pos(N, q + 1), detail::polygon_pos(N, q + 3));
      }
      cones = s - 1;
    }
    FLIPFORGE_CHECK(cones >= 0);
    for (int i = 0; i < cones; ++i) detail::cone_triangle(t, 0);
    Triangulation T = t.finish(sig.labeled);
    if (T.signature() != sig) throw SignatureMismatch("construction produced " + T.signature().str());
    return T;
  }

  // Boundary point distribution over circuits.
  std::vector<int> share(b, p / b);
  for (int j = 0; j < p % b; ++j) ++share[j];

  int N = p + 2 * (b - 1) + 4 * g;
  int zips = 0;
  if (N < 3) {  // disk with p <= 2 boundary points; trade a zip for a puncture
    zips = 1;
    N = p + 2;
  }
  auto t = detail::polygon_fan(N);
  int pos = share[0];
  if (zips) {
    t.pair(detail::polygon_pos(N, pos), detail::polygon_pos(N, pos + 1));
  } else {
    for (int j = 1; j < b; ++j) {
      Side u = detail::polygon_pos(N, pos);
      Side v = detail::polygon_pos(N, pos + share[j] + 1);
      t.pair(u, v);
      pos += share[j] + 2;
    }
    for (int h = 0; h < g; ++h) {
      t.pair(detail::polygon_pos(N, pos), detail::polygon_pos(N, pos + 2));
      t.pair(detail::polygon_pos(N, pos + 1), detail::polygon_pos(N, pos + 3));
      pos += 4;
    }
  }
  int cones = s - zips;
  FLIPFORGE_CHECK(cones >= 0);
  for (int i = 0; i < cones; ++i) detail::cone_triangle(t, 0);
  Triangulation T = t.finish(sig.labeled);
  if (T.signature() != sig) throw SignatureMismatch("construction produced " + T.signature().str());
  return T;
}

inline Triangulation once_punctured_torus() {
  return from_signature({.genus = 1, .boundaries = 0, .punctures = 1, .boundary_points = 0});
}

// Cylinder with one marked point on each boundary curve.
inline Triangulation cylinder() {
  return from_signature({.genus = 0, .boundaries = 2, .punctures = 0, .boundary_points = 2});
}

// Genus-g surface with one boundary curve carrying a single marked point.
inline Triangulation genus_piece(int g, bool labeled = true) {
  return from_signature(
      {.genus = g, .boundaries = 1, .punctures = 0, .boundary_points = 1, .labeled = labeled});
}

// Disk with m interior punctures and one boundary marked point.
inline Triangulation punctured_disk(int m, bool labeled = true) {
  return from_signature(
      {.genus = 0, .boundaries = 1, .punctures = m, .boundary_points = 1, .labeled = labeled});
}

}  // namespace builders
}  // namespace flipforge
