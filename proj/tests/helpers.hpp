#pragma once

// Test-only oracles and generators, kept independent of the library's
// transport machinery so they can referee it.

#include <cstdint>
#include <random>
#include <vector>

#include "flipforge/builders.hpp"
#include "flipforge/marking.hpp"
#include "flipforge/words.hpp"

namespace testutil {

using namespace flipforge;

// ---- Polygon chord oracle -------------------------------------------------
// In a disk, an arc is determined by its endpoints.  For the fan base of
// builders::polygon(n) the word of the chord u-v is write-once arithmetic.

inline ArcWord polygon_chord_word(std::shared_ptr<const Triangulation> base, int n, int u,
                                  int v) {
  FLIPFORGE_CHECK(0 <= u && u < v && v < n);
  if (u == 0) {
    // fan arcs 0-v: v==1: boundary pos 0; 2<=v<=n-2: diagonal; v==n-1: boundary
    Side s;
    if (v == 1)
      s = builders::detail::polygon_pos(n, 0);
    else if (v == n - 1)
      s = builders::detail::polygon_pos(n, n - 1);
    else
      s = side_enc(v - 2, 2);
    auto w = words::side_word(std::move(base), s);
    if (w.start_vertex() != u) w = words::reversed(w);
    return w;
  }
  if (v == u + 1) return words::side_word(std::move(base), builders::detail::polygon_pos(n, u));
  ArcWord w;
  w.base = std::move(base);
  w.start = side_enc(u - 1, 1);
  w.end = side_enc(v - 2, 2);
  for (int j = u + 1; j <= v - 1; ++j) w.crossings.push_back(side_enc(j - 2, 2));
  return w;
}

// Chords of a polygon cross iff their endpoints interleave.
inline int polygon_cross_oracle(std::pair<int, int> a, std::pair<int, int> b) {
  auto [u, v] = a;
  auto [x, y] = b;
  if (u == x || u == y || v == x || v == y) return 0;
  auto inside = [&](int q) { return u < q && q < v; };
  return (inside(x) != inside(y)) ? 1 : 0;
}

// ---- Once-punctured torus slope oracle -------------------------------------
// Arcs are primitive slopes; a triangulation is a Farey triple; a flip
// replaces a slope by the other of sum/difference; i = |det| - 1.

struct Slope {
  std::int64_t p = 0, q = 0;
  friend bool operator==(const Slope& a, const Slope& b) { return a.p == b.p && a.q == b.q; }
};

inline Slope normalize(Slope s) {
  if (s.p < 0 || (s.p == 0 && s.q < 0)) return {-s.p, -s.q};
  return s;
}

inline std::int64_t det(const Slope& a, const Slope& b) {
  std::int64_t d = a.p * b.q - a.q * b.p;
  return d < 0 ? -d : d;
}

inline std::int64_t slope_intersection(const Slope& a, const Slope& b) {
  std::int64_t d = det(a, b);
  return d == 0 ? 0 : d - 1;
}

struct SlopeTriple {
  Slope s[3];

  void flip(int k) {
    const Slope& a = s[(k + 1) % 3];
    const Slope& b = s[(k + 2) % 3];
    Slope sum = normalize({a.p + b.p, a.q + b.q});
    Slope dif = normalize({a.p - b.p, a.q - b.q});
    Slope old = normalize(s[k]);
    s[k] = (sum == old) ? dif : sum;
    FLIPFORGE_CHECK(!(normalize(s[k]) == old));
  }
};

inline SlopeTriple torus_start_triple() {
  return {{Slope{1, 0}, Slope{0, 1}, Slope{1, 1}}};
}

// ---- Word inflation (inverse reduction rules) ------------------------------

inline std::vector<int> segment_triangles(const ArcWord& w) {
  std::vector<int> tau{w.start / 3};
  for (Side e : w.crossings) tau.push_back(side_tri(w.base->glue(e)));
  return tau;
}

// Inserts one removable bigon or end spike, chosen at random.  Returns
// false when the chosen site is blocked (boundary), so callers just retry.
inline bool inflate_once(ArcWord& w, std::mt19937_64& rng) {
  const Triangulation& T = *w.base;
  int what = static_cast<int>(rng() % 3);
  if (what == 0) {
    auto tau = segment_triangles(w);
    size_t pos = rng() % tau.size();
    int t = tau[pos];
    std::vector<Side> options;
    for (int i = 0; i < 3; ++i)
      if (!T.is_boundary_side(side_enc(t, i))) options.push_back(side_enc(t, i));
    if (options.empty()) return false;
    Side e = options[rng() % options.size()];
    w.crossings.insert(w.crossings.begin() + pos, {e, T.glue(e)});
    return true;
  }
  bool at_start = (what == 1);
  Corner k = at_start ? w.start : w.end;
  bool go_cw = (rng() & 1u) != 0;
  if (go_cw) {
    Side crossed = side_enc(k / 3, k % 3);
    if (T.is_boundary_side(crossed)) return false;
    Side g = T.glue(crossed);
    Corner moved = side_enc(side_tri(g), (side_idx(g) + 1) % 3);
    if (at_start) {
      w.crossings.insert(w.crossings.begin(), g);
      w.start = moved;
    } else {
      w.crossings.push_back(crossed);
      w.end = moved;
    }
  } else {
    Side crossed = side_enc(k / 3, (k % 3 + 2) % 3);
    if (T.is_boundary_side(crossed)) return false;
    Side g = T.glue(crossed);
    Corner moved = side_enc(side_tri(g), side_idx(g));
    if (at_start) {
      w.crossings.insert(w.crossings.begin(), g);
      w.start = moved;
    } else {
      w.crossings.push_back(crossed);
      w.end = moved;
    }
  }
  return true;
}

// Random flip walk over marked triangulations.
inline MarkedTriangulation random_walk(MarkedTriangulation m, int steps, std::mt19937_64& rng) {
  for (int i = 0; i < steps; ++i) {
    auto flips = m.map().flippable_arcs();
    m = m.flip(flips[rng() % flips.size()]);
  }
  return m;
}

inline MultiArc arcs_of(const MarkedTriangulation& m) {
  MultiArc A;
  A.base = m.base();
  for (std::int32_t a = 0; a < m.map().arcs(); ++a) {
    A.components.push_back(m.word({a}));
    A.orientations.push_back(true);
  }
  return A;
}

}  // namespace testutil
