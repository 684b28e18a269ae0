#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "flipforge/surface.hpp"

namespace flipforge {

// Isotopy class of an arc relative to a base triangulation, encoded as the
// sequence of sides the arc exits while running from its start vertex to its
// end vertex, plus a corner anchor at each end.  A reduced word (no bigon,
// no end spike) is the canonical representative of its class; reduction
// confluence is exercised by the test suite.
//
// Crossing tokens are exit sides: token e means the strand leaves triangle
// side_tri(e) through side e into the triangle glued there.  Every token
// must be an interior (glued) side.
struct ArcWord {
  std::shared_ptr<const Triangulation> base;
  Corner start = -1;
  Corner end = -1;
  std::vector<Side> crossings;

  int start_vertex() const { return base->corner_vertex(start); }
  int end_vertex() const { return base->corner_vertex(end); }
  bool empty() const { return crossings.empty(); }
  bool trivial_loop() const { return crossings.empty() && start == end; }

  friend bool operator==(const ArcWord& a, const ArcWord& b) {
    return a.start == b.start && a.end == b.end && a.crossings == b.crossings &&
           *a.base == *b.base;
  }
};

namespace words {

inline void require_same_base(const ArcWord& w, const Triangulation& T) {
  if (!(*w.base == T)) throw BaseMismatch("word is based on a different triangulation");
}

// Structural validity: consecutive crossings are sides of a common triangle
// and anchors sit in the first/last segment's triangle.
inline void validate(const ArcWord& w) {
  const Triangulation& T = *w.base;
  if (w.start < 0 || w.start >= 3 * T.triangles() || w.end < 0 || w.end >= 3 * T.triangles())
    throw DisconnectedWord("anchor out of range");
  int cur = w.start / 3;
  for (Side e : w.crossings) {
    if (e < 0 || e >= 3 * T.triangles() || side_tri(e) != cur)
      throw DisconnectedWord("crossing is not a side of the current triangle");
    if (T.is_boundary_side(e)) throw DisconnectedWord("crossing through a boundary side");
    cur = side_tri(T.glue(e));
  }
  if (w.end / 3 != cur) throw DisconnectedWord("end anchor not in the final triangle");
}

inline ArcWord reversed(const ArcWord& w) {
  ArcWord r;
  r.base = w.base;
  r.start = w.end;
  r.end = w.start;
  r.crossings.reserve(w.crossings.size());
  for (auto it = w.crossings.rbegin(); it != w.crossings.rend(); ++it)
    r.crossings.push_back(w.base->glue(*it));
  return r;
}

// The side spanned by an empty word, together with the traversal direction
// (true when the word runs along the side's own direction).
inline std::pair<Side, bool> empty_word_span(const ArcWord& w) {
  FLIPFORGE_CHECK(w.crossings.empty());
  int t = w.start / 3, cs = w.start % 3, ce = w.end % 3;
  FLIPFORGE_CHECK(w.end / 3 == t && cs != ce);
  if (ce == (cs + 1) % 3) return {side_enc(t, cs), true};
  return {side_enc(t, ce), false};
}

// Removes bigons (consecutive crossings u-turning through one triangle) and
// end spikes (a first/last crossing slid off the word's own endpoint).
inline ArcWord reduce(const ArcWord& w) {
  const Triangulation& T = *w.base;
  ArcWord r = w;
  // Bigons: a stack pass catches nested cancellations in one sweep.
  {
    std::vector<Side> out;
    out.reserve(r.crossings.size());
    for (Side e : r.crossings) {
      if (!out.empty() && e == T.glue(out.back()))
        out.pop_back();
      else
        out.push_back(e);
    }
    r.crossings = std::move(out);
  }
  // End spikes; each removal can expose another.
  bool changed = true;
  while (changed && !r.crossings.empty()) {
    changed = false;
    {
      Side e0 = r.crossings.front();
      int c0 = r.start % 3, s0 = side_idx(e0);
      if (s0 == c0 || s0 == (c0 + 2) % 3) {
        Side g = T.glue(e0);
        r.start = (s0 == c0) ? side_enc(side_tri(g), (side_idx(g) + 1) % 3)
                             : side_enc(side_tri(g), side_idx(g));
        r.crossings.erase(r.crossings.begin());
        changed = true;
      }
    }
    if (r.crossings.empty()) break;
    {
      Side el = r.crossings.back();
      Side g = T.glue(el);
      int ce = r.end % 3, sg = side_idx(g);
      if (ce == sg || ce == (sg + 1) % 3) {
        r.end = (ce == sg) ? side_enc(side_tri(el), (side_idx(el) + 1) % 3)
                           : side_enc(side_tri(el), side_idx(el));
        r.crossings.pop_back();
        changed = true;
      }
    }
  }
  return r;
}

inline bool is_reduced(const ArcWord& w) {
  ArcWord r = reduce(w);
  return r.start == w.start && r.end == w.end && r.crossings == w.crossings;
}

// Canonical representative: empty words are re-anchored across the lower
// encoded side copy, and the traversal direction minimizing the token tuple
// is chosen.
inline ArcWord normalized(const ArcWord& w) {
  const Triangulation& T = *w.base;
  ArcWord n = w;
  if (n.crossings.empty() && !n.trivial_loop()) {
    auto [s, forward] = empty_word_span(n);
    Side lo = s;
    if (!T.is_boundary_side(s)) lo = std::min(s, T.glue(s));
    n.start = side_enc(side_tri(lo), side_idx(lo));
    n.end = side_enc(side_tri(lo), (side_idx(lo) + 1) % 3);
    if (!forward) std::swap(n.start, n.end);
  }
  ArcWord rev = reversed(n);
  auto less = [](const ArcWord& a, const ArcWord& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.crossings < b.crossings;
  };
  return less(rev, n) ? rev : n;
}

inline std::vector<std::uint32_t> encode(const ArcWord& w) {
  std::vector<std::uint32_t> out;
  out.reserve(w.crossings.size() + 3);
  out.push_back(static_cast<std::uint32_t>(w.crossings.size()));
  out.push_back(static_cast<std::uint32_t>(w.start));
  out.push_back(static_cast<std::uint32_t>(w.end));
  for (Side e : w.crossings) out.push_back(static_cast<std::uint32_t>(e));
  return out;
}

// Word of the arc lying on a given side, directed along that side.
inline ArcWord side_word(std::shared_ptr<const Triangulation> base, Side e) {
  ArcWord w;
  w.base = std::move(base);
  w.start = side_enc(side_tri(e), side_idx(e));
  w.end = side_enc(side_tri(e), (side_idx(e) + 1) % 3);
  return w;
}

// Number of crossings with a given interior arc of the base.
inline std::int64_t crossings_with_arc(const ArcWord& w, ArcRef a) {
  std::int64_t count = 0;
  for (Side e : w.crossings)
    if (w.base->arc_of_side(e) == a.id) ++count;
  return count;
}

// Fellow-traveler comparison of two reduced strands leaving a common vertex
// through the same sector: true when b departs strictly clockwise of a
// (runs on a's right).  Identical words compare false.  The strands run
// together until they first diverge in some triangle; the divergence exits,
// ordered from the right of the shared corridor, decide.
inline bool clockwise_of(const ArcWord& a, const ArcWord& b) {
  FLIPFORGE_CHECK(a.start == b.start && *a.base == *b.base);
  const Triangulation& T = *a.base;
  size_t j = 0;
  while (true) {
    bool a_end = j >= a.crossings.size();
    bool b_end = j >= b.crossings.size();
    if (!a_end && !b_end && a.crossings[j] == b.crossings[j]) {
      ++j;
      continue;
    }
    if (a_end && b_end && a.end == b.end) return false;
    int rank_a, rank_b;
    if (j == 0) {
      // Both strands start at corner c; the only legal crossing exit is the
      // opposite side, and ends hug one of the two incident sides.
      int c = a.start % 3;
      auto rank = [&](bool ended, const ArcWord& w) {
        if (!ended) {
          FLIPFORGE_CHECK(side_idx(w.crossings[j]) == (c + 1) % 3);
          return 1;
        }
        int ce = w.end % 3;
        if (ce == (c + 1) % 3) return 0;
        FLIPFORGE_CHECK(ce == (c + 2) % 3);
        return 2;
      };
      rank_a = rank(a_end, a);
      rank_b = rank(b_end, b);
    } else {
      // Entered the triangle through side g; reduced strands exit through
      // one of the two other sides or end at the far corner.
      int gi = side_idx(T.glue(a.crossings[j - 1]));
      auto rank = [&](bool ended, const ArcWord& w) {
        if (!ended) {
          if (side_idx(w.crossings[j]) == (gi + 1) % 3) return 0;
          FLIPFORGE_CHECK(side_idx(w.crossings[j]) == (gi + 2) % 3);
          return 2;
        }
        FLIPFORGE_CHECK(w.end % 3 == (gi + 2) % 3);
        return 1;
      };
      rank_a = rank(a_end, a);
      rank_b = rank(b_end, b);
    }
    FLIPFORGE_CHECK(rank_a != rank_b);
    return rank_b < rank_a;
  }
}

}  // namespace words
}  // namespace flipforge
