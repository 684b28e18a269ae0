#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "flipforge/words.hpp"

namespace flipforge {

// Ordered set of pairwise-disjoint arcs with optional per-component
// orientations.  Disjointness of user-supplied components is verified by
// make_multiarc (paths.hpp); engine-internal constructions are covered by
// the theorems they implement and by the test suite.
struct MultiArc {
  std::shared_ptr<const Triangulation> base;
  std::vector<ArcWord> components;
  std::vector<bool> orientations;

  size_t size() const { return components.size(); }
};

struct IntersectionCounts {
  std::vector<std::int64_t> per_arc;  // i(t, A) by arc id
  std::int64_t total = 0;             // i(T, A)
  std::int64_t max_per_arc() const {
    std::int64_t m = 0;
    for (auto v : per_arc) m = std::max(m, v);
    return m;
  }
};

inline IntersectionCounts intersection_with_triangulation(const Triangulation& T,
                                                          const MultiArc& A) {
  for (const auto& w : A.components) words::require_same_base(w, T);
  IntersectionCounts out;
  out.per_arc.assign(T.arcs(), 0);
  for (const auto& w : A.components)
    for (Side e : w.crossings) {
      std::int32_t id = T.arc_of_side(e);
      FLIPFORGE_CHECK(id >= 0);
      ++out.per_arc[id];
      ++out.total;
    }
  return out;
}

// Triangles containing a start/end anchor of a component that actually
// crosses something; sorted, deduplicated.
inline std::vector<int> terminal_triangles(const Triangulation& T, const MultiArc& A) {
  std::vector<int> out;
  for (const auto& w : A.components) {
    words::require_same_base(w, T);
    if (w.crossings.empty()) continue;
    out.push_back(w.start / 3);
    out.push_back(w.end / 3);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace marking {

// Side and corner bookkeeping for rewriting words across one flip.  The
// quadrilateral has corners q0..q3 counterclockwise with the source
// diagonal joining q0-q2 and the destination diagonal q1-q3.  Outer sides
// are listed (y, z, x, w); y and z bound the destination triangle
// containing q0 (region A), x and w the one containing q2 (region B).
struct QuadFrame {
  Side diag1 = kNoSide, diag2 = kNoSide;  // source diagonal sides
  std::array<Side, 4> outer_src{};        // y, z, x, w in the source map
  std::array<Side, 4> outer_dst{};        // their encodings in the target map
  std::array<Corner, 6> corner_src{};     // the six quad corners in the source map
  std::array<int, 6> corner_pos{};        // quad position 0..3 of each
  Corner q0_dst = -1, q2_dst = -1;        // single target sectors
  Corner q1_dstA = -1, q1_dstB = -1;      // split target sectors by region
  Corner q3_dstA = -1, q3_dstB = -1;
  Side dtokA = kNoSide, dtokB = kNoSide;  // crossing the target diagonal from A / B

  int corner_position(Corner c) const {
    for (int i = 0; i < 6; ++i)
      if (corner_src[i] == c) return corner_pos[i];
    return -1;
  }
  int outer_index(Side e) const {
    for (int i = 0; i < 4; ++i)
      if (outer_src[i] == e) return i;
    return -1;
  }
  Corner dst_anchor(int pos, int region) const {
    switch (pos) {
      case 0: return q0_dst;
      case 2: return q2_dst;
      case 1: return region == 0 ? q1_dstA : q1_dstB;
      default: return region == 0 ? q3_dstA : q3_dstB;
    }
  }
};

// Everything needed to move words across a single flip, in both directions.
class FlipContext {
 public:
  FlipContext(std::shared_ptr<const Triangulation> before, ArcRef arc)
      : before_(std::move(before)), arc_(arc) {
    const Triangulation& T = *before_;
    if (!T.is_flippable(arc)) throw NotFlippable("transport across an unflippable arc");
    after_ = std::make_shared<const Triangulation>(T.flip(arc));
    auto [E1, E2] = T.arc_sides(arc);
    int t1 = side_tri(E1), e1 = side_idx(E1);
    int t2 = side_tri(E2), e2 = side_idx(E2);
    auto oc = [&](int t, int i) { return side_enc(t, i % 3); };

    fwd_.diag1 = E1;
    fwd_.diag2 = E2;
    fwd_.outer_src = {oc(t1, e1 + 1), oc(t2, e2 + 2), oc(t1, e1 + 2), oc(t2, e2 + 1)};
    fwd_.outer_dst = {side_enc(t1, 2), side_enc(t1, 1), side_enc(t2, 1), side_enc(t2, 2)};
    fwd_.corner_src = {oc(t1, e1), oc(t1, e1 + 1), oc(t1, e1 + 2),
                       oc(t2, e2), oc(t2, e2 + 1), oc(t2, e2 + 2)};
    fwd_.corner_pos = {2, 0, 1, 0, 2, 3};
    fwd_.q0_dst = side_enc(t1, 2);
    fwd_.q2_dst = side_enc(t2, 2);
    fwd_.q1_dstA = side_enc(t1, 0);
    fwd_.q1_dstB = side_enc(t2, 1);
    fwd_.q3_dstA = side_enc(t1, 1);
    fwd_.q3_dstB = side_enc(t2, 0);
    fwd_.dtokA = side_enc(t1, 0);
    fwd_.dtokB = side_enc(t2, 0);

    // Reverse frame: the roles of the two diagonals swap.  In the original
    // map the diagonal joins V0-V2, so V1, V3 become the fixed corners and
    // V0, V2 the split ones; region A is the triangle {f, y, x}.
    bwd_.diag1 = side_enc(t1, 0);
    bwd_.diag2 = side_enc(t2, 0);
    bwd_.outer_src = {side_enc(t1, 2), side_enc(t2, 1), side_enc(t1, 1), side_enc(t2, 2)};
    bwd_.outer_dst = {oc(t1, e1 + 1), oc(t1, e1 + 2), oc(t2, e2 + 2), oc(t2, e2 + 1)};
    bwd_.corner_src = {side_enc(t1, 0), side_enc(t1, 1), side_enc(t1, 2),
                       side_enc(t2, 0), side_enc(t2, 1), side_enc(t2, 2)};
    bwd_.corner_pos = {0, 2, 1, 2, 0, 3};
    bwd_.q0_dst = oc(t1, e1 + 2);
    bwd_.q2_dst = oc(t2, e2 + 2);
    bwd_.q1_dstA = oc(t1, e1 + 1);
    bwd_.q1_dstB = oc(t2, e2);
    bwd_.q3_dstA = oc(t1, e1);
    bwd_.q3_dstB = oc(t2, e2 + 1);
    bwd_.dtokA = E1;
    bwd_.dtokB = E2;
  }

  const std::shared_ptr<const Triangulation>& before() const { return before_; }
  const std::shared_ptr<const Triangulation>& after() const { return after_; }
  ArcRef arc() const { return arc_; }

  ArcWord forward(const ArcWord& w) const { return through_(w, fwd_, before_, after_); }
  ArcWord backward(const ArcWord& w) const { return through_(w, bwd_, after_, before_); }

  MultiArc forward(const MultiArc& A) const {
    MultiArc out;
    out.base = after_;
    out.orientations = A.orientations;
    out.components.reserve(A.components.size());
    for (const auto& w : A.components) out.components.push_back(forward(w));
    return out;
  }

 private:
  static ArcWord through_(const ArcWord& w, const QuadFrame& F,
                          const std::shared_ptr<const Triangulation>& src,
                          const std::shared_ptr<const Triangulation>& dst) {
    words::require_same_base(w, *src);
    const Triangulation& S = *src;
    const int qt1 = side_tri(F.diag1), qt2 = side_tri(F.diag2);
    auto in_quad = [&](int t) { return t == qt1 || t == qt2; };
    auto is_diag = [&](Side e) { return e == F.diag1 || e == F.diag2; };
    auto is_wild = [](int p) { return p == 1 || p == 3; };

    const auto& xs = w.crossings;
    std::vector<Side> out;
    out.reserve(xs.size() + 2);
    Corner new_start = w.start, new_end = w.end;

    size_t i = 0;
    int cur = w.start / 3;
    bool inside = in_quad(cur);
    bool entry_is_corner = inside;
    int entry_outer = -1, entry_cpos = -1;
    if (inside) {
      entry_cpos = F.corner_position(w.start);
      FLIPFORGE_CHECK(entry_cpos >= 0);
    }

    while (true) {
      if (!inside) {
        bool entered = false;
        while (i < xs.size()) {
          Side e = xs[i++];
          out.push_back(e);
          cur = side_tri(S.glue(e));
          if (in_quad(cur)) {
            entry_is_corner = false;
            entry_outer = F.outer_index(S.glue(e));
            FLIPFORGE_CHECK(entry_outer >= 0);
            entered = true;
            break;
          }
        }
        if (!entered) break;
        inside = true;
        continue;
      }

      int dcount = 0;
      bool exit_is_corner = false, word_ended = false;
      int exit_outer = -1, exit_cpos = -1;
      while (true) {
        if (i >= xs.size()) {
          exit_is_corner = true;
          word_ended = true;
          exit_cpos = F.corner_position(w.end);
          FLIPFORGE_CHECK(exit_cpos >= 0);
          break;
        }
        Side e = xs[i];
        if (is_diag(e)) {
          ++dcount;
          ++i;
          cur = side_tri(S.glue(e));
          continue;
        }
        exit_outer = F.outer_index(e);
        FLIPFORGE_CHECK(exit_outer >= 0);
        ++i;
        cur = side_tri(S.glue(e));
        break;
      }
      FLIPFORGE_CHECK(dcount <= 1);

      if (entry_is_corner && exit_is_corner && is_wild(entry_cpos) && is_wild(exit_cpos)) {
        // The word is the source diagonal's replacement arc; it becomes an
        // arc of the target triangulation.
        FLIPFORGE_CHECK(entry_cpos != exit_cpos && out.empty() && word_ended && dcount == 1);
        ArcWord r;
        r.base = dst;
        r.start = (entry_cpos == 1) ? F.q1_dstA : F.q3_dstA;
        r.end = (entry_cpos == 1) ? F.q3_dstA : F.q1_dstA;
        return r;
      }

      auto fixed_region = [&](bool isc, int cpos, int oi) -> int {
        if (isc) return cpos == 0 ? 0 : cpos == 2 ? 1 : -1;
        return oi < 2 ? 0 : 1;
      };
      int rin = fixed_region(entry_is_corner, entry_cpos, entry_outer);
      int rout = fixed_region(exit_is_corner, exit_cpos, exit_outer);
      FLIPFORGE_CHECK(rin != -1 || rout != -1);
      if (rin == -1) rin = rout;
      if (rout == -1) rout = rin;

      if (entry_is_corner) new_start = F.dst_anchor(entry_cpos, rin);
      if (rin != rout) out.push_back(rin == 0 ? F.dtokA : F.dtokB);
      if (exit_is_corner)
        new_end = F.dst_anchor(exit_cpos, rout);
      else
        out.push_back(F.outer_dst[exit_outer]);

      if (word_ended) break;
      inside = in_quad(cur);
      if (inside) {
        entry_is_corner = false;
        entry_outer = F.outer_index(S.glue(xs[i - 1]));
        FLIPFORGE_CHECK(entry_outer >= 0);
      }
    }

    ArcWord r;
    r.base = dst;
    r.start = new_start;
    r.end = new_end;
    r.crossings = std::move(out);
    words::validate(r);
    return words::reduce(r);
  }

  std::shared_ptr<const Triangulation> before_;
  std::shared_ptr<const Triangulation> after_;
  ArcRef arc_;
  QuadFrame fwd_, bwd_;
};

}  // namespace marking

// Transports a reduced word onto the triangulation obtained by flipping its
// base at `flipped`; the result represents the same isotopy class.
inline ArcWord transport_across_flip(const ArcWord& w, ArcRef flipped) {
  marking::FlipContext ctx(w.base, flipped);
  return ctx.forward(w);
}

// A triangulation tracked as an exact flip-graph vertex: the current map
// plus, for every interior arc, its isotopy class as a reduced word over a
// fixed base triangulation.  Two vertices are equal iff their arc class
// sets are equal, which `key()` exposes as a sortable token vector.
class MarkedTriangulation {
 public:
  MarkedTriangulation() = default;

  static MarkedTriangulation identity(const Triangulation& T) {
    MarkedTriangulation m;
    m.map_ = T;
    m.base_ = std::make_shared<const Triangulation>(T);
    m.words_.reserve(T.arcs());
    m.follows_.reserve(T.arcs());
    for (std::int32_t a = 0; a < T.arcs(); ++a) {
      m.words_.push_back(words::side_word(m.base_, T.arc_lo({a})));
      m.follows_.push_back(T.arc_lo({a}));
    }
    // Boundary arcs carry words as well: their sides get renamed by flips.
    for (Side e = 0; e < T.sides(); ++e)
      if (T.is_boundary_side(e)) m.bwords_.push_back({e, words::side_word(m.base_, e)});
    return m;
  }

  // Rebuilds a vertex from a materialized map and the classes of its arcs
  // over an arbitrary base.  words[a] must be the class of the map's arc a;
  // follows[a] the side of `map` along which it is directed.
  static MarkedTriangulation assemble(Triangulation map,
                                      std::shared_ptr<const Triangulation> base,
                                      std::vector<ArcWord> words, std::vector<Side> follows) {
    MarkedTriangulation m;
    FLIPFORGE_CHECK(static_cast<int>(words.size()) == map.arcs() &&
                    follows.size() == words.size());
    m.map_ = std::move(map);
    m.base_ = std::move(base);
    m.words_ = std::move(words);
    m.follows_ = std::move(follows);
    for (Side e = 0; e < m.map_.sides(); ++e)
      if (m.map_.is_boundary_side(e)) {
        // Boundary classes are shared with the base; locate each by endpoint
        // walk: the boundary arcs of base and map coincide as classes, and
        // their side encodings agree up to the base's own boundary list.
        m.bwords_.push_back({e, ArcWord{}});
      }
    // Boundary words: identify by matching base boundary sides in circuit
    // order; maps reached by flips never touch boundary side multiplicity.
    {
      std::vector<Side> base_bs, map_bs;
      for (Side e = 0; e < m.base_->sides(); ++e)
        if (m.base_->is_boundary_side(e)) base_bs.push_back(e);
      FLIPFORGE_CHECK(base_bs.size() == m.bwords_.size());
      // Match by the marked points at the ends: each boundary arc is
      // determined by its endpoints' vertices and its circuit position; a
      // boundary side keeps its geometric identity, so match on vertex
      // pairs, which are unique per boundary arc.
      for (auto& [s, w] : m.bwords_) {
        int sv = m.map_.corner_vertex(side_enc(side_tri(s), side_idx(s)));
        int ev = m.map_.corner_vertex(side_enc(side_tri(s), (side_idx(s) + 1) % 3));
        Side found = kNoSide;
        for (Side b : base_bs) {
          int bsv = m.base_->corner_vertex(side_enc(side_tri(b), side_idx(b)));
          int bev = m.base_->corner_vertex(side_enc(side_tri(b), (side_idx(b) + 1) % 3));
          if (bsv == sv && bev == ev) {
            FLIPFORGE_CHECK(found == kNoSide);  // ambiguous boundary matching
            found = b;
          }
        }
        FLIPFORGE_CHECK(found != kNoSide);
        w = words::side_word(m.base_, found);
      }
    }
    return m;
  }

  const Triangulation& map() const { return map_; }
  const std::shared_ptr<const Triangulation>& base() const { return base_; }
  // Class of arc a over the base, directed along the stored side.
  const ArcWord& word(ArcRef a) const { return words_[a.id]; }

  // Class of the arc on a given side of the current map, directed along
  // that side.  Handles boundary sides too.
  ArcWord directed_word(Side side_of_arc) const {
    std::int32_t a = map_.arc_of_side(side_of_arc);
    if (a >= 0) {
      if (follows_[a] == side_of_arc) return words_[a];
      return words::reversed(words_[a]);
    }
    for (const auto& [s, w] : bwords_)
      if (s == side_of_arc) return w;
    throw InternalInvariantViolation("boundary side has no tracked word");
  }

  MarkedTriangulation flip(ArcRef f) const {
    if (!map_.is_flippable(f)) throw NotFlippable("flip of an unflippable arc");
    auto [E1, E2] = map_.arc_sides(f);
    int t1 = side_tri(E1), e1 = side_idx(E1);
    int t2 = side_tri(E2), e2 = side_idx(E2);
    Side X = side_enc(t1, (e1 + 2) % 3);  // V1 -> V2
    Side W = side_enc(t2, (e2 + 1) % 3);  // V2 -> V3

    ArcWord xw = directed_word(X);
    ArcWord ww = directed_word(W);
    FLIPFORGE_CHECK(xw.end_vertex() == ww.start_vertex());

    // New diagonal: concatenate x and w and push the corner off V2 through
    // the inside of the quadrilateral, i.e. walk the base fan clockwise
    // from x's final sector to w's initial sector.  When the two rays share
    // a sector the sweep is either empty or a full turn, decided by their
    // clockwise order as strands.
    ArcWord d;
    d.base = base_;
    d.start = xw.start;
    d.end = ww.end;
    d.crossings = xw.crossings;
    {
      auto emit = [&](Corner cur) -> Corner {
        d.crossings.push_back(side_enc(cur / 3, cur % 3));
        Corner nxt = base_->cw_next(cur);
        if (nxt == -1) throw InternalInvariantViolation("fan walk fell off the boundary");
        return nxt;
      };
      if (xw.end == ww.start) {
        ArcWord rx = words::reversed(xw);
        if (!words::clockwise_of(rx, ww)) {
          Corner cur = xw.end;
          do cur = emit(cur);
          while (cur != xw.end);
        }
      } else {
        Corner cur = xw.end;
        int guard = 0;
        while (cur != ww.start) {
          cur = emit(cur);
          if (++guard > 3 * base_->triangles())
            throw InternalInvariantViolation("fan walk did not meet the target sector");
        }
      }
    }
    d.crossings.insert(d.crossings.end(), ww.crossings.begin(), ww.crossings.end());
    d = words::reduce(d);
    words::validate(d);
    FLIPFORGE_CHECK(!d.trivial_loop());

    MarkedTriangulation out;
    out.map_ = map_.flip(f);
    out.base_ = base_;
    out.words_ = words_;
    out.follows_ = follows_;
    out.bwords_ = bwords_;
    out.words_[f.id] = std::move(d);
    out.follows_[f.id] = side_enc(t1, 0);  // runs V1 -> V3 in the new map
    // Outer sides were renamed; re-point any follow references.
    const std::pair<Side, Side> renames[4] = {
        {side_enc(t1, (e1 + 1) % 3), side_enc(t1, 2)},
        {side_enc(t2, (e2 + 2) % 3), side_enc(t1, 1)},
        {side_enc(t1, (e1 + 2) % 3), side_enc(t2, 1)},
        {side_enc(t2, (e2 + 1) % 3), side_enc(t2, 2)}};
    for (auto [o, n] : renames) {
      std::int32_t a = map_.arc_of_side(o);
      if (a >= 0 && follows_[a] == o) out.follows_[a] = n;
    }
    for (auto& [s, bw] : out.bwords_) {
      for (auto [o, n] : renames)
        if (s == o) {
          s = n;
          break;
        }
    }
    return out;
  }

  // Sorted token-vector fingerprint of the arc class set; equal keys mean
  // equal (isotopic) triangulations.
  std::vector<std::uint32_t> key() const {
    std::vector<std::vector<std::uint32_t>> encs;
    encs.reserve(words_.size());
    for (const auto& w : words_) encs.push_back(words::encode(words::normalized(w)));
    std::sort(encs.begin(), encs.end());
    std::vector<std::uint32_t> out;
    for (auto& e : encs) out.insert(out.end(), e.begin(), e.end());
    return out;
  }

  // Locates an arc of the current map whose class equals the given word
  // (over the same base); -1 if absent.
  std::int32_t find_arc(const ArcWord& w) const {
    ArcWord n = words::normalized(w);
    for (std::int32_t a = 0; a < map_.arcs(); ++a)
      if (words::normalized(words_[a]) == n) return a;
    return -1;
  }

 private:
  Triangulation map_;
  std::shared_ptr<const Triangulation> base_;
  std::vector<ArcWord> words_;
  std::vector<Side> follows_;
  std::vector<std::pair<Side, ArcWord>> bwords_;  // boundary side -> its word
};

struct KeyHash {
  size_t operator()(const std::vector<std::uint32_t>& k) const {
    size_t h = 1469598103934665603ull;
    for (std::uint32_t t : k) {
      h ^= t;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace flipforge
