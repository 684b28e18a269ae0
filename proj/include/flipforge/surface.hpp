#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flipforge/errors.hpp"

namespace flipforge {

// Topological type of a marked surface: genus, boundary curves, interior
// punctures, marked points on the boundary, and whether marked points carry
// labels that homeomorphisms must fix pointwise.
struct SurfaceSig {
  int genus = 0;
  int boundaries = 0;
  int punctures = 0;
  int boundary_points = 0;
  bool labeled = true;

  // Interior arc count of any triangulation of this surface.
  int arc_count() const { return 6 * genus + 3 * boundaries + 3 * punctures + boundary_points - 6; }
  // Triangle count, derived from the Euler characteristic.
  int triangle_count() const {
    return 4 * genus + 2 * boundaries + 2 * punctures + boundary_points - 4;
  }
  int marked_points() const { return punctures + boundary_points; }

  bool triangulable() const {
    if (genus < 0 || boundaries < 0 || punctures < 0 || boundary_points < 0) return false;
    if (boundaries == 0 && punctures == 0) return false;    // no vertices available
    if (boundaries > 0 && boundary_points < boundaries) return false;
    if (boundaries == 0 && boundary_points > 0) return false;
    return arc_count() >= 0 && triangle_count() >= 1;
  }

  friend auto operator<=>(const SurfaceSig&, const SurfaceSig&) = default;

  std::string str() const {
    return "(g=" + std::to_string(genus) + ",b=" + std::to_string(boundaries) +
           ",s=" + std::to_string(punctures) + ",p=" + std::to_string(boundary_points) +
           (labeled ? ",labeled)" : ",unlabeled)");
  }
};

// Sides and corners of triangles are encoded as 3*t + i with i in 0..2.
// Side i of triangle t runs from corner i to corner (i+1)%3; corners and
// sides are numbered counterclockwise, which fixes a global orientation.
using Side = std::int32_t;
using Corner = std::int32_t;
inline constexpr Side kNoSide = -1;

inline Side side_enc(int tri, int i) { return static_cast<Side>(3 * tri + i); }
inline int side_tri(Side e) { return e / 3; }
inline int side_idx(Side e) { return e % 3; }

struct ArcRef {
  std::int32_t id = -1;
  friend auto operator<=>(const ArcRef&, const ArcRef&) = default;
};

// Raw input for build_triangulation: the JSON-facing shape.
struct TriangulationSpec {
  SurfaceSig signature;
  int triangles = 0;
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> gluings;
  std::vector<std::array<int, 3>> corner_vertices;
};

// A triangulation of a marked surface as a combinatorial map: triangles with
// side gluings (a fixed-point-free partial involution) and a marked point at
// every corner.  Self-gluings and self-folded triangles are allowed.
// Immutable after construction; flip() returns a fresh value.
class Triangulation {
 public:
  Triangulation() = default;

  const SurfaceSig& signature() const { return sig_; }
  int triangles() const { return n_; }
  int arcs() const { return static_cast<int>(arc_sides_.size()); }
  int sides() const { return 3 * n_; }

  Side glue(Side e) const { return glue_[e]; }
  bool is_boundary_side(Side e) const { return glue_[e] == kNoSide; }
  int corner_vertex(Corner c) const { return corner_vertex_[c]; }
  // Interior arc id of a side, -1 on boundary sides.
  std::int32_t arc_of_side(Side e) const { return arc_of_side_[e]; }
  // The two sides of an interior arc, lower encoding first.
  std::pair<Side, Side> arc_sides(ArcRef a) const { return arc_sides_[a.id]; }
  Side arc_lo(ArcRef a) const { return arc_sides_[a.id].first; }
  Side arc_hi(ArcRef a) const { return arc_sides_[a.id].second; }

  int vertex_count() const { return vertex_count_; }
  bool vertex_on_boundary(int v) const { return vertex_on_boundary_[v]; }
  // Endpoint vertices of an arc: (vertex at side start, vertex at side end)
  // for the lower-encoded side.
  std::pair<int, int> arc_endpoints(ArcRef a) const {
    Side lo = arc_lo(a);
    return {corner_vertex_[side_enc(side_tri(lo), side_idx(lo))],
            corner_vertex_[side_enc(side_tri(lo), (side_idx(lo) + 1) % 3)]};
  }

  // Fan rotation around the vertex at a corner.  Counterclockwise crosses the
  // side entering the corner, clockwise the side leaving it.  Returns -1 when
  // the rotation would cross a boundary side.
  Corner ccw_next(Corner k) const {
    Side g = glue_[side_enc(k / 3, (k % 3 + 2) % 3)];
    if (g == kNoSide) return -1;
    return side_enc(side_tri(g), side_idx(g));
  }
  Corner cw_next(Corner k) const {
    Side g = glue_[side_enc(k / 3, k % 3)];
    if (g == kNoSide) return -1;
    return side_enc(side_tri(g), (side_idx(g) + 1) % 3);
  }

  bool is_flippable(ArcRef a) const {
    auto [lo, hi] = arc_sides_[a.id];
    return side_tri(lo) != side_tri(hi);
  }

  // Replace the diagonal of the quadrilateral around arc a with the other
  // diagonal.  The new diagonal inherits a's arc id, so flip paths can be
  // replayed as arc id sequences.
  Triangulation flip(ArcRef a) const;

  std::vector<ArcRef> flippable_arcs() const {
    std::vector<ArcRef> out;
    for (std::int32_t i = 0; i < arcs(); ++i)
      if (is_flippable({i})) out.push_back({i});
    return out;
  }

  // Boundary sides in circuit order, one vector per boundary curve,
  // circuits ordered by their smallest side encoding.
  std::vector<std::vector<Side>> boundary_circuits() const;

  // Copy with interior arc ids permuted: new id of old arc a is perm[a].
  Triangulation relabeled_arcs(const std::vector<std::int32_t>& perm) const {
    FLIPFORGE_CHECK(static_cast<int>(perm.size()) == arcs());
    Triangulation R = *this;
    for (Side e = 0; e < 3 * n_; ++e)
      if (arc_of_side_[e] >= 0) R.arc_of_side_[e] = perm[arc_of_side_[e]];
    for (int a = 0; a < arcs(); ++a) R.arc_sides_[perm[a]] = arc_sides_[a];
    return R;
  }

  friend bool operator==(const Triangulation& a, const Triangulation& b) {
    return a.n_ == b.n_ && a.glue_ == b.glue_ && a.corner_vertex_ == b.corner_vertex_ &&
           a.arc_of_side_ == b.arc_of_side_;
  }

  static Triangulation build(const TriangulationSpec& spec);
  // Builds from raw tables, deriving and checking everything.  If
  // declared_sig is given the derived signature must match it.
  static Triangulation from_tables(int triangles, std::vector<Side> glue,
                                   std::vector<int> corner_vertex,
                                   std::optional<SurfaceSig> declared_sig = std::nullopt,
                                   bool labeled = true);

  void validate() const;  // re-checks all construction invariants

 private:
  void assign_arc_ids_();
  void check_arc_tables_() const;
  void derive_and_check_(std::optional<SurfaceSig> declared, bool labeled, bool reassign_arcs);

  SurfaceSig sig_;
  int n_ = 0;
  std::vector<Side> glue_;              // size 3n, kNoSide on boundary sides
  std::vector<int> corner_vertex_;      // size 3n
  std::vector<std::int32_t> arc_of_side_;
  std::vector<std::pair<Side, Side>> arc_sides_;
  int vertex_count_ = 0;
  std::vector<bool> vertex_on_boundary_;
};

inline void Triangulation::assign_arc_ids_() {
  arc_of_side_.assign(3 * n_, -1);
  arc_sides_.clear();
  for (Side e = 0; e < 3 * n_; ++e) {
    if (glue_[e] == kNoSide || glue_[e] > e) {
      if (glue_[e] != kNoSide) {
        std::int32_t id = static_cast<std::int32_t>(arc_sides_.size());
        arc_of_side_[e] = id;
        arc_of_side_[glue_[e]] = id;
        arc_sides_.push_back({e, glue_[e]});
      }
    }
  }
}

inline Triangulation Triangulation::from_tables(int triangles, std::vector<Side> glue,
                                                std::vector<int> corner_vertex,
                                                std::optional<SurfaceSig> declared_sig,
                                                bool labeled) {
  Triangulation T;
  T.n_ = triangles;
  T.glue_ = std::move(glue);
  T.corner_vertex_ = std::move(corner_vertex);
  if (static_cast<int>(T.glue_.size()) != 3 * triangles ||
      static_cast<int>(T.corner_vertex_.size()) != 3 * triangles)
    throw InvalidGluing("table sizes disagree with triangle count");
  T.derive_and_check_(declared_sig, labeled, /*reassign_arcs=*/true);
  return T;
}

inline Triangulation Triangulation::build(const TriangulationSpec& spec) {
  if (spec.triangles <= 0) throw NotTriangulable("triangulation needs at least one triangle");
  std::vector<Side> glue(3 * spec.triangles, kNoSide);
  for (size_t k = 0; k < spec.gluings.size(); ++k) {
    auto [a, b] = spec.gluings[k];
    auto in_range = [&](std::pair<int, int> q) {
      return q.first >= 0 && q.first < spec.triangles && q.second >= 0 && q.second < 3;
    };
    if (!in_range(a) || !in_range(b)) throw InvalidGluing("gluing entry out of range");
    Side ea = side_enc(a.first, a.second), eb = side_enc(b.first, b.second);
    if (ea == eb) throw InvalidGluing("side glued to itself");
    if (glue[ea] != kNoSide || glue[eb] != kNoSide) throw InvalidGluing("side glued twice");
    glue[ea] = eb;
    glue[eb] = ea;
  }
  if (static_cast<int>(spec.corner_vertices.size()) != spec.triangles)
    throw InvalidGluing("corner_vertices size disagrees with triangle count");
  std::vector<int> cv(3 * spec.triangles);
  for (int t = 0; t < spec.triangles; ++t)
    for (int i = 0; i < 3; ++i) cv[side_enc(t, i)] = spec.corner_vertices[t][i];
  return from_tables(spec.triangles, std::move(glue), std::move(cv), spec.signature,
                     spec.signature.labeled);
}

inline void Triangulation::check_arc_tables_() const {
  int interior = 0;
  for (Side e = 0; e < 3 * n_; ++e) {
    if (glue_[e] == kNoSide) {
      FLIPFORGE_CHECK(arc_of_side_[e] == -1);
    } else {
      ++interior;
      std::int32_t id = arc_of_side_[e];
      FLIPFORGE_CHECK(id >= 0 && id < static_cast<std::int32_t>(arc_sides_.size()));
      FLIPFORGE_CHECK(arc_of_side_[glue_[e]] == id);
      auto [lo, hi] = arc_sides_[id];
      FLIPFORGE_CHECK(lo < hi && (lo == e || hi == e));
    }
  }
  FLIPFORGE_CHECK(interior == 2 * static_cast<int>(arc_sides_.size()));
}

inline void Triangulation::derive_and_check_(std::optional<SurfaceSig> declared, bool labeled,
                                             bool reassign_arcs) {
  // Involution, fixed-point-free.
  for (Side e = 0; e < 3 * n_; ++e) {
    Side g = glue_[e];
    if (g == kNoSide) continue;
    if (g < 0 || g >= 3 * n_ || g == e || glue_[g] != e)
      throw InvalidGluing("gluing is not a fixed-point-free involution");
  }

  // Connectivity of the dual graph.
  {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; ++i) {
        Side g = glue_[side_enc(t, i)];
        if (g != kNoSide && !seen[side_tri(g)]) {
          seen[side_tri(g)] = 1;
          ++reached;
          stack.push_back(side_tri(g));
        }
      }
    }
    if (reached != n_) throw InvalidGluing("triangulation is not connected");
  }

  if (reassign_arcs)
    assign_arc_ids_();
  else
    check_arc_tables_();

  // Vertex fans: every corner belongs to exactly one fan; fans must be
  // closed cycles (interior vertices) or chains ending on boundary sides.
  std::vector<int> fan_of(3 * n_, -1);
  std::vector<bool> fan_boundary;
  int fans = 0;
  for (Corner k0 = 0; k0 < 3 * n_; ++k0) {
    if (fan_of[k0] != -1) continue;
    // Rewind clockwise to a chain end if there is one.
    Corner start = k0;
    {
      Corner k = k0;
      int steps = 0;
      while (true) {
        Corner p = cw_next(k);
        if (p == -1) break;
        k = p;
        if (k == k0) break;  // closed fan
        if (++steps > 3 * n_) throw InvalidGluing("vertex fan does not close up");
      }
      start = (cw_next(k) == -1) ? k : k0;
    }
    bool closed = true;
    Corner k = start;
    int steps = 0;
    while (true) {
      if (fan_of[k] != -1) throw InvalidGluing("corner reached from two vertex fans");
      fan_of[k] = fans;
      Corner nk = ccw_next(k);
      if (nk == -1) {
        closed = false;
        break;
      }
      if (nk == start) break;
      k = nk;
      if (++steps > 3 * n_) throw InvalidGluing("vertex fan does not close up");
    }
    fan_boundary.push_back(!closed);
    ++fans;
  }

  // Corner vertex ids must be constant on fans and distinct across fans.
  std::vector<int> fan_vertex(fans, -1);
  for (Corner k = 0; k < 3 * n_; ++k) {
    int f = fan_of[k];
    if (fan_vertex[f] == -1)
      fan_vertex[f] = corner_vertex_[k];
    else if (fan_vertex[f] != corner_vertex_[k])
      throw InvalidGluing("corner vertex ids inconsistent around a vertex link");
  }
  {
    std::vector<int> seen(fans, -1);
    for (int f = 0; f < fans; ++f) {
      int v = fan_vertex[f];
      if (v < 0 || v >= fans)
        throw InvalidGluing("marked point ids must cover 0..V-1");
      if (seen[v] != -1) throw InvalidGluing("two distinct vertices share a marked point id");
      seen[v] = f;
    }
    vertex_count_ = fans;
    vertex_on_boundary_.assign(fans, false);
    for (int f = 0; f < fans; ++f) vertex_on_boundary_[fan_vertex[f]] = fan_boundary[f];
  }

  // Derived signature.
  int boundary_sides = 0;
  for (Side e = 0; e < 3 * n_; ++e)
    if (glue_[e] == kNoSide) ++boundary_sides;
  int circuits = static_cast<int>(boundary_circuits().size());
  int punctures = 0, boundary_pts = 0;
  for (int v = 0; v < vertex_count_; ++v) (vertex_on_boundary_[v] ? boundary_pts : punctures)++;
  if (circuits > 0 && boundary_pts == 0)
    throw BoundaryWithoutMarkedPoint("boundary circuit without a marked point");
  int V = vertex_count_;
  int E = static_cast<int>(arc_sides_.size()) + boundary_sides;
  int chi = V - E + n_;
  int two_g = 2 - circuits - chi;
  if (two_g < 0 || two_g % 2 != 0) throw InvalidGluing("derived Euler characteristic is not a surface");
  sig_.genus = two_g / 2;
  sig_.boundaries = circuits;
  sig_.punctures = punctures;
  sig_.boundary_points = boundary_pts;
  sig_.labeled = declared ? declared->labeled : labeled;
  if (!sig_.triangulable()) throw NotTriangulable("derived signature is not triangulable: " + sig_.str());
  if (sig_.arc_count() != arcs() || sig_.triangle_count() != n_)
    throw InternalInvariantViolation("arc/triangle counts disagree with signature formulas");
  if (declared) {
    SurfaceSig want = *declared;
    if (want.genus != sig_.genus || want.boundaries != sig_.boundaries ||
        want.punctures != sig_.punctures || want.boundary_points != sig_.boundary_points)
      throw SignatureMismatch("declared signature " + want.str() + " but derived " + sig_.str());
  }
}

inline void Triangulation::validate() const {
  Triangulation copy = *this;
  copy.derive_and_check_(sig_, sig_.labeled, /*reassign_arcs=*/false);
  if (!(copy == *this) || copy.sig_ != sig_)
    throw InternalInvariantViolation("validate() changed the map");
}

inline Triangulation Triangulation::flip(ArcRef a) const {
  if (a.id < 0 || a.id >= arcs()) throw NotFlippable("arc id out of range");
  if (!is_flippable(a)) throw NotFlippable("arc is the enclosed arc of a self-folded triangle");
  auto [E1, E2] = arc_sides_[a.id];
  int t1 = side_tri(E1), e1 = side_idx(E1);
  int t2 = side_tri(E2), e2 = side_idx(E2);

  // Quadrilateral corners, counterclockwise: V0, V1, V2, V3 with the old
  // diagonal V0-V2 and the new one V1-V3.
  int V0 = corner_vertex_[side_enc(t1, (e1 + 1) % 3)];
  int V1 = corner_vertex_[side_enc(t1, (e1 + 2) % 3)];
  int V2 = corner_vertex_[side_enc(t1, e1)];
  int V3 = corner_vertex_[side_enc(t2, (e2 + 2) % 3)];

  Side Y = side_enc(t1, (e1 + 1) % 3);  // V0 -> V1
  Side X = side_enc(t1, (e1 + 2) % 3);  // V1 -> V2
  Side W = side_enc(t2, (e2 + 1) % 3);  // V2 -> V3
  Side Z = side_enc(t2, (e2 + 2) % 3);  // V3 -> V0

  Triangulation R = *this;
  // New triangles: t1 = (V1,V3,V0) with sides d,z,y; t2 = (V3,V1,V2) with
  // sides d',x,w.
  Side nY = side_enc(t1, 2), nZ = side_enc(t1, 1), nX = side_enc(t2, 1), nW = side_enc(t2, 2);
  Side nD1 = side_enc(t1, 0), nD2 = side_enc(t2, 0);

  auto old_partner = [&](Side s) { return glue_[s]; };
  std::pair<Side, Side> moves[4] = {{Y, nY}, {Z, nZ}, {X, nX}, {W, nW}};

  R.corner_vertex_[side_enc(t1, 0)] = V1;
  R.corner_vertex_[side_enc(t1, 1)] = V3;
  R.corner_vertex_[side_enc(t1, 2)] = V0;
  R.corner_vertex_[side_enc(t2, 0)] = V3;
  R.corner_vertex_[side_enc(t2, 1)] = V1;
  R.corner_vertex_[side_enc(t2, 2)] = V2;

  auto moved = [&](Side s) -> Side {
    for (auto [o, n] : moves)
      if (o == s) return n;
    return s;
  };
  for (auto [o, n] : moves) {
    Side p = old_partner(o);
    R.glue_[n] = (p == kNoSide) ? kNoSide : moved(p);
  }
  for (auto [o, n] : moves) {
    Side p = R.glue_[n];
    if (p != kNoSide) R.glue_[p] = n;
  }
  R.glue_[nD1] = nD2;
  R.glue_[nD2] = nD1;

  // Arc ids: outer sides keep theirs, the new diagonal inherits a's.
  std::int32_t outer_ids[4];
  for (int i = 0; i < 4; ++i) outer_ids[i] = arc_of_side_[moves[i].first];
  for (int i = 0; i < 4; ++i) R.arc_of_side_[moves[i].second] = outer_ids[i];
  R.arc_of_side_[nD1] = a.id;
  R.arc_of_side_[nD2] = a.id;
  // Rebuild the arc->sides table for the touched arcs.
  for (std::int32_t id : {arc_of_side_[Y], arc_of_side_[Z], arc_of_side_[X], arc_of_side_[W], a.id}) {
    if (id < 0) continue;
    Side lo = kNoSide, hi = kNoSide;
    for (Side e = 0; e < 3 * n_; ++e) {
      if (R.arc_of_side_[e] == id) {
        if (lo == kNoSide)
          lo = e;
        else
          hi = e;
      }
    }
    FLIPFORGE_CHECK(lo != kNoSide && hi != kNoSide);
    R.arc_sides_[id] = {lo, hi};
  }
#ifndef NDEBUG
  R.validate();
#endif
  return R;
}

inline std::vector<std::vector<Side>> Triangulation::boundary_circuits() const {
  std::vector<std::vector<Side>> out;
  std::vector<char> used(3 * n_, 0);
  for (Side e0 = 0; e0 < 3 * n_; ++e0) {
    if (glue_[e0] != kNoSide || used[e0]) continue;
    std::vector<Side> circuit;
    Side e = e0;
    int guard = 0;
    do {
      circuit.push_back(e);
      used[e] = 1;
      // Walk the fan at e's head clockwise to the next boundary side.
      Corner k = side_enc(side_tri(e), (side_idx(e) + 1) % 3);
      while (glue_[side_enc(k / 3, k % 3)] != kNoSide) {
        k = cw_next(k);
        FLIPFORGE_CHECK(k != -1);
        if (++guard > 9 * n_) throw InvalidGluing("boundary circuit does not close");
      }
      e = side_enc(k / 3, k % 3);
    } while (e != e0);
    out.push_back(std::move(circuit));
  }
  return out;
}

// One entry per flippable arc, in arc id order.
inline std::vector<std::pair<ArcRef, Triangulation>> enumerate_flips(const Triangulation& T) {
  std::vector<std::pair<ArcRef, Triangulation>> out;
  for (std::int32_t i = 0; i < T.arcs(); ++i)
    if (T.is_flippable({i})) out.emplace_back(ArcRef{i}, T.flip({i}));
  return out;
}

}  // namespace flipforge
