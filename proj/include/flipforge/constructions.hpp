#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "flipforge/codes.hpp"
#include "flipforge/cutting.hpp"
#include "flipforge/explorer.hpp"
#include "flipforge/paths.hpp"

namespace flipforge {

// Uniform receipt for the constructive bounds: a claimed closed-form budget
// and the exact measured value.
struct ConstructionCertificate {
  std::int64_t claimed = 0;
  std::int64_t measured = 0;
  bool holds() const { return measured <= claimed; }
};

namespace constructions {

// ---- Contour walks ---------------------------------------------------------
// Clockwise walk around a collection of "slide" sides (a spanning tree or a
// boundary circuit): interior non-slide arc ends are crossed and recorded,
// slide sides are followed to their far vertex.  Stops on returning to the
// start sector, or at an explicit stop sector.
inline ArcWord contour_word(std::shared_ptr<const Triangulation> T,
                            const std::vector<bool>& slide, Corner start,
                            std::optional<Corner> stop = std::nullopt) {
  const Triangulation& S = *T;
  ArcWord w;
  w.base = T;
  w.start = start;
  Corner cur = start;
  Corner target = stop.value_or(start);
  int guard = 0;
  while (true) {
    Side s = side_enc(cur / 3, cur % 3);
    if (slide[s]) {
      cur = side_enc(cur / 3, (cur % 3 + 1) % 3);  // follow the side to its far corner
    } else {
      if (S.is_boundary_side(s))
        throw InternalInvariantViolation("contour walk crossed the boundary");
      w.crossings.push_back(s);
      cur = S.cw_next(cur);
    }
    if (cur == target && (stop.has_value() || !w.crossings.empty() || guard > 0)) break;
    if (++guard > 30 * S.triangles())
      throw InternalInvariantViolation("contour walk did not close up");
  }
  w.end = cur;
  words::validate(w);
  return w;
}

}  // namespace constructions

// Puncture-separating loop based at a marked point of a closed surface:
// the contour of a spanning tree of the triangulation's vertex graph.
struct SeparatingLoop {
  ArcWord loop;
  ConstructionCertificate cert;  // claimed 2(kappa - n + 1)
  // Crossings of the unbased neighborhood curve itself; meets the claimed
  // bound with equality.  The based loop may reduce further by swinging
  // around its basepoint.
  std::int64_t curve_crossings = 0;
};

inline SeparatingLoop spanning_tree_loop(const std::shared_ptr<const Triangulation>& T,
                                         int base_point) {
  const Triangulation& S = *T;
  const auto sig = S.signature();
  // With a single marked point the would-be loop bounds an unpunctured
  // monogon, which is inessential; two punctures are needed.
  if (sig.boundaries != 0 || sig.genus < 1 || sig.punctures < 2)
    throw HypothesisUnmet("separating loop needs a closed positive-genus surface, >= 2 points");
  if (base_point < 0 || base_point >= S.vertex_count())
    throw HypothesisUnmet("base point out of range");
  const int n = sig.punctures;
  // BFS tree over marked points along arcs, lowest arc id first.
  std::vector<bool> in_tree_arc(S.arcs(), false);
  {
    std::vector<bool> seen(S.vertex_count(), false);
    seen[base_point] = true;
    int reached = 1;
    std::deque<int> q{base_point};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (std::int32_t a = 0; a < S.arcs(); ++a) {
        auto [x, y] = S.arc_endpoints({a});
        int other = -1;
        if (x == v && !seen[y]) other = y;
        if (y == v && !seen[x]) other = other == -1 ? x : other;
        if (other != -1 && !seen[other]) {
          seen[other] = true;
          in_tree_arc[a] = true;
          ++reached;
          q.push_back(other);
        }
      }
    }
    FLIPFORGE_CHECK(reached == S.vertex_count());
  }
  std::vector<bool> slide(S.sides(), false);
  for (Side e = 0; e < S.sides(); ++e) {
    std::int32_t a = S.arc_of_side(e);
    if (a >= 0 && in_tree_arc[a]) slide[e] = true;
  }
  Corner start = -1;
  for (Corner k = 0; k < S.sides() && start == -1; ++k)
    if (S.corner_vertex(k) == base_point) start = k;
  SeparatingLoop out;
  ArcWord raw = constructions::contour_word(T, slide, start);
  out.curve_crossings = static_cast<std::int64_t>(raw.crossings.size());
  out.loop = words::reduce(raw);
  out.cert.claimed = 2 * (S.arcs() - n + 1);
  out.cert.measured = static_cast<std::int64_t>(out.loop.crossings.size());
  return out;
}

// Lowest arc whose removal keeps the surface connected and drops the genus.
inline ArcRef find_nonseparating_arc(const Triangulation& T) {
  const auto sig = T.signature();
  if (sig.genus < 1 || sig.boundaries != 1 || sig.punctures != 0)
    throw HypothesisUnmet("needs one boundary curve, positive genus, points on the boundary");
  for (std::int32_t a = 0; a < T.arcs(); ++a) {
    auto cut = cut_along(T, std::vector<ArcRef>{{a}});
    if (cut.pieces.size() == 1 && cut.pieces[0].signature().genus == sig.genus - 1)
      return {a};
  }
  throw InternalInvariantViolation("no non-separating arc found");
}

// Lowest arc joining the two boundary circuits.
inline ArcRef find_cross_boundary_arc(const Triangulation& T) {
  const auto sig = T.signature();
  if (sig.boundaries != 2 || sig.punctures != 0)
    throw HypothesisUnmet("needs exactly two boundary curves with all points on the boundary");
  auto circuits = T.boundary_circuits();
  FLIPFORGE_CHECK(circuits.size() == 2);
  std::vector<int> circuit_of(T.vertex_count(), -1);
  for (int c = 0; c < 2; ++c)
    for (Side e : circuits[c]) {
      circuit_of[T.corner_vertex(side_enc(side_tri(e), side_idx(e)))] = c;
      circuit_of[T.corner_vertex(side_enc(side_tri(e), (side_idx(e) + 1) % 3))] = c;
    }
  for (std::int32_t a = 0; a < T.arcs(); ++a) {
    auto [x, y] = T.arc_endpoints({a});
    if (circuit_of[x] != circuit_of[y]) {
      auto cut = cut_along(T, std::vector<ArcRef>{{a}});
      FLIPFORGE_CHECK(cut.pieces.size() == 1 &&
                      cut.pieces[0].signature().boundaries == 1);
      return {a};
    }
  }
  throw InternalInvariantViolation("no arc joins the two boundary circuits");
}

// Lowest arc from an interior puncture to a boundary marked point.
inline ArcRef find_arc_to_boundary(const Triangulation& T) {
  const auto sig = T.signature();
  if (sig.punctures < 1 || sig.boundaries < 1 || sig.boundary_points < 1)
    throw HypothesisUnmet("needs interior punctures and boundary marked points");
  for (std::int32_t a = 0; a < T.arcs(); ++a) {
    auto [x, y] = T.arc_endpoints({a});
    if (T.vertex_on_boundary(x) != T.vertex_on_boundary(y)) return {a};
  }
  throw InternalInvariantViolation("no arc joins a puncture to the boundary");
}

// ---- Canonical shapes -------------------------------------------------------

namespace constructions {

struct MapAssembler {
  std::vector<Side> glue;
  std::vector<int> labels;
  int triangles = 0;

  int add_triangle(int v0, int v1, int v2) {
    glue.insert(glue.end(), {kNoSide, kNoSide, kNoSide});
    labels.insert(labels.end(), {v0, v1, v2});
    return triangles++;
  }
  void pair(Side a, Side b) {
    FLIPFORGE_CHECK(glue[a] == kNoSide && glue[b] == kNoSide && a != b);
    glue[a] = b;
    glue[b] = a;
  }
  Triangulation finish(bool labeled = true) const {
    return Triangulation::from_tables(triangles, glue, labels, std::nullopt, labeled);
  }
};

// One cylinder layer between a loop at u (outer) and a loop at v (inner):
// two triangles with a radial u-v and one diagonal.  Returns the inner loop
// side, gluing the outer loop side to `attach` when given.
inline Side append_cylinder(MapAssembler& m, std::optional<Side> attach, int u, int v) {
  int t1 = m.add_triangle(u, u, v);
  int t2 = m.add_triangle(u, v, v);
  m.pair(side_enc(t1, 2), side_enc(t2, 0));  // diagonal
  m.pair(side_enc(t1, 1), side_enc(t2, 2));  // radial
  if (attach) m.pair(side_enc(t1, 0), *attach);
  return side_enc(t2, 1);
}

// Final layer: a self-folded triangle with the enclosed radial u-w.
inline void append_fold(MapAssembler& m, std::optional<Side> attach, int u, int w) {
  int f = m.add_triangle(u, w, u);
  m.pair(side_enc(f, 0), side_enc(f, 1));
  if (attach) m.pair(side_enc(f, 2), *attach);
}

// A full seashell stack for point labels (base, g1, g2, ...): cylinders for
// all but the last label, then the folded layer.
inline void append_shell(MapAssembler& m, std::optional<Side> attach, int base,
                         const std::vector<int>& group) {
  FLIPFORGE_CHECK(!group.empty());
  int u = base;
  std::optional<Side> at = attach;
  for (size_t i = 0; i + 1 < group.size(); ++i) {
    at = append_cylinder(m, at, u, group[i]);
    u = group[i];
  }
  append_fold(m, at, u, group.back());
}

}  // namespace constructions

// The layered canonical triangulation of a punctured disk: boundary point
// label 0, punctures 1..n from the boundary inward.
inline Triangulation canonical_seashell(int n) {
  if (n < 1) throw HypothesisUnmet("seashell needs at least one puncture");
  constructions::MapAssembler m;
  std::vector<int> group(n);
  for (int i = 0; i < n; ++i) group[i] = i + 1;
  constructions::append_shell(m, std::nullopt, 0, group);
  auto T = m.finish();
  FLIPFORGE_CHECK((T.signature() ==
                   SurfaceSig{.genus = 0, .boundaries = 1, .punctures = n, .boundary_points = 1}));
  return T;
}

inline Triangulation seashell_with_labels(int boundary_label, const std::vector<int>& order) {
  constructions::MapAssembler m;
  constructions::append_shell(m, std::nullopt, boundary_label, order);
  return m.finish();
}

// Canonical genus piece: a triangle on the boundary with two recursively
// canonical sub-pieces of half genus glued into its other sides.
inline Triangulation build_gamma_canonical(int g) {
  if (g < 1) throw HypothesisUnmet("genus piece needs g >= 1");
  if (g == 1) return builders::genus_piece(1);
  std::function<std::optional<Side>(constructions::MapAssembler&, int)> rec =
      [&](constructions::MapAssembler& m, int gg) -> std::optional<Side> {
    // Returns the boundary side of a genus-gg piece appended to m.
    if (gg == 1) {
      Triangulation base = builders::genus_piece(1);
      int off = m.triangles;
      Side bside = kNoSide;
      for (int t = 0; t < base.triangles(); ++t)
        m.add_triangle(0, 0, 0);
      for (Side e = 0; e < base.sides(); ++e) {
        Side ge = base.glue(e);
        if (ge == kNoSide)
          bside = side_enc(off + side_tri(e), side_idx(e));
        else if (ge > e)
          m.pair(side_enc(off + side_tri(e), side_idx(e)),
                 side_enc(off + side_tri(ge), side_idx(ge)));
      }
      FLIPFORGE_CHECK(bside != kNoSide);
      return bside;
    }
    int t0 = m.add_triangle(0, 0, 0);
    auto s1 = rec(m, gg / 2);
    auto s2 = rec(m, gg - gg / 2);
    m.pair(side_enc(t0, 1), *s1);
    m.pair(side_enc(t0, 2), *s2);
    return side_enc(t0, 0);
  };
  constructions::MapAssembler m;
  auto bside = rec(m, g);
  (void)bside;  // stays unglued: the boundary arc
  auto T = m.finish();
  FLIPFORGE_CHECK((T.signature() ==
                   SurfaceSig{.genus = g, .boundaries = 1, .punctures = 0, .boundary_points = 1}));
  return T;
}

// Canonical closed surface: a seashell disk and a canonical genus piece
// glued along their boundary sides.  Boundary point label and puncture
// order are explicit.
inline Triangulation build_closed_canonical(int g, int base_label,
                                            const std::vector<int>& puncture_order) {
  FLIPFORGE_CHECK(g >= 1);
  constructions::MapAssembler m;
  // Genus part: reuse the gamma assembly with all corners at base_label.
  Triangulation gamma = build_gamma_canonical(g);
  Side gamma_bside = kNoSide;
  for (int t = 0; t < gamma.triangles(); ++t) m.add_triangle(base_label, base_label, base_label);
  for (Side e = 0; e < gamma.sides(); ++e) {
    Side ge = gamma.glue(e);
    if (ge == kNoSide)
      gamma_bside = e;
    else if (ge > e)
      m.pair(e, ge);
  }
  FLIPFORGE_CHECK(gamma_bside != kNoSide);
  if (puncture_order.empty()) {
    // No disk part: glue is impossible; a closed surface needs punctures.
    throw HypothesisUnmet("closed canonical form needs at least one puncture besides the base");
  }
  // Disk part glued into the boundary side.
  constructions::append_shell(m, gamma_bside, base_label, puncture_order);
  return m.finish();
}

// The inductive shape behind the puncture merging steps: seashell layers
// already built, then a split triangle with two seashell stacks inside.
struct TwoGroupShape {
  Triangulation map;
  std::vector<std::int32_t> active;  // arcs the next merge step may flip
};

inline TwoGroupShape build_two_group(int boundary_label, const std::vector<int>& layers,
                                     const std::vector<int>& L, const std::vector<int>& R) {
  FLIPFORGE_CHECK(!L.empty() && !R.empty());
  constructions::MapAssembler m;
  std::optional<Side> at;
  int u = boundary_label;
  for (int v : layers) {
    at = constructions::append_cylinder(m, at, u, v);
    u = v;
  }
  int split = m.add_triangle(u, u, u);
  if (at) m.pair(side_enc(split, 0), *at);
  std::vector<Side> probes;  // sides whose arcs are active, in role order
  probes.push_back(side_enc(split, 1));  // beta
  probes.push_back(side_enc(split, 2));  // beta'
  auto shell_probes = [&](Side attach_side, const std::vector<int>& G) {
    int first_tri = m.triangles;
    constructions::append_shell(m, attach_side, u, G);
    if (G.size() == 1) {
      probes.push_back(side_enc(first_tri, 0));  // enclosed radial of the fold
    } else {
      probes.push_back(side_enc(first_tri, 1));  // first radial
      probes.push_back(side_enc(first_tri, 2));  // first diagonal
    }
  };
  shell_probes(side_enc(split, 1), L);
  shell_probes(side_enc(split, 2), R);
  TwoGroupShape out;
  out.map = m.finish();
  for (Side s : probes) {
    std::int32_t a = out.map.arc_of_side(s);
    FLIPFORGE_CHECK(a >= 0);
    out.active.push_back(a);
  }
  return out;
}

// ---- Merging ----------------------------------------------------------------

// Breadth-first search over flips of the given arcs only, out to `cap`
// flips, for a vertex whose labeled code matches one of the targets.
inline std::optional<FlipPath> restricted_path_to_code(const Triangulation& start,
                                                       const std::vector<std::int32_t>& arcs,
                                                       const std::vector<CanonicalCode>& targets,
                                                       int cap) {
  auto hit = [&](const Triangulation& T) {
    for (const auto& t : targets)
      if (canonical_code(T, t.mode) == t) return true;
    return false;
  };
  if (hit(start)) return FlipPath{start, {}};
  struct Node {
    MarkedTriangulation v;
    std::vector<std::int32_t> steps;
  };
  std::unordered_map<VertexKey, int, KeyHash> seen;
  std::vector<Node> frontier{{MarkedTriangulation::identity(start), {}}};
  seen.emplace(frontier[0].v.key(), 0);
  for (int depth = 0; depth < cap && !frontier.empty(); ++depth) {
    std::vector<Node> next;
    for (auto& node : frontier)
      for (std::int32_t a : arcs) {
        if (!node.v.map().is_flippable({a})) continue;
        auto nb = node.v.flip({a});
        VertexKey k = nb.key();
        if (!seen.emplace(std::move(k), 0).second) continue;
        auto steps = node.steps;
        steps.push_back(a);
        if (hit(nb.map())) return FlipPath{start, std::move(steps)};
        next.push_back({std::move(nb), std::move(steps)});
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// One merging step: from a two-group shape, pull the next puncture out into
// a new seashell layer.  At most 6 flips; arcs of completed layers and the
// stack interiors are never flipped.
struct MergeOutcome {
  FlipPath path;
  Triangulation endpoint;
};

namespace constructions {

// Target codes after extracting the next puncture from (layers, L, R): the
// reduced two-group shape in either left/right arrangement (the two are
// distinct labeled classes), or the full seashell when one group empties.
// from_left says which group head comes next in the order.
inline std::vector<CanonicalCode> merge_targets(int boundary_label, std::vector<int> layers,
                                                std::vector<int> L, std::vector<int> R,
                                                bool from_left) {
  int next = from_left ? L[0] : R[0];
  layers.push_back(next);
  auto& G = from_left ? L : R;
  G.erase(G.begin());
  if (L.empty() || R.empty()) {
    const auto& rest = L.empty() ? R : L;
    std::vector<int> order = layers;
    order.insert(order.end(), rest.begin(), rest.end());
    auto T = seashell_with_labels(boundary_label, order);
    return {canonical_code(T, LabelMode::labeled)};
  }
  return {canonical_code(build_two_group(boundary_label, layers, L, R).map, LabelMode::labeled),
          canonical_code(build_two_group(boundary_label, layers, R, L).map, LabelMode::labeled)};
}

}  // namespace constructions

inline MergeOutcome merge_step_known(const Triangulation& T,
                                     const std::vector<std::int32_t>& active,
                                     const std::vector<CanonicalCode>& targets, int cap = 6) {
  auto path = restricted_path_to_code(T, active, targets, cap);
  if (!path) throw ShapeMismatch("merge step found no path within the flip budget");
  MergeOutcome out;
  out.path = std::move(*path);
  out.endpoint = T;
  for (auto s : out.path.steps) out.endpoint = out.endpoint.flip({s});
  return out;
}

// Public flavor: recognize the merged-prefix shape of T at layer k by
// matching against the possible group partitions, then run the step.
inline MergeOutcome merge_step(const Triangulation& T, int k) {
  const auto sig = T.signature();
  if (sig.genus != 0 || sig.boundaries != 1 || sig.boundary_points != 1 || sig.punctures < 1)
    throw ShapeMismatch("merge_step needs a once-marked punctured disk");
  const int m = sig.punctures;
  // Vertex labels: boundary point plus punctures; the layer order is label
  // order, boundary label is the unique boundary vertex.
  int boundary_label = -1;
  for (int v = 0; v < T.vertex_count(); ++v)
    if (T.vertex_on_boundary(v)) boundary_label = v;
  std::vector<int> interior;
  for (int v = 0; v < T.vertex_count(); ++v)
    if (!T.vertex_on_boundary(v)) interior.push_back(v);
  std::sort(interior.begin(), interior.end());
  if (k < 0 || k >= m) throw ShapeMismatch("layer index out of range");
  std::vector<int> layers(interior.begin(), interior.begin() + k);
  std::vector<int> rest(interior.begin() + k, interior.end());
  if (rest.size() <= 1) {
    // The last layer is automatic: the shape must already be the seashell.
    std::vector<int> order = layers;
    order.insert(order.end(), rest.begin(), rest.end());
    auto want = canonical_code(seashell_with_labels(boundary_label, order), LabelMode::labeled);
    if (!(canonical_code(T, LabelMode::labeled) == want))
      throw ShapeMismatch("triangulation is not in merged-prefix form");
    return {FlipPath{T, {}}, T};
  }
  auto code_T = canonical_code(T, LabelMode::labeled);
  for (std::uint32_t mask = 1; mask + 1 < (1u << rest.size()); ++mask) {
    std::vector<int> L, R;
    for (size_t i = 0; i < rest.size(); ++i) ((mask >> i) & 1 ? L : R).push_back(rest[i]);
    auto shape = build_two_group(boundary_label, layers, L, R);
    if (!(canonical_code(shape.map, LabelMode::labeled) == code_T)) continue;
    auto iso = code_isomorphism(shape.map, T, LabelMode::labeled);
    std::vector<std::int32_t> active;
    for (std::int32_t a : shape.active) {
      std::int32_t image = T.arc_of_side(iso[shape.map.arc_lo({a})]);
      FLIPFORGE_CHECK(image >= 0);
      active.push_back(image);
    }
    auto targets = constructions::merge_targets(boundary_label, layers, L, R, L[0] < R[0]);
    return merge_step_known(T, active, targets);
  }
  throw ShapeMismatch("triangulation is not in merged-prefix form");
}

// ---- Splitting the genus ----------------------------------------------------

// The two boundary-parallel arcs that cut a genus piece into a triangle and
// two pieces of half genus, with their intersection budget 20g - 4.
struct GenusSplit {
  ArcWord b, b_prime;
  ConstructionCertificate cert;
  std::vector<ArcRef> tunnel_arcs;  // the 2*floor(g/2) arcs of T cut first
};

inline GenusSplit genus_split_arcs(const std::shared_ptr<const Triangulation>& T) {
  const auto sig = T->signature();
  if (sig.genus < 2 || sig.boundaries != 1 || sig.boundary_points != 1 || sig.punctures != 0)
    throw HypothesisUnmet("genus split needs a genus >= 2 piece with one boundary point");
  const int g = sig.genus;
  GenusSplit out;
  std::vector<ArcRef> cut_ids;
  for (int round = 0; round < g / 2; ++round) {
    auto cut = cut_along(*T, cut_ids);
    FLIPFORGE_CHECK(cut.pieces.size() == 1);
    ArcRef a1 = find_nonseparating_arc(cut.pieces[0]);
    cut_ids.push_back({cut.to_original_arc(*T, 0, a1)});
    auto cut2 = cut_along(*T, cut_ids);
    FLIPFORGE_CHECK(cut2.pieces.size() == 1);
    ArcRef a2 = find_cross_boundary_arc(cut2.pieces[0]);
    cut_ids.push_back({cut2.to_original_arc(*T, 0, a2)});
  }
  out.tunnel_arcs = cut_ids;
  auto cut = cut_along(*T, cut_ids);
  FLIPFORGE_CHECK(cut.pieces.size() == 1);
  const Triangulation& piece = cut.pieces[0];
  auto circuits = piece.boundary_circuits();
  FLIPFORGE_CHECK(circuits.size() == 1);
  // Locate the original boundary arc's copy on the circuit.
  Side a0_orig = kNoSide;
  for (Side e = 0; e < T->sides(); ++e)
    if (T->is_boundary_side(e)) a0_orig = e;
  Side a0p = cut.to_piece_side(a0_orig);
  std::vector<bool> slide_all(piece.sides(), false);
  for (Side e : circuits[0]) slide_all[e] = true;
  auto pbase = std::make_shared<const Triangulation>(piece);
  // b: closed contour at a0's start corner, parallel to the whole circuit.
  Corner b_start = side_enc(side_tri(a0p), side_idx(a0p));
  ArcWord b_piece = constructions::contour_word(pbase, slide_all, b_start);
  // b': from a0's head corner around the rest of the circuit to its tail.
  auto slide_rest = slide_all;
  slide_rest[a0p] = false;
  Corner bp_start = side_enc(side_tri(a0p), (side_idx(a0p) + 1) % 3);
  ArcWord bp_piece =
      constructions::contour_word(pbase, slide_rest, bp_start, b_start);
  // Map the words back onto T.
  auto lift = [&](const ArcWord& w) {
    ArcWord r;
    r.base = T;
    r.start = side_enc(cut.piece_tri_to_orig[0][w.start / 3], w.start % 3);
    r.end = side_enc(cut.piece_tri_to_orig[0][w.end / 3], w.end % 3);
    for (Side e : w.crossings)
      r.crossings.push_back(side_enc(cut.piece_tri_to_orig[0][side_tri(e)], side_idx(e)));
    words::validate(r);
    return words::reduce(r);
  };
  out.b = lift(b_piece);
  out.b_prime = lift(bp_piece);
  out.cert.claimed = 20 * g - 4;
  out.cert.measured = static_cast<std::int64_t>(out.b.crossings.size()) +
                      static_cast<std::int64_t>(out.b_prime.crossings.size());
  return out;
}

// ---- Canonical paths ---------------------------------------------------------

struct CanonicalPathResult {
  FlipPath path;
  ConstructionCertificate cert;
  Triangulation endpoint;
};

namespace constructions {

inline std::int64_t disk_budget(int punctures) {
  if (punctures <= 1) return 0;
  int n = punctures + 1;
  double v = 10.0 * n - 10.0 + 400.0 * (n / 2 + 1) * std::log(n / 2 + 2.0) + 6.0 * (n - 1);
  return static_cast<std::int64_t>(std::ceil(v));
}

inline std::int64_t genus_budget(int g) {
  if (g <= 1) return 0;
  double v = 40.0 * g - 8.0 + 1000.0 * (g / 2.0) * std::log((g + 2.0) / 2.0) +
             1000.0 * ((g + 1.0) / 2.0) * std::log((g + 3.0) / 2.0);
  return static_cast<std::int64_t>(std::ceil(v));
}

// Split a punctured disk along b, b' built parallel to the boundary of the
// piece cut open along puncture-to-boundary arcs of T.
inline std::pair<ArcWord, ArcWord> disk_split_arcs(const std::shared_ptr<const Triangulation>& T,
                                                   int cuts) {
  std::vector<ArcRef> cut_ids;
  for (int r = 0; r < cuts; ++r) {
    auto cut = cut_along(*T, cut_ids);
    FLIPFORGE_CHECK(cut.pieces.size() == 1);
    ArcRef a = find_arc_to_boundary(cut.pieces[0]);
    cut_ids.push_back({cut.to_original_arc(*T, 0, a)});
  }
  auto cut = cut_along(*T, cut_ids);
  const Triangulation& piece = cut.pieces[0];
  auto circuits = piece.boundary_circuits();
  FLIPFORGE_CHECK(circuits.size() == 1);
  Side a0_orig = kNoSide;
  for (Side e = 0; e < T->sides(); ++e)
    if (T->is_boundary_side(e)) a0_orig = e;
  Side a0p = cut.to_piece_side(a0_orig);
  std::vector<bool> slide_all(piece.sides(), false);
  for (Side e : circuits[0]) slide_all[e] = true;
  auto pbase = std::make_shared<const Triangulation>(piece);
  Corner b_start = side_enc(side_tri(a0p), side_idx(a0p));
  ArcWord b_piece = contour_word(pbase, slide_all, b_start);
  auto slide_rest = slide_all;
  slide_rest[a0p] = false;
  Corner bp_start = side_enc(side_tri(a0p), (side_idx(a0p) + 1) % 3);
  ArcWord bp_piece = contour_word(pbase, slide_rest, bp_start, b_start);
  auto lift = [&](const ArcWord& w) {
    ArcWord r;
    r.base = T;
    r.start = side_enc(cut.piece_tri_to_orig[0][w.start / 3], w.start % 3);
    r.end = side_enc(cut.piece_tri_to_orig[0][w.end / 3], w.end % 3);
    for (Side e : w.crossings)
      r.crossings.push_back(side_enc(cut.piece_tri_to_orig[0][side_tri(e)], side_idx(e)));
    words::validate(r);
    return words::reduce(r);
  };
  return {lift(b_piece), lift(bp_piece)};
}

}  // namespace constructions

// Flip path from a triangulated punctured disk to its canonical seashell:
// split the punctures into halves behind boundary-parallel arcs, recurse,
// then merge layer by layer.  rank[vertex] orders the punctures; by default
// the marked point labels do.
inline CanonicalPathResult canonical_path_disk(const Triangulation& T0,
                                               std::vector<int> rank = {}) {
  const auto sig = T0.signature();
  if (sig.genus != 0 || sig.boundaries != 1 || sig.boundary_points != 1 || sig.punctures < 1)
    throw HypothesisUnmet("canonical disk path needs a once-marked punctured disk");
  const int m = sig.punctures;
  if (rank.empty()) {
    rank.assign(T0.vertex_count(), 0);
    for (int v = 0; v < T0.vertex_count(); ++v) rank[v] = v;
  }
  int boundary_label = -1;
  for (int v = 0; v < T0.vertex_count(); ++v)
    if (T0.vertex_on_boundary(v)) boundary_label = v;
  auto by_rank = [&](std::vector<int> vs) {
    std::sort(vs.begin(), vs.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    return vs;
  };
  std::vector<int> interior;
  for (int v = 0; v < T0.vertex_count(); ++v)
    if (!T0.vertex_on_boundary(v)) interior.push_back(v);
  interior = by_rank(interior);

  CanonicalPathResult out;
  out.path.start = T0;
  out.cert.claimed = constructions::disk_budget(m);
  if (m == 1) {
    out.endpoint = T0;
    out.cert.measured = 0;
    return out;
  }
  {  // already canonical: nothing to do
    auto want = canonical_code(seashell_with_labels(boundary_label, interior),
                               LabelMode::labeled);
    if (canonical_code(T0, LabelMode::labeled) == want) {
      out.endpoint = T0;
      out.cert.measured = 0;
      return out;
    }
  }

  auto T = std::make_shared<const Triangulation>(T0);
  // Split: open half the punctures to the boundary, then fence both halves.
  int cuts = (m + 1) / 2;
  if (cuts >= m) cuts = m - 1;
  auto [b, bp] = constructions::disk_split_arcs(T, cuts);
  auto sp = path_to_stratum(T, make_multiarc(T, {b, bp}));
  out.path.steps = sp.path.steps;
  Triangulation cur = *sp.endpoint;

  // Cut along both fences: a middle triangle and the two group disks.
  auto fence = arc_ids_of(cur, sp.endpoint_arcs);
  auto cut = cut_along(cur, fence);
  const Triangulation cut_time = cur;  // arc id correspondence is fixed here
  FLIPFORGE_CHECK(cut.pieces.size() == 3);
  std::vector<int> L_labels, R_labels;
  for (size_t p = 0; p < cut.pieces.size(); ++p) {
    const auto psig = cut.pieces[p].signature();
    if (psig.punctures == 0) continue;  // the middle triangle
    std::vector<int> group;
    for (int v = 0; v < cut.pieces[p].vertex_count(); ++v)
      if (!cut.pieces[p].vertex_on_boundary(v)) group.push_back(cut.piece_vertex_to_orig[p][v]);
    auto piece_rank = [&] {
      std::vector<int> r(cut.pieces[p].vertex_count(), 0);
      for (int v = 0; v < cut.pieces[p].vertex_count(); ++v)
        r[v] = rank[cut.piece_vertex_to_orig[p][v]];
      return r;
    }();
    auto rec = canonical_path_disk(cut.pieces[p], piece_rank);
    for (auto step : rec.path.steps) {
      std::int32_t orig = cut.to_original_arc(cut_time, static_cast<int>(p), {step});
      FLIPFORGE_CHECK(orig >= 0);
      out.path.steps.push_back(orig);
      cur = cur.flip({orig});
    }
    group = by_rank(std::move(group));
    if (L_labels.empty())
      L_labels = std::move(group);
    else
      R_labels = std::move(group);
  }
  FLIPFORGE_CHECK(!L_labels.empty() && !R_labels.empty());

  // Merge loop: extract the lowest-ranked remaining puncture each round.
  // The left/right arrangement realized on the surface is detected per
  // round; the two arrangements are distinct labeled classes.
  std::vector<int> layers;
  std::vector<int> L = L_labels, R = R_labels;
  auto rank_less = [&](int a, int b) { return rank[a] < rank[b]; };
  while (!L.empty() && !R.empty()) {
    auto cur_code = canonical_code(cur, LabelMode::labeled);
    auto shape = build_two_group(boundary_label, layers, L, R);
    if (!(canonical_code(shape.map, LabelMode::labeled) == cur_code)) {
      std::swap(L, R);
      shape = build_two_group(boundary_label, layers, L, R);
      if (!(canonical_code(shape.map, LabelMode::labeled) == cur_code))
        throw InternalInvariantViolation("merge loop lost the two-group shape");
    }
    auto iso = code_isomorphism(shape.map, cur, LabelMode::labeled);
    std::vector<std::int32_t> active;
    for (std::int32_t a : shape.active) {
      std::int32_t image = cur.arc_of_side(iso[shape.map.arc_lo({a})]);
      FLIPFORGE_CHECK(image >= 0);
      active.push_back(image);
    }
    bool from_left = rank_less(L[0], R[0]);
    auto targets = constructions::merge_targets(boundary_label, layers, L, R, from_left);
    auto step = merge_step_known(cur, active, targets);
    FLIPFORGE_CHECK(step.path.steps.size() <= 6);
    for (auto s : step.path.steps) out.path.steps.push_back(s);
    cur = step.endpoint;
    int next = from_left ? L[0] : R[0];
    layers.push_back(next);
    (from_left ? L : R).erase((from_left ? L : R).begin());
  }
  // One group left: the shape is already the full seashell.
  std::vector<int> order = layers;
  const auto& rest = L.empty() ? R : L;
  order.insert(order.end(), rest.begin(), rest.end());
  auto want = canonical_code(seashell_with_labels(boundary_label, order), LabelMode::labeled);
  if (!(canonical_code(cur, LabelMode::labeled) == want))
    throw InternalInvariantViolation("merge loop did not reach the seashell");
  out.endpoint = cur;
  out.cert.measured = static_cast<std::int64_t>(out.path.steps.size());
  return out;
}

// Flip path from a genus piece to the canonical assembly: insert the two
// splitting arcs, recurse on the two half-genus pieces, done (the base case
// is a single homeomorphism class).
inline CanonicalPathResult canonical_path_genus(const Triangulation& T0) {
  const auto sig = T0.signature();
  if (sig.genus < 1 || sig.boundaries != 1 || sig.boundary_points != 1 || sig.punctures != 0)
    throw HypothesisUnmet("canonical genus path needs a one-point one-boundary genus piece");
  const int g = sig.genus;
  CanonicalPathResult out;
  out.path.start = T0;
  out.cert.claimed = constructions::genus_budget(g);
  if (g == 1) {
    out.endpoint = T0;
    out.cert.measured = 0;
    FLIPFORGE_CHECK(canonical_code(T0, LabelMode::labeled) ==
                    canonical_code(build_gamma_canonical(1), LabelMode::labeled));
    return out;
  }
  auto T = std::make_shared<const Triangulation>(T0);
  auto split = genus_split_arcs(T);
  auto sp = path_to_stratum(T, make_multiarc(T, {split.b, split.b_prime}));
  out.path.steps = sp.path.steps;
  Triangulation cur = *sp.endpoint;
  auto fence = arc_ids_of(cur, sp.endpoint_arcs);
  auto cut = cut_along(cur, fence);
  const Triangulation cut_time = cur;
  FLIPFORGE_CHECK(cut.pieces.size() == 3);
  for (size_t p = 0; p < cut.pieces.size(); ++p) {
    const auto psig = cut.pieces[p].signature();
    if (psig.genus == 0) continue;  // the middle triangle
    auto rec = canonical_path_genus(cut.pieces[p]);
    for (auto step : rec.path.steps) {
      std::int32_t orig = cut.to_original_arc(cut_time, static_cast<int>(p), {step});
      FLIPFORGE_CHECK(orig >= 0);
      out.path.steps.push_back(orig);
      cur = cur.flip({orig});
    }
  }
  if (!(canonical_code(cur, LabelMode::labeled) ==
        canonical_code(build_gamma_canonical(g), LabelMode::labeled)))
    throw InternalInvariantViolation("genus path did not reach the canonical assembly");
  out.endpoint = cur;
  out.cert.measured = static_cast<std::int64_t>(out.path.steps.size());
  return out;
}

// Canonical path for a closed surface: separate punctures from genus with a
// spanning-tree loop, then canonicalize both sides.  Realizes the global
// upper-bound scheme diam <= diam(Omega) + diam(Gamma) + 2(kappa - n + 1).
inline CanonicalPathResult canonical_path_closed(const Triangulation& T0) {
  const auto sig = T0.signature();
  if (sig.boundaries != 0 || sig.genus < 1 || sig.punctures < 2)
    throw HypothesisUnmet("closed canonical path needs genus >= 1 and >= 2 punctures");
  auto T = std::make_shared<const Triangulation>(T0);
  int base_point = 0;
  auto loop = spanning_tree_loop(T, base_point);
  CanonicalPathResult out;
  out.path.start = T0;
  out.cert.claimed = loop.cert.claimed + constructions::disk_budget(sig.punctures - 1) +
                     constructions::genus_budget(sig.genus);
  auto sp = path_to_stratum(T, make_multiarc(T, {loop.loop}));
  out.path.steps = sp.path.steps;
  Triangulation cur = *sp.endpoint;
  auto fence = arc_ids_of(cur, sp.endpoint_arcs);
  auto cut = cut_along(cur, fence);
  const Triangulation cut_time = cur;
  FLIPFORGE_CHECK(cut.pieces.size() == 2);
  std::vector<int> puncture_order;
  for (size_t p = 0; p < cut.pieces.size(); ++p) {
    const auto psig = cut.pieces[p].signature();
    if (psig.genus > 0) {
      auto rec = canonical_path_genus(cut.pieces[p]);
      for (auto step : rec.path.steps) {
        std::int32_t orig = cut.to_original_arc(cut_time, static_cast<int>(p), {step});
        out.path.steps.push_back(orig);
        cur = cur.flip({orig});
      }
    } else {
      std::vector<int> piece_rank(cut.pieces[p].vertex_count(), 0);
      for (int v = 0; v < cut.pieces[p].vertex_count(); ++v)
        piece_rank[v] = cut.piece_vertex_to_orig[p][v];
      auto rec = canonical_path_disk(cut.pieces[p], piece_rank);
      for (auto step : rec.path.steps) {
        std::int32_t orig = cut.to_original_arc(cut_time, static_cast<int>(p), {step});
        out.path.steps.push_back(orig);
        cur = cur.flip({orig});
      }
      for (int v = 0; v < cut.pieces[p].vertex_count(); ++v)
        if (!cut.pieces[p].vertex_on_boundary(v))
          puncture_order.push_back(cut.piece_vertex_to_orig[p][v]);
      std::sort(puncture_order.begin(), puncture_order.end());
    }
  }
  auto want = canonical_code(build_closed_canonical(sig.genus, base_point, puncture_order),
                             LabelMode::labeled);
  if (!(canonical_code(cur, LabelMode::labeled) == want))
    throw InternalInvariantViolation("closed path did not reach the canonical assembly");
  out.endpoint = cur;
  out.cert.measured = static_cast<std::int64_t>(out.path.steps.size());
  return out;
}

}  // namespace flipforge
