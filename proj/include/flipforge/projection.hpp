#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "flipforge/explorer.hpp"
#include "flipforge/paths.hpp"

namespace flipforge {

struct OrientedArc {
  ArcWord word;
  bool forward = true;  // head = word.end when true
};

namespace projection_detail {

inline Corner head_sector_for_side(const Triangulation& S, Side approach, bool head_at_side_end) {
  // Sector at the head vertex adjacent to the given copy of the arc's side.
  // head_at_side_end: the head is the end corner of `approach`'s direction.
  if (head_at_side_end) return side_enc(side_tri(approach), (side_idx(approach) + 1) % 3);
  return side_enc(side_tri(approach), side_idx(approach));
}

}  // namespace projection_detail

// Combing a word along an oriented arc of its base triangulation: cut t at
// every crossing with the arc and drag the cut ends along the arc to its
// head.  Pieces that close up trivially are dropped; isotopic outputs are
// merged.  Components are returned in order along t.
inline std::vector<ArcWord> comb_along_base_arc(const std::shared_ptr<const Triangulation>& S,
                                                ArcRef arc, bool head_at_lo_end,
                                                const ArcWord& t) {
  words::require_same_base(t, *S);
  auto [lo, hi] = S->arc_sides(arc);
  // The head vertex sector adjacent to side `e` of the arc: the head is the
  // end corner of lo's direction iff head_at_lo_end; on the hi copy the
  // roles reverse because glued sides run oppositely.
  auto head_sector = [&](Side e) {
    if (e == lo) return projection_detail::head_sector_for_side(*S, lo, head_at_lo_end);
    FLIPFORGE_CHECK(e == hi);
    return projection_detail::head_sector_for_side(*S, hi, !head_at_lo_end);
  };
  std::vector<size_t> hits;
  for (size_t i = 0; i < t.crossings.size(); ++i)
    if (S->arc_of_side(t.crossings[i]) == arc.id) hits.push_back(i);
  if (hits.empty()) return {t};

  std::vector<ArcWord> pieces;
  auto add_piece = [&](Corner start, Corner end, size_t from, size_t to) {
    ArcWord w;
    w.base = S;
    w.start = start;
    w.end = end;
    w.crossings.assign(t.crossings.begin() + from, t.crossings.begin() + to);
    w = words::reduce(w);
    if (w.trivial_loop()) return;
    pieces.push_back(std::move(w));
  };
  // Leading piece: up to the first crossing, dragged along the arrival side.
  add_piece(t.start, head_sector(t.crossings[hits[0]]), 0, hits[0]);
  for (size_t k = 0; k + 1 < hits.size(); ++k)
    add_piece(head_sector(S->glue(t.crossings[hits[k]])),
              head_sector(t.crossings[hits[k + 1]]), hits[k] + 1, hits[k + 1]);
  add_piece(head_sector(S->glue(t.crossings[hits.back()])), t.end, hits.back() + 1,
            t.crossings.size());
  // Deduplicate isotopic outputs, keeping first occurrences.
  std::vector<ArcWord> out;
  for (auto& w : pieces) {
    bool dup = false;
    for (const auto& prev : out)
      if (words::normalized(prev) == words::normalized(w)) dup = true;
    if (!dup) out.push_back(std::move(w));
  }
  return out;
}

// General combing: conjugate through a stratum walk that realizes the arc,
// comb there, and carry the components back.
inline std::vector<ArcWord> comb(const OrientedArc& a, const ArcWord& t) {
  if (!(*a.word.base == *t.base)) throw BaseMismatch("comb arguments over different bases");
  ArcWord ra = words::reduce(a.word);
  if (intersection_number(ra, t) == 0) return {words::reduce(t)};
  MultiArc single;
  single.base = t.base;
  single.components = {ra};
  single.orientations = {true};
  auto sp = path_to_stratum(t.base, single);
  ArcWord moved = words::reduce(t);
  for (const auto& ctx : sp.trail) moved = ctx.forward(moved);
  const ArcWord& afin = sp.endpoint_arcs.components[0];
  auto [span, fwd] = words::empty_word_span(afin);
  std::int32_t id = sp.endpoint->arc_of_side(span);
  if (id < 0) throw NotRealizable("comb along a boundary-parallel arc");
  // Head of a+: word end when forward.  afin runs in ra's direction; its
  // span side is lo or hi of the arc.
  Side lo = sp.endpoint->arc_lo({id});
  bool span_is_lo = (span == lo);
  bool head_at_span_end = a.forward ? fwd : !fwd;
  bool head_at_lo_end = span_is_lo ? head_at_span_end : !head_at_span_end;
  auto combed = comb_along_base_arc(sp.endpoint, {id}, head_at_lo_end, moved);
  for (auto& w : combed)
    for (auto it = sp.trail.rbegin(); it != sp.trail.rend(); ++it) w = it->backward(w);
  return combed;
}

// The image of a flip-graph vertex under the stratum retraction along an
// oriented arc: all of the vertex's arcs combed, plus the arc itself.
struct ProjectedVertex {
  std::vector<ArcWord> arcs;  // classes over the ambient base, sorted
  Triangulation map;          // materialized; arc ids follow the sorted order
  MarkedTriangulation vertex; // the same data as a marked vertex
  VertexKey key;
};

inline ProjectedVertex project_arc(const MarkedTriangulation& m, const OrientedArc& a) {
  const auto& B = m.base();
  words::require_same_base(a.word, *B);
  ArcWord ra = words::reduce(a.word);
  MultiArc single;
  single.base = B;
  single.components = {ra};
  single.orientations = {true};
  auto sp = path_to_stratum(B, single);

  const ArcWord& afin = sp.endpoint_arcs.components[0];
  auto [span, fwd] = words::empty_word_span(afin);
  std::int32_t aid = sp.endpoint->arc_of_side(span);
  if (aid < 0) throw NotRealizable("projection along a boundary-parallel arc");
  Side lo = sp.endpoint->arc_lo({aid});
  bool head_at_span_end = a.forward ? fwd : !fwd;
  bool head_at_lo_end = (span == lo) ? head_at_span_end : !head_at_span_end;

  // Push every arc of m through the comb, over the stratum base.
  std::vector<ArcWord> components;
  for (std::int32_t t = 0; t < m.map().arcs(); ++t) {
    ArcWord w = m.word({t});
    for (const auto& ctx : sp.trail) w = ctx.forward(w);
    for (auto& piece : comb_along_base_arc(sp.endpoint, {aid}, head_at_lo_end, w))
      components.push_back(std::move(piece));
  }
  components.push_back(words::side_word(sp.endpoint, lo));
  // Normalize, drop boundary-parallel pieces, deduplicate, sort.
  std::vector<ArcWord> classes;
  for (auto& w : components) {
    ArcWord n = words::normalized(w);
    if (n.crossings.empty()) {
      auto [s, f] = words::empty_word_span(n);
      if (sp.endpoint->is_boundary_side(s)) continue;
    }
    bool dup = false;
    for (const auto& prev : classes)
      if (prev == n) dup = true;
    if (!dup) classes.push_back(std::move(n));
  }
  std::sort(classes.begin(), classes.end(), [](const ArcWord& x, const ArcWord& y) {
    return words::encode(x) < words::encode(y);
  });
  if (static_cast<int>(classes.size()) != sp.endpoint->arcs())
    throw InternalInvariantViolation("projection did not produce a full arc system");

  // Materialize the map by walking into the stratum of the projected system.
  MultiArc M;
  M.base = sp.endpoint;
  M.components = classes;
  M.orientations.assign(classes.size(), true);
  auto sp2 = path_to_stratum(sp.endpoint, M);
  Triangulation P = *sp2.endpoint;
  // Arc ids in sorted-class order.
  std::vector<std::int32_t> perm(P.arcs(), -1);
  std::vector<Side> follows(P.arcs(), kNoSide);
  for (size_t j = 0; j < classes.size(); ++j) {
    const ArcWord& fin = sp2.endpoint_arcs.components[j];
    auto [s, f] = words::empty_word_span(fin);
    std::int32_t old = P.arc_of_side(s);
    FLIPFORGE_CHECK(old >= 0 && perm[old] == -1);
    perm[old] = static_cast<std::int32_t>(j);
    follows[j] = f ? s : P.glue(s);
  }
  Triangulation relabeled = P.relabeled_arcs(perm);

  ProjectedVertex out;
  out.map = relabeled;
  // Carry the classes back to the ambient base, in the same order.
  out.arcs = std::move(classes);
  for (auto& w : out.arcs)
    for (auto it = sp.trail.rbegin(); it != sp.trail.rend(); ++it) w = it->backward(w);
  out.vertex = MarkedTriangulation::assemble(out.map, B, out.arcs, follows);
  {
    std::vector<std::vector<std::uint32_t>> encs;
    for (const auto& w : out.arcs) encs.push_back(words::encode(words::normalized(w)));
    std::sort(encs.begin(), encs.end());
    for (auto& e : encs) out.key.insert(out.key.end(), e.begin(), e.end());
  }
  return out;
}

// Composition over an enumerated, oriented multiarc, strictly left to right.
inline ProjectedVertex project_multiarc(const MarkedTriangulation& m, const MultiArc& A) {
  if (A.components.empty()) throw NotRealizable("projection along an empty multiarc");
  MarkedTriangulation cur = m;
  std::optional<ProjectedVertex> last;
  for (size_t i = 0; i < A.components.size(); ++i) {
    OrientedArc a{A.components[i], A.orientations.empty() ? true : A.orientations[i]};
    last = project_arc(cur, a);
    cur = last->vertex;
  }
  return std::move(*last);
}

// Exhaustive strong-convexity check: every geodesic between stratum members
// stays in the stratum.
struct ConvexityReport {
  std::size_t pairs_checked = 0;
  std::size_t geodesics_total = 0;
  std::size_t violations = 0;
};

inline ConvexityReport check_strong_convexity(
    const MultiArc& A, const std::vector<std::pair<MarkedTriangulation, MarkedTriangulation>>& pairs,
    const SearchBudget& budget = {}) {
  ConvexityReport r;
  for (const auto& [S, T] : pairs) {
    auto dag = all_geodesics(S, T, budget);
    ++r.pairs_checked;
    r.geodesics_total += dag.geodesic_count;
    for (const auto& v : dag.vertices)
      for (const auto& w : A.components)
        if (v.find_arc(w) < 0) ++r.violations;
  }
  return r;
}

// Projection distance inequalities against exact search distances.
struct ProjectionDistanceReport {
  std::int64_t d_to_stratum = 0;
  std::int64_t d_to_projection = 0;
  bool sandwich_holds = false;  // d(T,F_A) <= d(T,pi(T)) <= 2 d(T,F_A)
};

inline ProjectionDistanceReport projection_distance_checks(const MarkedTriangulation& m,
                                                           const MultiArc& A,
                                                           const SearchBudget& budget = {}) {
  ProjectionDistanceReport r;
  r.d_to_stratum = distance_to_stratum(m, A, budget);
  auto proj = project_multiarc(m, A);
  r.d_to_projection = distance_to_key(m, proj.key, budget);
  r.sandwich_holds =
      r.d_to_stratum <= r.d_to_projection && r.d_to_projection <= 2 * r.d_to_stratum;
  return r;
}

}  // namespace flipforge
