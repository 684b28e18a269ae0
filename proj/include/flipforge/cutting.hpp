#pragma once

#include <vector>

#include "flipforge/builders.hpp"
#include "flipforge/marking.hpp"

namespace flipforge {

// Result of cutting a triangulated surface along a set of its arcs: the
// connected pieces (each a valid triangulation, cut arcs doubled into
// boundary sides) plus the triangle correspondence.
struct CutResult {
  std::vector<Triangulation> pieces;
  std::vector<std::vector<int>> piece_tri_to_orig;    // per piece, local -> original
  std::vector<std::pair<int, int>> orig_tri_location; // original -> (piece, local)
  std::vector<std::vector<int>> piece_vertex_to_orig; // per piece, local vertex -> original

  Side to_original(int piece, Side local) const {
    return side_enc(piece_tri_to_orig[piece][side_tri(local)], side_idx(local));
  }
  Side to_piece_side(Side orig) const {  // piece index via orig_tri_location
    auto [p, local_tri] = orig_tri_location[side_tri(orig)];
    return side_enc(local_tri, side_idx(orig));
  }
  // Arc id correspondence: piece arc -> original arc id.
  std::int32_t to_original_arc(const Triangulation& orig, int piece, ArcRef a) const {
    Side lo = pieces[piece].arc_lo(a);
    return orig.arc_of_side(to_original(piece, lo));
  }
};

inline CutResult cut_along(const Triangulation& T, const std::vector<ArcRef>& arcs) {
  const int n = T.triangles();
  std::vector<Side> glue(3 * n);
  for (Side e = 0; e < 3 * n; ++e) glue[e] = T.glue(e);
  for (ArcRef a : arcs) {
    if (a.id < 0 || a.id >= T.arcs()) throw NotInStratum("cut arc id out of range");
    auto [lo, hi] = T.arc_sides(a);
    glue[lo] = kNoSide;
    glue[hi] = kNoSide;
  }
  CutResult out;
  out.orig_tri_location.assign(n, {-1, -1});
  std::vector<int> piece_of(n, -1);
  for (int t0 = 0; t0 < n; ++t0) {
    if (piece_of[t0] != -1) continue;
    int p = static_cast<int>(out.pieces.size());
    std::vector<int> local_to_orig;
    std::vector<int> queue{t0};
    piece_of[t0] = p;
    // Discovery order from the lowest original triangle index.
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int t = queue[qi];
      out.orig_tri_location[t] = {p, static_cast<int>(local_to_orig.size())};
      local_to_orig.push_back(t);
      for (int i = 0; i < 3; ++i) {
        Side g = glue[side_enc(t, i)];
        if (g != kNoSide && piece_of[side_tri(g)] == -1) {
          piece_of[side_tri(g)] = p;
          queue.push_back(side_tri(g));
        }
      }
    }
    int pn = static_cast<int>(local_to_orig.size());
    std::vector<Side> pglue(3 * pn, kNoSide);
    for (int lt = 0; lt < pn; ++lt)
      for (int i = 0; i < 3; ++i) {
        Side g = glue[side_enc(local_to_orig[lt], i)];
        if (g != kNoSide)
          pglue[side_enc(lt, i)] =
              side_enc(out.orig_tri_location[side_tri(g)].second, side_idx(g));
      }
    auto cv = builders::detail::vertices_from_fans(pn, pglue);
    // Record which original marked point each new vertex came from.
    std::vector<int> v2orig;
    for (int lt = 0; lt < pn; ++lt)
      for (int i = 0; i < 3; ++i) {
        int pv = cv[side_enc(lt, i)];
        if (pv >= static_cast<int>(v2orig.size())) v2orig.resize(pv + 1, -1);
        int ov = T.corner_vertex(side_enc(local_to_orig[lt], i));
        FLIPFORGE_CHECK(v2orig[pv] == -1 || v2orig[pv] == ov);
        v2orig[pv] = ov;
      }
    out.pieces.push_back(Triangulation::from_tables(pn, std::move(pglue), std::move(cv),
                                                    std::nullopt,
                                                    T.signature().labeled));
    out.piece_tri_to_orig.push_back(std::move(local_to_orig));
    out.piece_vertex_to_orig.push_back(std::move(v2orig));
  }
  return out;
}

// Multiarc flavor: components must be arcs of T (empty reduced words).
inline std::vector<ArcRef> arc_ids_of(const Triangulation& T, const MultiArc& A) {
  std::vector<ArcRef> ids;
  for (const auto& w : A.components) {
    words::require_same_base(w, T);
    ArcWord r = words::reduce(w);
    if (!r.crossings.empty())
      throw NotInStratum("multiarc component is not an arc of the triangulation");
    auto [span, fwd] = words::empty_word_span(r);
    std::int32_t id = T.arc_of_side(span);
    if (id < 0) throw NotInStratum("multiarc component is a boundary arc");
    ids.push_back({id});
  }
  return ids;
}

inline CutResult cut_along(const Triangulation& T, const MultiArc& A) {
  return cut_along(T, arc_ids_of(T, A));
}

}  // namespace flipforge
