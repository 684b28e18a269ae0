#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flipforge/surface.hpp"

namespace flipforge {

enum class LabelMode { labeled, unlabeled };

// Canonical byte string identifying a triangulation up to orientation-
// preserving homeomorphism: the minimum over all start darts of a
// deterministic breadth-first traversal encoding.  In labeled mode marked
// point ids are emitted verbatim (homeomorphisms must fix them pointwise);
// in unlabeled mode vertices are named by discovery order plus an
// interior/boundary class bit.
struct CanonicalCode {
  std::vector<std::uint32_t> tokens;
  LabelMode mode = LabelMode::labeled;

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;

  std::string hex() const {
    static const char* d = "0123456789abcdef";
    std::string out;
    out.reserve(tokens.size() * 8);
    for (std::uint32_t t : tokens)
      for (int k = 7; k >= 0; --k) out.push_back(d[(t >> (4 * k)) & 0xf]);
    return out;
  }
};

struct CanonicalCodeHash {
  size_t operator()(const CanonicalCode& c) const {
    size_t h = 1469598103934665603ull ^ static_cast<size_t>(c.mode);
    for (std::uint32_t t : c.tokens) {
      h ^= t;
      h *= 1099511628211ull;
    }
    return h;
  }
};

namespace detail {

inline std::vector<std::uint32_t> traversal_code(const Triangulation& T, Side start,
                                                 LabelMode mode) {
  const int n = T.triangles();
  std::vector<int> index(n, -1), rot(n, 0), order;
  order.reserve(n);
  index[side_tri(start)] = 0;
  rot[side_tri(start)] = side_idx(start);
  order.push_back(side_tri(start));
  std::vector<std::uint32_t> out;
  out.reserve(6 * n);
  std::vector<int> vertex_order;  // unlabeled mode: discovery index per vertex
  if (mode == LabelMode::unlabeled) vertex_order.assign(T.vertex_count(), -1);
  int next_vertex = 0;

  for (size_t qi = 0; qi < order.size(); ++qi) {
    int t = order[qi];
    for (int k = 0; k < 3; ++k) {
      Side e = side_enc(t, (rot[t] + k) % 3);
      Side g = T.glue(e);
      if (g == kNoSide) {
        out.push_back(0);
        continue;
      }
      int t2 = side_tri(g);
      if (index[t2] == -1) {
        index[t2] = static_cast<int>(order.size());
        rot[t2] = side_idx(g);
        order.push_back(t2);
      }
      int local = (side_idx(g) - rot[t2] + 3) % 3;
      out.push_back(1 + 3 * static_cast<std::uint32_t>(index[t2]) + local);
    }
  }
  for (size_t qi = 0; qi < order.size(); ++qi) {
    int t = order[qi];
    for (int k = 0; k < 3; ++k) {
      int v = T.corner_vertex(side_enc(t, (rot[t] + k) % 3));
      if (mode == LabelMode::labeled) {
        out.push_back(static_cast<std::uint32_t>(v));
      } else {
        if (vertex_order[v] == -1) vertex_order[v] = next_vertex++;
        out.push_back(2 * static_cast<std::uint32_t>(vertex_order[v]) +
                      (T.vertex_on_boundary(v) ? 1u : 0u));
      }
    }
  }
  FLIPFORGE_CHECK(static_cast<int>(order.size()) == n);
  return out;
}

inline Triangulation mirrored(const Triangulation& T) {
  int n = T.triangles();
  std::vector<Side> glue(3 * n, kNoSide);
  std::vector<int> cv(3 * n, 0);
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < 3; ++s) {
      Side e = side_enc(t, 2 - s);
      Side g = T.glue(e);
      glue[side_enc(t, s)] = (g == kNoSide) ? kNoSide : side_enc(side_tri(g), 2 - side_idx(g));
    }
    for (int c = 0; c < 3; ++c) cv[side_enc(t, c)] = T.corner_vertex(side_enc(t, (3 - c) % 3));
  }
  return Triangulation::from_tables(n, std::move(glue), std::move(cv), T.signature(),
                                    T.signature().labeled);
}

}  // namespace detail

// include_mirror adds orientation-reversing homeomorphisms to the quotient;
// off by default, matching the mapping class group convention.
inline CanonicalCode canonical_code(const Triangulation& T, LabelMode mode,
                                    bool include_mirror = false) {
  CanonicalCode best;
  best.mode = mode;
  bool have = false;
  auto consider = [&](const Triangulation& M) {
    for (Side e = 0; e < M.sides(); ++e) {
      auto code = detail::traversal_code(M, e, mode);
      if (!have || code < best.tokens) {
        best.tokens = std::move(code);
        have = true;
      }
    }
  };
  consider(T);
  if (include_mirror) consider(detail::mirrored(T));
  return best;
}

inline CanonicalCode canonical_code(const Triangulation& T) {
  return canonical_code(T, T.signature().labeled ? LabelMode::labeled : LabelMode::unlabeled);
}

// A concrete orientation-preserving combinatorial isomorphism between two
// code-equal triangulations, as a side map from A to B.  Uses the first
// start dart realizing the canonical code on each side.
inline std::vector<Side> code_isomorphism(const Triangulation& A, const Triangulation& B,
                                          LabelMode mode) {
  auto ca = canonical_code(A, mode);
  auto cb = canonical_code(B, mode);
  if (!(ca == cb)) throw InternalInvariantViolation("code_isomorphism on unequal codes");
  auto min_dart = [&](const Triangulation& T) {
    for (Side e = 0; e < T.sides(); ++e)
      if (detail::traversal_code(T, e, mode) == ca.tokens) return e;
    throw InternalInvariantViolation("no dart realizes the canonical code");
  };
  Side da = min_dart(A), db = min_dart(B);
  auto order_and_rot = [&](const Triangulation& T, Side start) {
    std::vector<int> index(T.triangles(), -1), rot(T.triangles(), 0), order;
    index[side_tri(start)] = 0;
    rot[side_tri(start)] = side_idx(start);
    order.push_back(side_tri(start));
    for (size_t qi = 0; qi < order.size(); ++qi) {
      int t = order[qi];
      for (int k = 0; k < 3; ++k) {
        Side g = T.glue(side_enc(t, (rot[t] + k) % 3));
        if (g == kNoSide) continue;
        int t2 = side_tri(g);
        if (index[t2] == -1) {
          index[t2] = static_cast<int>(order.size());
          rot[t2] = side_idx(g);
          order.push_back(t2);
        }
      }
    }
    return std::pair{index, rot};
  };
  auto [ia, ra] = order_and_rot(A, da);
  auto [ib, rb] = order_and_rot(B, db);
  std::vector<int> b_of_index(B.triangles(), -1);
  for (int t = 0; t < B.triangles(); ++t) b_of_index[ib[t]] = t;
  std::vector<Side> map(A.sides(), kNoSide);
  for (int t = 0; t < A.triangles(); ++t) {
    int tb = b_of_index[ia[t]];
    for (int s = 0; s < 3; ++s)
      map[side_enc(t, s)] = side_enc(tb, (s - ra[t] + 3 + rb[tb]) % 3);
  }
  return map;
}

}  // namespace flipforge
