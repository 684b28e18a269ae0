#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "flipforge/marking.hpp"

namespace flipforge {

struct FlipPath {
  Triangulation start;
  std::vector<std::int32_t> steps;

  size_t length() const { return steps.size(); }
};

// Replays a flip path, returning every intermediate triangulation
// (length+1 entries, starting with path.start).
inline std::vector<Triangulation> replay(const FlipPath& path) {
  std::vector<Triangulation> out;
  out.reserve(path.steps.size() + 1);
  out.push_back(path.start);
  for (std::int32_t a : path.steps) out.push_back(out.back().flip({a}));
  return out;
}

enum class FlipClass { Convenient, Neutral, Increasing };

// Flip classification against a multiarc: convenient flips strictly drop
// i(T, A), neutral flips preserve it.
inline FlipClass classify_flip(const std::shared_ptr<const Triangulation>& T, const MultiArc& A,
                               ArcRef h) {
  if (!T->is_flippable(h)) throw NotFlippable("classify_flip on an unflippable arc");
  auto before = intersection_with_triangulation(*T, A);
  marking::FlipContext ctx(T, h);
  auto after = intersection_with_triangulation(*ctx.after(), ctx.forward(A));
  // Only the flipped arc's count may change; the new diagonal inherits h's id.
  std::int64_t ih = before.per_arc[h.id], ih2 = after.per_arc[h.id];
  if (ih2 < ih) return FlipClass::Convenient;
  if (ih2 == ih) return FlipClass::Neutral;
  return FlipClass::Increasing;
}

// Finds an arc attaining max_t i(t, A) whose flip is convenient.  Walks from
// the lowest maximal arc across quadrilateral sides on neutral flips; the
// walk is capped at kappa steps, which the termination argument says is
// never reached.
inline ArcRef select_convenient(const std::shared_ptr<const Triangulation>& T,
                                const MultiArc& A) {
  auto counts = intersection_with_triangulation(*T, A);
  if (counts.total <= 0)
    throw PreconditionUnmet("select_convenient requires i(T, A) > 0");
  std::int64_t best = counts.max_per_arc();
  std::int32_t m = -1;
  for (std::int32_t a = 0; a < T->arcs(); ++a)
    if (counts.per_arc[a] == best) {
      m = a;
      break;
    }
  FLIPFORGE_CHECK(m >= 0 && T->is_flippable({m}));

  std::set<std::int32_t> visited;
  for (int step = 0; step <= T->arcs(); ++step) {
    visited.insert(m);
    FlipClass cls = classify_flip(T, A, {m});
    if (cls == FlipClass::Convenient) return {m};
    if (cls == FlipClass::Increasing)
      throw InternalInvariantViolation("maximal arc classified as increasing");
    // Neutral: move to a quadrilateral side that also attains the maximum.
    auto [E1, E2] = T->arc_sides({m});
    int t1 = side_tri(E1), e1 = side_idx(E1);
    int t2 = side_tri(E2), e2 = side_idx(E2);
    std::set<std::int32_t> cand;
    for (Side s : {side_enc(t1, (e1 + 1) % 3), side_enc(t1, (e1 + 2) % 3),
                   side_enc(t2, (e2 + 1) % 3), side_enc(t2, (e2 + 2) % 3)}) {
      std::int32_t a = T->arc_of_side(s);
      if (a >= 0 && a != m && counts.per_arc[a] == best && T->is_flippable({a}))
        cand.insert(a);
    }
    std::int32_t next = -1;
    for (std::int32_t a : cand)
      if (!visited.count(a)) {
        next = a;
        break;
      }
    if (next == -1)
      throw InternalInvariantViolation("neutral walk exhausted its candidates");
    m = next;
  }
  throw InternalInvariantViolation("neutral walk exceeded the kappa-step cap");
}

// Result of walking from a triangulation into the stratum of a multiarc.
struct StratumPath {
  FlipPath path;
  std::shared_ptr<const Triangulation> endpoint;
  MultiArc endpoint_arcs;                    // A rewritten over the endpoint
  std::vector<marking::FlipContext> trail;   // per-step transport contexts
};

// The convenient-flip walk: flips a maximal convenient arc until i(T,A)=0.
// The path length is at most i(T, A); per step the intersection strictly
// decreases and the max across arcs never increases.
inline StratumPath path_to_stratum(std::shared_ptr<const Triangulation> T, MultiArc A) {
  for (auto& w : A.components) {
    words::require_same_base(w, *T);
    words::validate(w);
    if (w.trivial_loop()) throw NotRealizable("trivial component");
  }
  StratumPath out;
  out.path.start = *T;
  auto cur = std::move(T);
  auto counts = intersection_with_triangulation(*cur, A);
  std::int64_t budget = counts.total;
  std::int64_t max_before = counts.max_per_arc();
  while (counts.total > 0) {
    ArcRef h = select_convenient(cur, A);
    marking::FlipContext ctx(cur, h);
    A = ctx.forward(A);
    cur = ctx.after();
    out.path.steps.push_back(h.id);
    out.trail.push_back(std::move(ctx));
    auto next = intersection_with_triangulation(*cur, A);
    FLIPFORGE_CHECK(next.total < counts.total);
    FLIPFORGE_CHECK(next.max_per_arc() <= max_before);
    max_before = next.max_per_arc();
    counts = std::move(next);
    if (static_cast<std::int64_t>(out.path.steps.size()) > budget)
      throw InternalInvariantViolation("stratum path exceeded the intersection budget");
  }
  out.endpoint = cur;
  out.endpoint_arcs = std::move(A);
  return out;
}

// Completes a multiarc to a triangulation containing it (the stratum-path
// endpoint).  Deterministic: the walk's tie-breaks are fixed.
inline Triangulation complete_to_triangulation(const MultiArc& A) {
  if (!A.base) throw NotRealizable("multiarc has no base");
  auto sp = path_to_stratum(A.base, A);
  return *sp.endpoint;
}

// Geometric intersection number of two arc classes over a common base:
// walk a's base into a triangulation containing a, carry b along, and count
// b's crossings with the arc a became.
inline std::int64_t intersection_number(const ArcWord& a, const ArcWord& b) {
  if (!(*a.base == *b.base)) throw BaseMismatch("intersection of words over different bases");
  ArcWord ra = words::reduce(a), rb = words::reduce(b);
  if (words::normalized(ra) == words::normalized(rb)) return 0;
  MultiArc single;
  single.base = a.base;
  single.components = {ra};
  single.orientations = {true};
  auto sp = path_to_stratum(a.base, single);
  for (const auto& ctx : sp.trail) rb = ctx.forward(rb);
  const ArcWord& a_final = sp.endpoint_arcs.components[0];
  FLIPFORGE_CHECK(a_final.crossings.empty());
  auto [span, fwd] = words::empty_word_span(a_final);
  std::int32_t id = sp.endpoint->arc_of_side(span);
  if (id < 0) return 0;  // a is boundary-parallel; nothing can cross it
  return words::crossings_with_arc(rb, ArcRef{id});
}

inline std::int64_t intersection_number(const MultiArc& A, const MultiArc& B) {
  std::int64_t total = 0;
  for (const auto& a : A.components)
    for (const auto& b : B.components) total += intersection_number(a, b);
  return total;
}

// Public constructor for multiarcs: validates words and pairwise
// disjointness, rejecting rather than repairing.
inline MultiArc make_multiarc(std::shared_ptr<const Triangulation> base,
                              std::vector<ArcWord> components,
                              std::vector<bool> orientations = {}) {
  MultiArc A;
  A.base = std::move(base);
  for (auto& w : components) {
    words::require_same_base(w, *A.base);
    words::validate(w);
    w = words::reduce(w);
    if (w.trivial_loop()) throw NotRealizable("trivial component in multiarc");
  }
  for (size_t i = 0; i < components.size(); ++i)
    for (size_t j = i + 1; j < components.size(); ++j) {
      if (words::normalized(components[i]) == words::normalized(components[j]))
        throw NotRealizable("duplicate components in multiarc");
      if (intersection_number(components[i], components[j]) != 0)
        throw NotRealizable("multiarc components intersect");
    }
  A.components = std::move(components);
  A.orientations = orientations.empty() ? std::vector<bool>(A.components.size(), true)
                                        : std::move(orientations);
  if (A.orientations.size() != A.components.size())
    throw NotRealizable("orientation count mismatch");
  return A;
}

// Largest e >= 0 with kappa^e * mult <= value; -1 when even e=0 fails.
inline int floor_log_ratio(std::int64_t value, std::int64_t mult, std::int64_t kappa) {
  FLIPFORGE_CHECK(kappa >= 2 && mult >= 1);
  if (value < mult) return -1;
  int e = 0;
  // 128-bit intermediate; desk-scale values stay far below the limit.
  __int128 cur = mult;
  while (cur * kappa <= value) {
    cur *= kappa;
    ++e;
  }
  return e;
}

// Lower bound on d(T, F_A) in terms of i(T, A):
// floor((log i(T,A) - log(2|A|-1)) / log kappa) - 2.
inline std::int64_t lower_bound_distance(const Triangulation& T, const MultiArc& A) {
  auto counts = intersection_with_triangulation(T, A);
  std::int64_t m = static_cast<std::int64_t>(A.size());
  if (counts.max_per_arc() < 2 * m)
    throw PreconditionUnmet("max_t i(t,A) < 2|A|");
  if (T.arcs() < 2) throw PreconditionUnmet("bound needs kappa >= 2");
  int e = floor_log_ratio(counts.total, 2 * m - 1, T.arcs());
  return static_cast<std::int64_t>(e) - 2;
}

// Lower bound on d(T, S): floor(log i(T,S) / log kappa) - 4, with S given
// by its arcs written over T.
inline std::int64_t pairwise_lower_bound(const Triangulation& T, const MultiArc& S_over_T) {
  auto counts = intersection_with_triangulation(T, S_over_T);
  if (T.arcs() < 2) return -4;  // degenerate flip graphs are within distance 0 or 1 anyway
  if (counts.total <= 0) return -4;
  return static_cast<std::int64_t>(floor_log_ratio(counts.total, 1, T.arcs())) - 4;
}

// Checks i(T', A) >= 2 max_t i(t,A) - 2|A| over every flip neighbor T'.
inline bool step_drop_bound_check(const std::shared_ptr<const Triangulation>& T,
                                  const MultiArc& A) {
  auto counts = intersection_with_triangulation(*T, A);
  std::int64_t rhs = 2 * counts.max_per_arc() - 2 * static_cast<std::int64_t>(A.size());
  for (std::int32_t h = 0; h < T->arcs(); ++h) {
    if (!T->is_flippable({h})) continue;
    marking::FlipContext ctx(T, {h});
    auto after = intersection_with_triangulation(*ctx.after(), ctx.forward(A));
    if (after.total < rhs) return false;
  }
  return true;
}

}  // namespace flipforge
