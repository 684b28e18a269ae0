#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "flipforge/census.hpp"
#include "flipforge/marking.hpp"
#include "flipforge/paths.hpp"
#include "flipforge/surface.hpp"

namespace flipforge {
namespace io {

using nlohmann::json;

inline constexpr const char* kFormatTag = "flipforge/1";

namespace detail {

inline const json& at(const json& j, const char* key, const std::string& ptr) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError("missing field '" + std::string(key) + "'", ptr);
  return j[key];
}

inline int as_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer", ptr);
  return j.get<int>();
}

inline bool as_bool(const json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw SchemaError("expected a boolean", ptr);
  return j.get<bool>();
}

inline void expect_format(const json& j, const std::string& ptr) {
  if (j.contains("format") && j["format"] != kFormatTag)
    throw SchemaError("unsupported format tag", ptr + "/format");
}

}  // namespace detail

inline json signature_to_json(const SurfaceSig& sig) {
  return json{{"g", sig.genus},
              {"b", sig.boundaries},
              {"s", sig.punctures},
              {"p", sig.boundary_points},
              {"labeled", sig.labeled}};
}

inline SurfaceSig signature_from_json(const json& j, const std::string& ptr = "/signature") {
  SurfaceSig sig;
  sig.genus = detail::as_int(detail::at(j, "g", ptr), ptr + "/g");
  sig.boundaries = detail::as_int(detail::at(j, "b", ptr), ptr + "/b");
  sig.punctures = detail::as_int(detail::at(j, "s", ptr), ptr + "/s");
  sig.boundary_points = detail::as_int(detail::at(j, "p", ptr), ptr + "/p");
  sig.labeled = j.contains("labeled") ? detail::as_bool(j["labeled"], ptr + "/labeled") : true;
  return sig;
}

inline json triangulation_to_json(const Triangulation& T) {
  json gluings = json::array();
  for (std::int32_t a = 0; a < T.arcs(); ++a) {
    auto [lo, hi] = T.arc_sides({a});
    gluings.push_back(json::array({json::array({side_tri(lo), side_idx(lo)}),
                                   json::array({side_tri(hi), side_idx(hi)})}));
  }
  json corners = json::array();
  for (int t = 0; t < T.triangles(); ++t)
    corners.push_back(json::array({T.corner_vertex(side_enc(t, 0)),
                                   T.corner_vertex(side_enc(t, 1)),
                                   T.corner_vertex(side_enc(t, 2))}));
  return json{{"format", kFormatTag},
              {"signature", signature_to_json(T.signature())},
              {"triangles", T.triangles()},
              {"gluings", gluings},
              {"corner_vertices", corners}};
}

inline Triangulation triangulation_from_json(const json& j, const std::string& ptr = "") {
  detail::expect_format(j, ptr);
  TriangulationSpec spec;
  spec.signature = signature_from_json(detail::at(j, "signature", ptr), ptr + "/signature");
  spec.triangles = detail::as_int(detail::at(j, "triangles", ptr), ptr + "/triangles");
  const json& gl = detail::at(j, "gluings", ptr);
  if (!gl.is_array()) throw SchemaError("expected an array", ptr + "/gluings");
  for (size_t k = 0; k < gl.size(); ++k) {
    std::string gp = ptr + "/gluings/" + std::to_string(k);
    const json& pair = gl[k];
    if (!pair.is_array() || pair.size() != 2) throw SchemaError("expected a side pair", gp);
    auto side = [&](const json& s, const std::string& sp) -> std::pair<int, int> {
      if (!s.is_array() || s.size() != 2) throw SchemaError("expected [triangle, side]", sp);
      return {detail::as_int(s[0], sp + "/0"), detail::as_int(s[1], sp + "/1")};
    };
    spec.gluings.push_back({side(pair[0], gp + "/0"), side(pair[1], gp + "/1")});
  }
  const json& cv = detail::at(j, "corner_vertices", ptr);
  if (!cv.is_array()) throw SchemaError("expected an array", ptr + "/corner_vertices");
  for (size_t t = 0; t < cv.size(); ++t) {
    std::string cp = ptr + "/corner_vertices/" + std::to_string(t);
    if (!cv[t].is_array() || cv[t].size() != 3) throw SchemaError("expected three ids", cp);
    spec.corner_vertices.push_back({detail::as_int(cv[t][0], cp + "/0"),
                                    detail::as_int(cv[t][1], cp + "/1"),
                                    detail::as_int(cv[t][2], cp + "/2")});
  }
  try {
    return Triangulation::build(spec);
  } catch (const InvalidGluing& e) {
    throw SchemaError(e.what(), ptr + "/gluings");
  }
}

inline json word_to_json(const ArcWord& w) {
  const Triangulation& T = *w.base;
  json crossings = json::array();
  for (Side e : w.crossings) {
    std::int32_t a = T.arc_of_side(e);
    bool hi = (T.arc_hi({a}) == e);
    crossings.push_back(json::array({a, hi ? 1 : 0}));
  }
  return json{{"start", json::array({w.start_vertex(), json::array({w.start / 3, w.start % 3})})},
              {"crossings", crossings},
              {"end", json::array({w.end_vertex(), json::array({w.end / 3, w.end % 3})})}};
}

inline ArcWord word_from_json(const json& j, std::shared_ptr<const Triangulation> base,
                              const std::string& ptr = "") {
  ArcWord w;
  w.base = std::move(base);
  auto anchor = [&](const json& a, const std::string& ap) -> Corner {
    if (!a.is_array() || a.size() != 2 || !a[1].is_array() || a[1].size() != 2)
      throw SchemaError("expected [vertex, [triangle, corner]]", ap);
    int t = detail::as_int(a[1][0], ap + "/1/0"), c = detail::as_int(a[1][1], ap + "/1/1");
    if (t < 0 || t >= w.base->triangles() || c < 0 || c > 2)
      throw SchemaError("anchor out of range", ap);
    Corner k = side_enc(t, c);
    if (w.base->corner_vertex(k) != detail::as_int(a[0], ap + "/0"))
      throw SchemaError("anchor vertex disagrees with the corner", ap);
    return k;
  };
  w.start = anchor(detail::at(j, "start", ptr), ptr + "/start");
  w.end = anchor(detail::at(j, "end", ptr), ptr + "/end");
  const json& xs = detail::at(j, "crossings", ptr);
  if (!xs.is_array()) throw SchemaError("expected an array", ptr + "/crossings");
  for (size_t k = 0; k < xs.size(); ++k) {
    std::string cp = ptr + "/crossings/" + std::to_string(k);
    if (!xs[k].is_array() || xs[k].size() != 2) throw SchemaError("expected [arc, flag]", cp);
    int a = detail::as_int(xs[k][0], cp + "/0");
    int flag = detail::as_int(xs[k][1], cp + "/1");
    if (a < 0 || a >= w.base->arcs()) throw SchemaError("arc id out of range", cp + "/0");
    w.crossings.push_back(flag ? w.base->arc_hi({a}) : w.base->arc_lo({a}));
  }
  try {
    words::validate(w);
  } catch (const DisconnectedWord& e) {
    throw SchemaError(e.what(), ptr + "/crossings");
  }
  return w;
}

inline json multiarc_to_json(const MultiArc& A) {
  json comps = json::array();
  for (const auto& w : A.components) comps.push_back(word_to_json(w));
  json orients = json::array();
  for (bool o : A.orientations) orients.push_back(o);
  return json{{"components", comps}, {"orientations", orients}};
}

inline MultiArc multiarc_from_json(const json& j, std::shared_ptr<const Triangulation> base,
                                   const std::string& ptr = "") {
  const json& comps = detail::at(j, "components", ptr);
  if (!comps.is_array()) throw SchemaError("expected an array", ptr + "/components");
  std::vector<ArcWord> words_;
  for (size_t k = 0; k < comps.size(); ++k)
    words_.push_back(word_from_json(comps[k], base, ptr + "/components/" + std::to_string(k)));
  std::vector<bool> orient;
  if (j.contains("orientations")) {
    for (size_t k = 0; k < j["orientations"].size(); ++k)
      orient.push_back(
          detail::as_bool(j["orientations"][k], ptr + "/orientations/" + std::to_string(k)));
  }
  return make_multiarc(std::move(base), std::move(words_), std::move(orient));
}

inline json flip_path_to_json(const FlipPath& p) {
  return json{{"format", kFormatTag},
              {"start", triangulation_to_json(p.start)},
              {"steps", p.steps}};
}

inline FlipPath flip_path_from_json(const json& j, const std::string& ptr = "") {
  detail::expect_format(j, ptr);
  FlipPath p;
  p.start = triangulation_from_json(detail::at(j, "start", ptr), ptr + "/start");
  const json& steps = detail::at(j, "steps", ptr);
  if (!steps.is_array()) throw SchemaError("expected an array", ptr + "/steps");
  for (size_t k = 0; k < steps.size(); ++k)
    p.steps.push_back(detail::as_int(steps[k], ptr + "/steps/" + std::to_string(k)));
  // Validate by replay.
  auto cur = p.start;
  for (size_t k = 0; k < p.steps.size(); ++k) {
    if (p.steps[k] < 0 || p.steps[k] >= cur.arcs() || !cur.is_flippable({p.steps[k]}))
      throw SchemaError("step is not flippable", ptr + "/steps/" + std::to_string(k));
    cur = cur.flip({p.steps[k]});
  }
  return p;
}

inline json census_report_to_json(const CensusReport& r) {
  return json{{"format", kFormatTag},
              {"signature", signature_to_json(r.signature)},
              {"mode", r.mode == LabelMode::labeled ? "labeled" : "unlabeled"},
              {"vertices", r.vertices},
              {"edges", r.edges},
              {"diameter", r.diameter},
              {"diameter_certified", r.diameter_certified},
              {"eccentricity_histogram", r.eccentricity_histogram}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file", "/" + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), "/" + path);
  }
  return j;
}

inline void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot open file for writing", "/" + path);
  out << dump(j);
}

}  // namespace io
}  // namespace flipforge
