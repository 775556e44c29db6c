#pragma once

// JSON and CSV serialisation of library values.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"

#include "btz/developing.hpp"
#include "btz/error.hpp"
#include "btz/extensions.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"
#include "btz/modular.hpp"
#include "btz/surfaces.hpp"

namespace btz::io {

using json = nlohmann::ordered_json;

// Infinite bounds are written as the strings "inf" / "-inf".
inline json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double read_real(const json& j, const char* key) {
  if (!j.contains(key)) throw error(errc::malformed, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_string()) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    throw error(errc::malformed, std::string("field '") + key + "' is not a number");
  }
  if (!v.is_number()) throw error(errc::malformed, std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

inline json to_json(const LorentzVector& v) { return json::array({v.t, v.x, v.y}); }

inline json to_json(const Mat3& m) {
  json out = json::array();
  for (const auto& row : m.m) out.push_back(json::array({row[0], row[1], row[2]}));
  return out;
}

inline Mat3 mat3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw error(errc::malformed, "matrix must be a 3x3 array");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3) throw error(errc::malformed, "matrix must be a 3x3 array");
    for (int k = 0; k < 3; ++k) {
      if (!j[i][k].is_number()) throw error(errc::malformed, "matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

inline json to_json(const ModelPoint& p) {
  return {{"alpha", p.angle.value()}, {"time", p.time}, {"r", p.r}, {"theta", p.theta}};
}

inline ModelPoint model_point_from_json(const json& j) {
  return ModelPoint::make(ConeAngle(read_real(j, "alpha")), read_real(j, "time"), read_real(j, "r"),
                          read_real(j, "theta"));
}

inline json to_json(const IsometryClass& c) {
  json out = {{"kind", to_string(c.kind)}, {"trace", c.trace}};
  if (c.kind == IsometryKind::elliptic) out["angle"] = c.angle;
  if (c.kind == IsometryKind::hyperbolic) out["lambda"] = c.lambda;
  return out;
}

inline json to_json(const BoundaryCurve& b) {
  return {{"a0", b.a0()}, {"cos", b.cos_coeffs()}, {"sin", b.sin_coeffs()}};
}

inline BoundaryCurve boundary_from_json(const json& j) {
  if (!j.is_object()) throw error(errc::malformed, "boundary must be an object");
  auto coeffs = [&](const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw error(errc::malformed, std::string("'") + key + "' must be an array");
    for (const auto& v : j.at(key)) {
      if (!v.is_number()) throw error(errc::malformed, "coefficients must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  return BoundaryCurve(j.contains("a0") ? read_real(j, "a0") : 0.0, coeffs("cos"), coeffs("sin"));
}

inline json to_json(const TubeChart& c) {
  return {{"alpha", c.angle().value()},
          {"radius", c.radius()},
          {"time_min", real(c.time_min())},
          {"time_max", real(c.time_max())},
          {"has_singular_line", c.has_singular_line()},
          {"holonomy", to_json(c.holonomy().generator.linear())},
          {"holonomy_class", to_json(c.holonomy().classify())}};
}

/// Chart from JSON; the holonomy defaults to the model-space generator.
inline TubeChart chart_from_json(const json& j) {
  const ConeAngle a(read_real(j, "alpha"));
  if (!j.contains("has_singular_line") || !j.at("has_singular_line").is_boolean())
    throw error(errc::malformed, "missing boolean 'has_singular_line'");
  const Holonomy h = j.contains("holonomy") ? Holonomy{LorentzIsometry(mat3_from_json(j.at("holonomy")))}
                                            : Holonomy::of(a);
  return TubeChart::make(a, read_real(j, "radius"), read_real(j, "time_min"), read_real(j, "time_max"),
                         j.at("has_singular_line").get<bool>(), h);
}

// Files --------------------------------------------------------------------------

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw error(errc::malformed, path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot write " + path.string());
  out << text;
  if (!out) throw error(errc::io, "write failed for " + path.string());
}

// Surface files: a JSON header; grid surfaces add a CSV of (r, theta, tau)
// rows next to it, r-major.

inline std::string grid_csv(const HeightGrid& g) {
  std::ostringstream os;
  os.precision(17);
  os << "r,theta,tau\n";
  for (std::size_t i = 0; i < g.nr; ++i)
    for (std::size_t k = 0; k < g.nth; ++k) os << g.r_at(i) << ',' << g.th_at(k) << ',' << g.at(i, k) << '\n';
  return os.str();
}

inline HeightGrid grid_from_csv(const std::string& text, double r0, double r1, std::size_t nr, std::size_t nth) {
  HeightGrid g{r0, r1, nr, nth, {}};
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (line.rfind("r,theta,tau", 0) != 0) throw error(errc::malformed, "grid CSV must start with 'r,theta,tau'");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw error(errc::malformed, "grid CSV rows need three columns");
    try {
      g.tau.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw error(errc::malformed, "grid CSV value is not a number: " + c);
    }
  }
  g.validate();
  return g;
}

inline json surface_header(const GraphSurface& s) {
  json h = {{"R", s.radius},
            {"r_min", s.r_min},
            {"punctured", s.punctured},
            {"alpha", s.ambient.value()},
            {"kind", s.field.is_grid() ? "grid" : "closed-form"},
            {"family", to_string(s.params.family)}};
  switch (s.params.family) {
    case SurfaceFamily::constant: h["c"] = s.params.c; break;
    case SurfaceFamily::surgery_complete:
    case SurfaceFamily::surgery_cap:
      h["M"] = s.params.M;
      h["boundary"] = to_json(s.params.boundary);
      break;
    default: break;
  }
  if (const auto& g = s.field.grid()) {
    h["nr"] = g->nr;
    h["nth"] = g->nth;
    h["grid_r0"] = g->r0;
    h["grid_r1"] = g->r1;
  }
  return h;
}

/// Writes `path` (JSON header) and, for grid surfaces, `path` + ".csv".
inline void write_surface(const std::filesystem::path& path, const GraphSurface& s) {
  json h = surface_header(s);
  if (const auto& g = s.field.grid()) {
    const std::filesystem::path csv = path.string() + ".csv";
    h["csv"] = csv.filename().string();
    write_text_file(csv, grid_csv(*g));
  }
  write_text_file(path, h.dump(2) + "\n");
}

inline GraphSurface read_surface(const std::filesystem::path& path) {
  const json h = read_json_file(path);
  const double R = read_real(h, "R");
  const double r_min = h.contains("r_min") ? read_real(h, "r_min") : 0.0;
  const bool punctured = h.value("punctured", true);
  const ConeAngle alpha(h.contains("alpha") ? read_real(h, "alpha") : 0.0);
  const std::string kind = h.value("kind", "closed-form");
  if (kind == "grid") {
    const std::size_t nr = h.at("nr").get<std::size_t>(), nth = h.at("nth").get<std::size_t>();
    const std::filesystem::path csv = path.parent_path() / h.at("csv").get<std::string>();
    std::ifstream in(csv);
    if (!in) throw error(errc::io, "cannot open " + csv.string());
    std::stringstream buf;
    buf << in.rdbuf();
    SurfaceParams p;
    p.family = SurfaceFamily::grid;
    HeightGrid g = grid_from_csv(buf.str(), read_real(h, "grid_r0"), read_real(h, "grid_r1"), nr, nth);
    return make_surface(alpha, R, punctured, HeightField::tabulated(std::move(g)), p, r_min);
  }
  if (kind != "closed-form") throw error(errc::malformed, "surface kind must be closed-form or grid");
  const std::string family = h.value("family", "");
  if (family == "constant") return constant_surface(read_real(h, "c"), R, punctured, alpha, r_min);
  if (family == "hyperbolic-cap") return hyperbolic_cap_surface(R);
  if (family == "surgery-complete") {
    SurgeryResult s = extend_boundary_complete(boundary_from_json(h.at("boundary")), R);
    return s.surface;
  }
  if (family == "surgery-cap") return cap_surface(boundary_from_json(h.at("boundary")), R, read_real(h, "M"));
  throw error(errc::malformed, "unknown closed-form family '" + family + "'");
}

// Modular example -----------------------------------------------------------------

inline json to_json(const SuspensionComplex& cx) {
  json tris = json::array();
  for (const auto& t : cx.triangles) {
    json verts = json::array();
    for (const auto& v : t.vertices) verts.push_back({{"label", v.label}, {"ray", to_json(v.ray)}, {"ideal", v.ideal()}});
    tris.push_back({{"name", t.name}, {"vertices", verts}});
  }
  json pairs = json::array();
  for (const auto& p : cx.pairings)
    pairs.push_back({{"name", p.name},
                     {"from", {{"triangle", p.tri_a}, {"edge", p.edge_a}}},
                     {"to", {{"triangle", p.tri_b}, {"edge", p.edge_b}}},
                     {"map", to_json(p.map.linear())}});
  json lines = json::array();
  for (const auto& l : cx.lines)
    lines.push_back({{"vertices", l.vertices},
                     {"type", to_string(l.type)},
                     {"cone_angle", l.cone_angle},
                     {"holonomy", to_json(l.holonomy)},
                     {"holonomy_fix_residual", l.holonomy_fix_residual}});
  return {{"triangles", tris}, {"pairings", pairs}, {"singular_lines", lines}, {"max_ray_residual", cx.max_ray_residual}};
}

inline json to_json(const PolyhedralSurface& s) {
  json cones = json::array();
  for (const auto& c : s.cone_points) cones.push_back({{"vertices", c.vertices}, {"angle", c.angle}});
  return {{"t0", s.t0},
          {"V", s.V},
          {"E", s.E},
          {"F", s.F},
          {"euler_characteristic", s.euler_characteristic()},
          {"cone_points", cones},
          {"cone_angle_sum", s.cone_angle_sum()},
          {"max_edge_mismatch", s.max_edge_mismatch}};
}

/// Triangle soup, one row per vertex: triangle, label, t, x, y.
inline std::string triangle_soup_csv(const PolyhedralSurface& s) {
  std::ostringstream os;
  os.precision(17);
  os << "triangle,label,t,x,y\n";
  for (const auto& tri : s.triangles)
    for (int i = 0; i < 3; ++i)
      os << tri.name << ',' << tri.labels[i] << ',' << tri.vertices[i].t << ',' << tri.vertices[i].x << ','
         << tri.vertices[i].y << '\n';
  return os.str();
}

}  // namespace btz::io
