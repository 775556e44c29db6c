#pragma once

// The modular-group example: PSL(2,Z) acting on Minkowski space through
// PSL(2,R) = SO_0(1,2), two suspensions of hyperbolic triangles glued into a
// spacetime with three singular lines, and its polyhedral Cauchy surface.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "btz/error.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"

namespace btz {

/// Image of [[a, b], [c, d]] in SO_0(1,2) under M -> g M g^T on symmetric
/// matrices, written (t, x, y) = ((M11 + M22)/2, (M11 - M22)/2, M12). Then
/// det M = -q.
inline LorentzIsometry sl2_to_so12(double a, double b, double c, double d) {
  if (std::abs(a * d - b * c - 1.0) > 1e-12) throw error(errc::invalid_isometry, "matrix is not in SL(2,R)");
  // columns: images of I, diag(1,-1), [[0,1],[1,0]]
  const std::array<std::array<double, 4>, 3> basis = {{{1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, 1, 0}}};
  Mat3 l;
  for (int col = 0; col < 3; ++col) {
    const auto& m = basis[col];  // m11 m12 m21 m22
    // g m g^T
    const double p11 = a * m[0] + b * m[2], p12 = a * m[1] + b * m[3];
    const double p21 = c * m[0] + d * m[2], p22 = c * m[1] + d * m[3];
    const double n11 = p11 * a + p12 * b, n12 = p11 * c + p12 * d;
    const double n22 = p21 * c + p22 * d;
    l(0, col) = 0.5 * (n11 + n22);
    l(1, col) = 0.5 * (n11 - n22);
    l(2, col) = n12;
  }
  return LorentzIsometry(l);
}

/// Point of the hyperboloid attached to z in the upper half-plane.
inline LorentzVector upper_half_plane_point(double x, double y) {
  if (!(y > 0.0)) throw error(errc::out_of_range, "point must lie in the upper half-plane");
  const double n = x * x + y * y;
  return {0.5 * (n + 1.0) / y, 0.5 * (n - 1.0) / y, x / y};
}

struct ModularGenerators {
  LorentzIsometry S;  // z -> -1/z
  LorentzIsometry T;  // z -> z + 1
};

inline ModularGenerators psl2z_representation() {
  return {sl2_to_so12(0.0, -1.0, 1.0, 0.0), sl2_to_so12(1.0, 1.0, 0.0, 1.0)};
}

// Suspension complex ------------------------------------------------------------

struct VertexRay {
  std::string label;
  LorentzVector ray;  // unit timelike (on the hyperboloid) or null with t = 1
  [[nodiscard]] bool ideal() const { return std::abs(q_form(ray)) < 1e-12; }
};

struct HyperbolicTriangle {
  std::string name;
  std::array<VertexRay, 3> vertices;
};

/// Hyperbolic angle at vertex i of the triangle; 0 at an ideal vertex.
inline double triangle_angle(const HyperbolicTriangle& tri, int i) {
  const VertexRay& v = tri.vertices[i];
  if (v.ideal()) return 0.0;
  const LorentzVector& p = v.ray;
  auto tangent = [&](const LorentzVector& w) { return w + minkowski_dot(w, p) * p; };
  const LorentzVector u1 = tangent(tri.vertices[(i + 1) % 3].ray);
  const LorentzVector u2 = tangent(tri.vertices[(i + 2) % 3].ray);
  const double c = minkowski_dot(u1, u2) / std::sqrt(q_form(u1) * q_form(u2));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// The two triangles [A, B, inf] and [C, B, inf] forming a fundamental
/// domain of the modular group.
inline std::array<HyperbolicTriangle, 2> fundamental_triangles() {
  const double h = std::sqrt(3.0) / 2.0;
  const VertexRay A{"A", upper_half_plane_point(-0.5, h)};
  const VertexRay B{"B", upper_half_plane_point(0.0, 1.0)};
  const VertexRay C{"C", upper_half_plane_point(0.5, h)};
  const VertexRay inf{"inf", {1.0, 1.0, 0.0}};
  return {{{"T1", {A, B, inf}}, {"T2", {C, B, inf}}}};
}

/// Edge (i, j) of triangle a is carried by `map` onto edge (k, l) of triangle
/// b, vertex i onto k and j onto l.
struct FacePairing {
  int tri_a = 0;
  std::array<int, 2> edge_a{};
  int tri_b = 0;
  std::array<int, 2> edge_b{};
  LorentzIsometry map;
  std::string name;
};

enum class LineType { massive, btz };

constexpr std::string_view to_string(LineType t) { return t == LineType::massive ? "massive" : "btz"; }

struct SingularLine {
  std::vector<std::string> vertices;  // identified vertex labels
  LineType type = LineType::massive;
  double cone_angle = 0.0;            // sum of incident triangle angles
  IsometryClass holonomy;
  double holonomy_fix_residual = 0.0;  // |H v - v| for the vertex ray v
};

struct SuspensionComplex {
  std::vector<HyperbolicTriangle> triangles;
  std::vector<FacePairing> pairings;
  std::vector<SingularLine> lines;
  double max_ray_residual = 0.0;  // paired edge rays, after normalisation
};

inline constexpr double kGluingTol = 1e-9;

namespace detail {

inline LorentzVector normalise_ray(const LorentzVector& v) { return (1.0 / v.t) * v; }

inline double ray_distance(const LorentzVector& a, const LorentzVector& b) {
  const LorentzVector d = normalise_ray(a) - normalise_ray(b);
  return std::max({std::abs(d.t), std::abs(d.x), std::abs(d.y)});
}

struct Corner {
  int tri;
  int vertex;
  friend bool operator==(const Corner&, const Corner&) = default;
};

struct Crossing {
  Corner next;       // corner reached in the neighbouring triangle
  int entered_from;  // its other vertex on the crossed side
  LorentzIsometry map;
};

}  // namespace detail

/// Validates the pairings and classifies the singular lines by walking the
/// vertex cycles: the cone angle is the sum of triangle angles met, the
/// holonomy the product of gluing maps along the cycle.
inline SuspensionComplex build_complex_from(std::vector<HyperbolicTriangle> triangles,
                                            std::vector<FacePairing> pairings) {
  SuspensionComplex out{std::move(triangles), std::move(pairings), {}, 0.0};
  const auto& tris = out.triangles;
  for (const auto& p : out.pairings) {
    for (int k = 0; k < 2; ++k) {
      const LorentzVector img = p.map(tris[p.tri_a].vertices[p.edge_a[k]].ray);
      const double d = detail::ray_distance(img, tris[p.tri_b].vertices[p.edge_b[k]].ray);
      out.max_ray_residual = std::max(out.max_ray_residual, d);
      if (!(d <= kGluingTol))
        throw error(errc::gluing_mismatch, "pairing " + p.name + " does not match the edge rays");
    }
  }

  // Crossing the side {c.vertex, w} of triangle c.tri.
  auto cross = [&](detail::Corner c, int w) -> std::optional<detail::Crossing> {
    for (const auto& p : out.pairings) {
      for (int side = 0; side < 2; ++side) {
        if ((side == 0 ? p.tri_a : p.tri_b) != c.tri) continue;
        const auto& e = side == 0 ? p.edge_a : p.edge_b;
        const auto& f = side == 0 ? p.edge_b : p.edge_a;
        const int t2 = side == 0 ? p.tri_b : p.tri_a;
        for (int k = 0; k < 2; ++k) {
          if (e[k] == c.vertex && e[1 - k] == w)
            return detail::Crossing{{t2, f[k]}, f[1 - k], side == 0 ? p.map : p.map.inverse()};
        }
      }
    }
    return std::nullopt;
  };

  std::vector<detail::Corner> seen;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int v = 0; v < 3; ++v) {
      const detail::Corner start{t, v};
      if (std::find(seen.begin(), seen.end(), start) != seen.end()) continue;
      SingularLine line;
      Mat3 hol = Mat3::identity();
      detail::Corner cur = start;
      int exit = (v + 1) % 3;
      const int start_exit = exit;
      for (std::size_t guard = 0; guard < 4 * tris.size() * 3; ++guard) {
        seen.push_back(cur);
        line.cone_angle += triangle_angle(tris[cur.tri], cur.vertex);
        const auto& label = tris[cur.tri].vertices[cur.vertex].label;
        if (std::find(line.vertices.begin(), line.vertices.end(), label) == line.vertices.end())
          line.vertices.push_back(label);
        const auto step = cross(cur, exit);
        if (!step) throw error(errc::gluing_mismatch, "unpaired edge in triangle " + tris[cur.tri].name);
        hol = step->map.linear() * hol;
        // leave the next triangle through its other side at this vertex
        exit = 3 - step->next.vertex - step->entered_from;
        cur = step->next;
        if (cur == start && exit == start_exit) break;
        if (cur == start) throw error(errc::gluing_mismatch, "vertex cycle closes with the wrong orientation");
      }
      const LorentzIsometry h(hol);
      line.holonomy = classify_isometry(h);
      const LorentzVector ray = tris[t].vertices[v].ray;
      const LorentzVector moved = h(ray);
      line.holonomy_fix_residual = detail::ray_distance(moved, ray);
      line.type = tris[t].vertices[v].ideal() ? LineType::btz : LineType::massive;
      out.lines.push_back(line);
    }
  }
  return out;
}

/// The modular spacetime: T1 and T2 share [B, inf]; S carries [C, B] onto
/// [A, B]; T carries [A, inf] onto [C, inf].
inline SuspensionComplex build_complex() {
  const auto tri = fundamental_triangles();
  const auto gens = psl2z_representation();
  std::vector<FacePairing> pairings = {
      {0, {1, 2}, 1, {1, 2}, LorentzIsometry(), "I"},
      {1, {0, 1}, 0, {0, 1}, gens.S, "S"},
      {0, {0, 2}, 1, {0, 2}, gens.T, "T"},
  };
  return build_complex_from({tri[0], tri[1]}, std::move(pairings));
}

// Polyhedral Cauchy surface ------------------------------------------------------

struct EuclideanTriangle {
  std::string name;
  std::array<LorentzVector, 3> vertices;  // all with t = t0
  std::array<std::string, 3> labels;
};

struct ConePoint {
  std::vector<std::string> vertices;
  double angle = 0.0;
};

struct PolyhedralSurface {
  double t0 = 1.0;
  std::vector<EuclideanTriangle> triangles;
  std::vector<FacePairing> gluing;
  std::vector<ConePoint> cone_points;
  std::size_t V = 0, E = 0, F = 0;
  double max_edge_mismatch = 0.0;

  [[nodiscard]] long euler_characteristic() const {
    return static_cast<long>(V) - static_cast<long>(E) + static_cast<long>(F);
  }
  [[nodiscard]] double cone_angle_sum() const {
    return std::accumulate(cone_points.begin(), cone_points.end(), 0.0,
                           [](double s, const ConePoint& c) { return s + c.angle; });
  }
};

inline double euclidean_angle(const LorentzVector& p, const LorentzVector& a, const LorentzVector& b) {
  const double ux = a.x - p.x, uy = a.y - p.y, vx = b.x - p.x, vy = b.y - p.y;
  return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
}

inline double planar_length(const LorentzVector& a, const LorentzVector& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Cuts every suspension at {t = t0}; the ideal vertex lands on the null circle
/// and is kept as the BTZ vertex of the surface.
inline PolyhedralSurface polyhedral_cauchy_surface(double t0, const SuspensionComplex& cx = build_complex()) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw error(errc::out_of_range, "t0 must be > 0");
  PolyhedralSurface s;
  s.t0 = t0;
  s.gluing = cx.pairings;
  for (const auto& tri : cx.triangles) {
    EuclideanTriangle e;
    e.name = tri.name;
    for (int i = 0; i < 3; ++i) {
      e.vertices[i] = (t0 / tri.vertices[i].ray.t) * tri.vertices[i].ray;
      e.labels[i] = tri.vertices[i].label;
    }
    s.triangles.push_back(e);
  }
  // corners identified through the pairings (union-find over 3F corners)
  const std::size_t n = 3 * s.triangles.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : cx.pairings) {
    for (int k = 0; k < 2; ++k)
      parent[find(3 * p.tri_a + p.edge_a[k])] = find(3 * p.tri_b + p.edge_b[k]);
    const auto& ta = s.triangles[p.tri_a];
    const auto& tb = s.triangles[p.tri_b];
    const double la = planar_length(ta.vertices[p.edge_a[0]], ta.vertices[p.edge_a[1]]);
    const double lb = planar_length(tb.vertices[p.edge_b[0]], tb.vertices[p.edge_b[1]]);
    s.max_edge_mismatch = std::max(s.max_edge_mismatch, std::abs(la - lb));
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (find(c) != c) continue;
    ConePoint cp;
    for (std::size_t d = 0; d < n; ++d) {
      if (find(d) != c) continue;
      const auto& tri = s.triangles[d / 3];
      const int i = static_cast<int>(d % 3);
      cp.angle += euclidean_angle(tri.vertices[i], tri.vertices[(i + 1) % 3], tri.vertices[(i + 2) % 3]);
      if (std::find(cp.vertices.begin(), cp.vertices.end(), tri.labels[i]) == cp.vertices.end())
        cp.vertices.push_back(tri.labels[i]);
    }
    s.cone_points.push_back(cp);
  }
  s.V = s.cone_points.size();
  s.F = s.triangles.size();
  // closed surface: every triangle side is glued to exactly one other
  if (3 * s.F != 2 * cx.pairings.size()) throw error(errc::gluing_mismatch, "surface has unpaired edges");
  s.E = cx.pairings.size();
  return s;
}

/// Number of distinct points where the ray R_+ d meets the surface.
inline std::size_t ray_intersection_count(const PolyhedralSurface& s, const LorentzVector& d, double tol = 1e-12) {
  if (!(d.t > 0.0) || q_form(d) > tol * (d.t * d.t)) throw error(errc::precondition, "ray must be future causal");
  const double k = s.t0 / d.t;
  const LorentzVector p = k * d;
  std::vector<LorentzVector> hits;
  for (const auto& tri : s.triangles) {
    const auto& a = tri.vertices[0];
    const auto& b = tri.vertices[1];
    const auto& c = tri.vertices[2];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -tol || l1 < -tol || l2 < -tol) continue;
    const bool dup = std::any_of(hits.begin(), hits.end(), [&](const LorentzVector& h) {
      return std::hypot(h.x - p.x, h.y - p.y) <= 1e-9 * s.t0;
    });
    if (!dup) hits.push_back(p);
  }
  return hits.size();
}

/// Random future direction in the cone over one of the two fundamental
/// triangles, with a random positive scale.
inline LorentzVector sample_sector_ray(std::mt19937_64& rng, const std::array<HyperbolicTriangle, 2>& tris) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& tri = tris[unit(rng) < 0.5 ? 0 : 1];
  double w[3];
  double sum = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - unit(rng));
    sum += x;
  }
  // barycentric combination in the Klein chart
  double kx = 0.0, ky = 0.0;
  for (int i = 0; i < 3; ++i) {
    const LorentzVector v = (1.0 / tri.vertices[i].ray.t) * tri.vertices[i].ray;
    kx += w[i] / sum * v.x;
    ky += w[i] / sum * v.y;
  }
  const double scale = 0.1 + 10.0 * unit(rng);
  return {scale, scale * kx, scale * ky};
}

}  // namespace btz
