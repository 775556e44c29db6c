#pragma once

// Minkowski space E^{1,2}: vectors, the quadratic form -t^2 + x^2 + y^2,
// the identity component of its isometry group and the usual causal
// classifications.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "btz/error.hpp"

namespace btz {

struct LorentzVector {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? t : (i == 1 ? x : y); }
  constexpr double& operator[](int i) { return i == 0 ? t : (i == 1 ? x : y); }

  friend constexpr LorentzVector operator+(LorentzVector a, LorentzVector b) {
    return {a.t + b.t, a.x + b.x, a.y + b.y};
  }
  friend constexpr LorentzVector operator-(LorentzVector a, LorentzVector b) {
    return {a.t - b.t, a.x - b.x, a.y - b.y};
  }
  friend constexpr LorentzVector operator-(LorentzVector a) { return {-a.t, -a.x, -a.y}; }
  friend constexpr LorentzVector operator*(double s, LorentzVector a) {
    return {s * a.t, s * a.x, s * a.y};
  }
  friend constexpr bool operator==(const LorentzVector&, const LorentzVector&) = default;
};

/// Minkowski bilinear form <u, v> = -u_t v_t + u_x v_x + u_y v_y.
constexpr double minkowski_dot(const LorentzVector& u, const LorentzVector& v) {
  return -u.t * v.t + u.x * v.x + u.y * v.y;
}

constexpr double q_form(const LorentzVector& u) { return minkowski_dot(u, u); }

inline double euclidean_norm(const LorentzVector& u) {
  return std::sqrt(u.t * u.t + u.x * u.x + u.y * u.y);
}

inline bool is_finite(const LorentzVector& u) {
  return std::isfinite(u.t) && std::isfinite(u.x) && std::isfinite(u.y);
}

/// Plain 3x3 real matrix, row-major.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static constexpr Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }
  static constexpr Mat3 diag(double a, double b, double c) {
    Mat3 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }

  constexpr double operator()(int i, int j) const { return m[i][j]; }
  constexpr double& operator()(int i, int j) { return m[i][j]; }

  [[nodiscard]] constexpr Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  [[nodiscard]] constexpr double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
  [[nodiscard]] constexpr double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  [[nodiscard]] double max_abs() const {
    double r = 0.0;
    for (const auto& row : m)
      for (double v : row) r = std::max(r, std::abs(v));
    return r;
  }

  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
  friend constexpr LorentzVector operator*(const Mat3& a, const LorentzVector& v) {
    return {a.m[0][0] * v.t + a.m[0][1] * v.x + a.m[0][2] * v.y,
            a.m[1][0] * v.t + a.m[1][1] * v.x + a.m[1][2] * v.y,
            a.m[2][0] * v.t + a.m[2][1] * v.x + a.m[2][2] * v.y};
  }
  friend constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
  }
  friend constexpr Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
    return r;
  }
  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

/// Max-entry distance, the norm used for every matrix residual in the library.
inline double max_abs_diff(const Mat3& a, const Mat3& b) { return (a - b).max_abs(); }

inline constexpr Mat3 kMinkowskiEta = Mat3::diag(-1.0, 1.0, 1.0);

namespace detail {
// Absolute tolerance of the invariant checks, scaled by the squared entry size
// because the residual of L^T eta L grows like |L|^2 times the rounding unit.
inline double isometry_tolerance(const Mat3& linear) {
  const double s = std::max(1.0, linear.max_abs());
  return 1e-12 * s * s;
}
}  // namespace detail

/// Element of Isom(E^{1,2}) = SO_0(1,2) x R^3: linear part plus translation.
/// The invariants are checked once, at construction.
class LorentzIsometry {
 public:
  LorentzIsometry() : linear_(Mat3::identity()) {}

  explicit LorentzIsometry(const Mat3& linear, LorentzVector translation = {})
      : linear_(linear), translation_(translation) {
    validate();
  }

  [[nodiscard]] const Mat3& linear() const { return linear_; }
  [[nodiscard]] const LorentzVector& translation() const { return translation_; }

  [[nodiscard]] LorentzVector apply(const LorentzVector& u) const {
    return linear_ * u + translation_;
  }
  LorentzVector operator()(const LorentzVector& u) const { return apply(u); }

  [[nodiscard]] LorentzIsometry inverse() const {
    // L^{-1} = eta L^T eta for L in O(1,2).
    const Mat3 inv = kMinkowskiEta * linear_.transpose() * kMinkowskiEta;
    return LorentzIsometry(inv, -(inv * translation_));
  }

  friend LorentzIsometry operator*(const LorentzIsometry& a, const LorentzIsometry& b) {
    return LorentzIsometry(a.linear_ * b.linear_, a.linear_ * b.translation_ + a.translation_);
  }

 private:
  void validate() const {
    for (const auto& row : linear_.m)
      for (double v : row)
        if (!std::isfinite(v)) throw error(errc::invalid_isometry, "non-finite entry");
    if (!is_finite(translation_)) throw error(errc::invalid_isometry, "non-finite translation");
    const double tol = detail::isometry_tolerance(linear_);
    const Mat3 gram = linear_.transpose() * kMinkowskiEta * linear_;
    if (max_abs_diff(gram, kMinkowskiEta) > tol)
      throw error(errc::invalid_isometry, "linear part does not preserve the Minkowski form");
    if (std::abs(linear_.det() - 1.0) > tol)
      throw error(errc::invalid_isometry, "linear part is not orientation preserving");
    if (linear_(0, 0) < 1.0 - tol)
      throw error(errc::invalid_isometry, "linear part does not preserve the future cone");
  }

  Mat3 linear_;
  LorentzVector translation_;
};

// Standard generators ---------------------------------------------------------

/// Rotation by `angle` about the t-axis (an elliptic element).
inline Mat3 rotation_t(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r = Mat3::identity();
  r(1, 1) = c;
  r(1, 2) = -s;
  r(2, 1) = s;
  r(2, 2) = c;
  return r;
}

/// Boost in the (t, x) plane; fixes the y-axis pointwise and scales the null
/// line R(1,1,0) by e^{rapidity}.
inline Mat3 boost_x(double rapidity) {
  const double c = std::cosh(rapidity), s = std::sinh(rapidity);
  Mat3 r = Mat3::identity();
  r(0, 0) = c;
  r(0, 1) = s;
  r(1, 0) = s;
  r(1, 1) = c;
  return r;
}

/// Boost in the (t, y) plane.
inline Mat3 boost_y(double rapidity) {
  const double c = std::cosh(rapidity), s = std::sinh(rapidity);
  Mat3 r = Mat3::identity();
  r(0, 0) = c;
  r(0, 2) = s;
  r(2, 0) = s;
  r(2, 2) = c;
  return r;
}

/// Parabolic element fixing the null line R(1,1,0) pointwise. In null
/// coordinates u = t - x, v = t + x it acts as
///   u -> u,  y -> y - a u,  v -> v - 2 a y + a^2 u.
inline Mat3 null_rotation(double a) {
  const double h = 0.5 * a * a;
  Mat3 r;
  r.m = {{{1.0 + h, -h, -a}, {h, 1.0 - h, -a}, {-a, a, 1.0}}};
  return r;
}

// Classification ---------------------------------------------------------------

enum class VectorClass { zero, spacelike, lightlike_future, lightlike_past, timelike_future, timelike_past };

constexpr std::string_view to_string(VectorClass c) {
  switch (c) {
    case VectorClass::zero: return "zero";
    case VectorClass::spacelike: return "spacelike";
    case VectorClass::lightlike_future: return "lightlike-future";
    case VectorClass::lightlike_past: return "lightlike-past";
    case VectorClass::timelike_future: return "timelike-future";
    case VectorClass::timelike_past: return "timelike-past";
  }
  return "unknown";
}

/// `rel_tol` is relative to the squared Euclidean norm; the default decides
/// exactly on the sign of q.
inline VectorClass classify_vector(const LorentzVector& u, double rel_tol = 0.0) {
  const double n2 = u.t * u.t + u.x * u.x + u.y * u.y;
  if (n2 == 0.0) return VectorClass::zero;
  const double q = q_form(u);
  const double band = rel_tol * n2;
  if (q > band) return VectorClass::spacelike;
  if (q < -band) return u.t > 0.0 ? VectorClass::timelike_future : VectorClass::timelike_past;
  return u.t > 0.0 ? VectorClass::lightlike_future : VectorClass::lightlike_past;
}

constexpr bool is_future_causal(VectorClass c) {
  return c == VectorClass::timelike_future || c == VectorClass::lightlike_future;
}

enum class IsometryKind { identity, elliptic, parabolic, hyperbolic };

constexpr std::string_view to_string(IsometryKind k) {
  switch (k) {
    case IsometryKind::identity: return "identity";
    case IsometryKind::elliptic: return "elliptic";
    case IsometryKind::parabolic: return "parabolic";
    case IsometryKind::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

struct IsometryClass {
  IsometryKind kind = IsometryKind::identity;
  double trace = 3.0;
  double angle = 0.0;   // elliptic: rotation angle in [0, pi]
  double lambda = 1.0;  // hyperbolic: eigenvalue > 1
};

/// Trace-based classification of the linear part. Elements with |tr - 3|
/// below `trace_tol` are parabolic unless they are the identity to the same
/// tolerance.
inline IsometryClass classify_isometry(const LorentzIsometry& g, double trace_tol = 1e-9) {
  const Mat3& l = g.linear();
  const double tr = l.trace();
  IsometryClass out;
  out.trace = tr;
  if (std::abs(tr - 3.0) <= trace_tol) {
    out.kind = max_abs_diff(l, Mat3::identity()) <= trace_tol ? IsometryKind::identity
                                                               : IsometryKind::parabolic;
    return out;
  }
  if (tr < 3.0) {
    out.kind = IsometryKind::elliptic;
    out.angle = std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
    return out;
  }
  out.kind = IsometryKind::hyperbolic;
  const double s = tr - 1.0;  // lambda + 1/lambda
  out.lambda = 0.5 * (s + std::sqrt(s * s - 4.0));
  return out;
}

/// Direction spanning ker(L - I); meaningful for non-identity elements.
inline LorentzVector fixed_direction(const Mat3& l) {
  const Mat3 a = l - Mat3::identity();
  LorentzVector best{};
  double best_norm = -1.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const LorentzVector r1{a(i, 0), a(i, 1), a(i, 2)};
      const LorentzVector r2{a(j, 0), a(j, 1), a(j, 2)};
      const LorentzVector c{r1.x * r2.y - r1.y * r2.x, r1.y * r2.t - r1.t * r2.y,
                            r1.t * r2.x - r1.x * r2.t};
      const double n = euclidean_norm(c);
      if (n > best_norm) {
        best_norm = n;
        best = c;
      }
    }
  }
  if (best_norm <= 0.0) return {};
  best = (1.0 / best_norm) * best;
  if (best.t < 0.0) best = -best;
  return best;
}

enum class CausalRelation { chronological, causal, none };

constexpr std::string_view to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::chronological: return "chronological";
    case CausalRelation::causal: return "causal";
    case CausalRelation::none: return "none";
  }
  return "unknown";
}

/// Relation of q to p in Minkowski space: chronological iff q - p is
/// future timelike, causal iff it is future causal or zero.
inline CausalRelation minkowski_causal(const LorentzVector& p, const LorentzVector& q) {
  const VectorClass c = classify_vector(q - p);
  if (c == VectorClass::timelike_future) return CausalRelation::chronological;
  if (c == VectorClass::lightlike_future || c == VectorClass::zero) return CausalRelation::causal;
  return CausalRelation::none;
}

/// Point of the hyperboloid {q = -1, t > 0} on the ray through (1, x, y);
/// (x, y) are Klein coordinates of the open unit disc.
inline LorentzVector hyperboloid_embed(double x, double y) {
  const double s = 1.0 - x * x - y * y;
  if (!(s > 0.0)) throw error(errc::out_of_range, "Klein point must lie in the open unit disc");
  const double k = 1.0 / std::sqrt(s);
  return {k, k * x, k * y};
}

}  // namespace btz
