#pragma once

// Model spaces E^{1,2}_alpha in cylindrical coordinates (time, r, theta):
//
//   alpha > 0 : ds^2 = -dt^2 + dr^2 + (alpha / 2pi)^2 r^2 dtheta^2
//   alpha = 0 : ds^2 = -2 dtau dr + dr^2 + r^2 dtheta^2        (BTZ white hole)
//
// plus the omega-parametrised family joining them and tube regions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "btz/error.hpp"
#include "btz/lorentz.hpp"

namespace btz {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to the branch [0, 2pi).
inline double reduce_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Representative of theta in (-pi, pi].
inline double wrap_pi(double theta) {
  if (theta > -kTwoPi && theta < kTwoPi) {
    // differences of reduced angles; avoids fmod in the sampling loops
    if (theta > std::numbers::pi) return theta - kTwoPi;
    if (theta <= -std::numbers::pi) return theta + kTwoPi;
    return theta;
  }
  double r = reduce_angle(theta);
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

/// Total angle around a singular line. 2pi is regular, 0 is extreme BTZ.
class ConeAngle {
 public:
  static constexpr double kRegularTol = 1e-12;

  constexpr ConeAngle() = default;
  explicit ConeAngle(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0)
      throw error(errc::out_of_range, "cone angle must be finite and >= 0");
  }

  static ConeAngle regular() { return ConeAngle(kTwoPi); }
  static ConeAngle btz() { return ConeAngle(0.0); }

  [[nodiscard]] constexpr double value() const { return alpha_; }
  [[nodiscard]] bool singular() const { return std::abs(alpha_ - kTwoPi) > kRegularTol; }
  [[nodiscard]] constexpr bool is_btz() const { return alpha_ == 0.0; }
  /// alpha / 2pi, the factor multiplying r in the angular part of the metric.
  [[nodiscard]] constexpr double ratio() const { return alpha_ / kTwoPi; }

  friend constexpr bool operator==(const ConeAngle&, const ConeAngle&) = default;

 private:
  double alpha_ = kTwoPi;
};

/// Point of E^{1,2}_alpha. `time` is t for alpha > 0 and tau for alpha = 0.
struct ModelPoint {
  ConeAngle angle;
  double time = 0.0;
  double r = 0.0;
  double theta = 0.0;

  static ModelPoint make(ConeAngle angle, double time, double r, double theta) {
    if (!std::isfinite(time) || !std::isfinite(r) || !std::isfinite(theta))
      throw error(errc::out_of_range, "model point coordinates must be finite");
    if (r < 0.0) throw error(errc::out_of_range, "model point radius must be >= 0");
    return ModelPoint{angle, time, r, reduce_angle(theta)};
  }

  [[nodiscard]] bool on_axis() const { return r == 0.0; }
  [[nodiscard]] bool is_singular() const { return r == 0.0 && angle.singular(); }
};

/// Metric array in the coordinate basis (time, r, theta).
inline Mat3 metric_at(ConeAngle alpha, double r) {
  if (!(r > 0.0)) throw error(errc::singular_point, "metric is not defined on r = 0");
  if (alpha.is_btz()) {
    Mat3 g;
    g.m = {{{0.0, -1.0, 0.0}, {-1.0, 1.0, 0.0}, {0.0, 0.0, r * r}}};
    return g;
  }
  const double k = alpha.ratio();
  return Mat3::diag(-1.0, 1.0, k * k * r * r);
}

inline Mat3 metric_at(const ModelPoint& p) { return metric_at(p.angle, p.r); }

/// sqrt|det g| for the metric above: (alpha/2pi) r, or r in the BTZ case.
inline double volume_density(ConeAngle alpha, double r) {
  return alpha.is_btz() ? r : alpha.ratio() * r;
}

/// ds^2_omega = -(1-w^2) dtau^2 - 2 w dtau dr + dr^2 + r^2 dtheta^2.
inline Mat3 omega_metric_at(double omega, double r) {
  if (!(std::abs(omega) <= 1.0)) throw error(errc::out_of_range, "|omega| must be <= 1");
  if (!(r > 0.0)) throw error(errc::singular_point, "metric is not defined on r = 0");
  Mat3 g;
  g.m = {{{-(1.0 - omega * omega), -omega, 0.0}, {-omega, 1.0, 0.0}, {0.0, 0.0, r * r}}};
  return g;
}

/// Member of the omega family; omega = 1 is the BTZ white hole.
class OmegaChart {
 public:
  explicit OmegaChart(double omega) : omega_(omega) {
    if (!(std::abs(omega) <= 1.0)) throw error(errc::out_of_range, "|omega| must be <= 1");
  }
  [[nodiscard]] double omega() const { return omega_; }
  /// omega = tanh(beta); infinite at |omega| = 1.
  [[nodiscard]] double beta() const {
    if (std::abs(omega_) == 1.0) return std::copysign(std::numeric_limits<double>::infinity(), omega_);
    return std::atanh(omega_);
  }
  [[nodiscard]] ConeAngle alpha() const {
    return ConeAngle(kTwoPi * std::sqrt(std::max(0.0, 1.0 - omega_ * omega_)));
  }
  [[nodiscard]] Mat3 metric(double r) const { return omega_metric_at(omega_, r); }

 private:
  double omega_;
};

/// Coordinate change (t, r, theta) -> (tau, rr, theta) taking the cone metric
/// of angle alpha in (0, 2pi] to ds^2_omega with omega = sqrt(1 - (alpha/2pi)^2):
///   tau = t cosh(beta) - r sinh(beta),  rr = r / cosh(beta),  cosh(beta) = 2pi/alpha.
class OmegaTransform {
 public:
  explicit OmegaTransform(ConeAngle alpha) : alpha_(alpha) {
    const double a = alpha.value();
    if (!(a > 0.0) || a > kTwoPi + ConeAngle::kRegularTol)
      throw error(errc::out_of_range, "omega transform needs 0 < alpha <= 2pi");
    cosh_b_ = std::max(1.0, kTwoPi / a);
    beta_ = std::acosh(cosh_b_);
    sinh_b_ = std::sinh(beta_);
    const double k = alpha.ratio();
    omega_ = std::sqrt(std::max(0.0, 1.0 - k * k));
  }

  [[nodiscard]] ConeAngle alpha() const { return alpha_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double cosh_beta() const { return cosh_b_; }

  /// Returns (tau, rr, theta).
  [[nodiscard]] std::array<double, 3> map(double t, double r, double theta) const {
    return {t * cosh_b_ - r * sinh_b_, r / cosh_b_, theta};
  }

  /// d(tau, rr, theta) / d(t, r, theta); constant since the map is linear.
  [[nodiscard]] Mat3 jacobian() const {
    Mat3 j;
    j.m = {{{cosh_b_, -sinh_b_, 0.0}, {0.0, 1.0 / cosh_b_, 0.0}, {0.0, 0.0, 1.0}}};
    return j;
  }

  /// J^T G_omega(rr(r)) J, to be compared with metric_at(alpha, r).
  [[nodiscard]] Mat3 pullback_metric(double r) const {
    const Mat3 j = jacobian();
    return j.transpose() * omega_metric_at(omega_, r / cosh_b_) * j;
  }

 private:
  ConeAngle alpha_;
  double beta_ = 0.0;
  double cosh_b_ = 1.0;
  double sinh_b_ = 0.0;
  double omega_ = 0.0;
};

/// Tube slice {r <= R, a <= time <= b}; bounds may be infinite and each
/// inequality may be strict.
struct TubeRegion {
  ConeAngle angle;
  double radius = 1.0;
  double time_min = -std::numeric_limits<double>::infinity();
  double time_max = std::numeric_limits<double>::infinity();
  bool radius_closed = true;
  bool min_closed = true;
  bool max_closed = true;

  static TubeRegion make(ConeAngle angle, double radius, double a, double b, bool closed = true) {
    if (!(radius > 0.0)) throw error(errc::out_of_range, "tube radius must be > 0");
    if (std::isnan(a) || std::isnan(b) || !(a < b))
      throw error(errc::out_of_range, "tube time interval must satisfy a < b");
    return TubeRegion{angle, radius, a, b, closed, closed, closed};
  }

  [[nodiscard]] bool bounded() const { return std::isfinite(time_min) && std::isfinite(time_max); }
  [[nodiscard]] double length() const { return time_max - time_min; }
};

inline bool in_region(const TubeRegion& reg, const ModelPoint& p) {
  if (!(reg.angle == p.angle)) throw error(errc::precondition, "point and region use different cone angles");
  const bool r_ok = reg.radius_closed ? p.r <= reg.radius : p.r < reg.radius;
  const bool lo_ok = reg.min_closed ? p.time >= reg.time_min : p.time > reg.time_min;
  const bool hi_ok = reg.max_closed ? p.time <= reg.time_max : p.time < reg.time_max;
  return r_ok && lo_ok && hi_ok;
}

// Future cones near the singular line -------------------------------------------
//
// In the omega coordinates the cone of future causal vectors at a regular point
// does not depend on r. For a horizontal unit direction phi, the boundary of
// the cone sits at height v_tau(phi); these two functions return that height
// for the radial limit approached from angle theta, and for the cone of
// directions of causal curves leaving a point of the singular line.

/// Height of the future light cone at a regular point of polar angle `theta`;
/// +inf when the horizontal direction is not causal-reachable (only at omega = 1).
inline double radial_cone_height(double omega, double theta, double phi) {
  const double c = std::cos(phi - theta);
  const double k = 1.0 - omega * omega;
  if (k <= 0.0) return c > 0.0 ? 1.0 / (2.0 * c) : std::numeric_limits<double>::infinity();
  return (-omega * c + std::sqrt(omega * omega * c * c + k)) / k;
}

/// Height of the cone of causal directions out of a singular point; the same
/// in every horizontal direction.
inline double online_cone_height(double omega) { return 1.0 / (1.0 + omega); }

}  // namespace btz
