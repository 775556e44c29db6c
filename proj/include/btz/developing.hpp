#pragma once

// Developing maps of the regular parts of the model spaces into Minkowski
// space, their holonomies and the rigidity statement used for chart matching.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "btz/error.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"

namespace btz {

/// Point of the universal cover of the regular part; theta is not reduced.
struct CoverPoint {
  double time = 0.0;
  double r = 1.0;
  double theta = 0.0;

  static CoverPoint make(double time, double r, double theta) {
    if (!std::isfinite(time) || !std::isfinite(r) || !std::isfinite(theta))
      throw error(errc::out_of_range, "cover point coordinates must be finite");
    if (!(r > 0.0)) throw error(errc::singular_point, "cover points have r > 0");
    return {time, r, theta};
  }
};

/// Max-entry residual of J^T eta J against g.
inline double pullback_residual(const Mat3& jacobian, const Mat3& g) {
  return max_abs_diff(jacobian.transpose() * kMinkowskiEta * jacobian, g);
}

// BTZ ---------------------------------------------------------------------------

/// D(tau, r, th) = (tau + r th^2/2, tau + r th^2/2 - r, -r th). Injective with
/// image {t - x > 0} = I^+ of the null line R(1,1,0).
inline LorentzVector develop_btz(const CoverPoint& p) {
  if (!(p.r > 0.0)) throw error(errc::singular_point, "develop_btz needs r > 0");
  const double h = p.time + 0.5 * p.r * p.theta * p.theta;
  return {h, h - p.r, -p.r * p.theta};
}

/// d(t, x, y) / d(tau, r, theta).
inline Mat3 develop_btz_jacobian(const CoverPoint& p) {
  const double th = p.theta;
  Mat3 j;
  j.m = {{{1.0, 0.5 * th * th, p.r * th},
          {1.0, 0.5 * th * th - 1.0, p.r * th},
          {0.0, -th, -p.r}}};
  return j;
}

/// Inverse of develop_btz on {t - x > 0}.
inline CoverPoint undevelop_btz(const LorentzVector& u) {
  const double r = u.t - u.x;
  if (!(r > 0.0)) throw error(errc::out_of_range, "point is not in the image t - x > 0");
  const double th = -u.y / r;
  return {u.t - 0.5 * r * th * th, r, th};
}

/// Holonomy of the deck move theta -> theta + 2pi: the null rotation with
/// parameter 2pi fixing (1,1,0).
inline LorentzIsometry btz_holonomy_generator() { return LorentzIsometry(null_rotation(kTwoPi)); }

// Massive particles ----------------------------------------------------------------

/// (t, r cos(k th), r sin(k th)) with k = alpha / 2pi.
inline LorentzVector develop_massive(ConeAngle alpha, const CoverPoint& p) {
  if (alpha.is_btz()) throw error(errc::out_of_range, "develop_massive needs alpha > 0");
  if (!(p.r > 0.0)) throw error(errc::singular_point, "develop_massive needs r > 0");
  const double a = alpha.ratio() * p.theta;
  return {p.time, p.r * std::cos(a), p.r * std::sin(a)};
}

inline Mat3 develop_massive_jacobian(ConeAngle alpha, const CoverPoint& p) {
  const double k = alpha.ratio();
  const double c = std::cos(k * p.theta), s = std::sin(k * p.theta);
  Mat3 j;
  j.m = {{{1.0, 0.0, 0.0}, {0.0, c, -p.r * k * s}, {0.0, s, p.r * k * c}}};
  return j;
}

inline LorentzIsometry massive_holonomy_generator(ConeAngle alpha) {
  return LorentzIsometry(rotation_t(alpha.value()));
}

/// Central-difference Jacobian of a map of the cover, used as a cross-check of
/// the closed forms.
inline Mat3 numeric_jacobian(const std::function<LorentzVector(const CoverPoint&)>& f,
                             const CoverPoint& p, double h) {
  Mat3 j;
  for (int c = 0; c < 3; ++c) {
    CoverPoint lo = p, hi = p;
    double* lo_c = c == 0 ? &lo.time : (c == 1 ? &lo.r : &lo.theta);
    double* hi_c = c == 0 ? &hi.time : (c == 1 ? &hi.r : &hi.theta);
    *lo_c -= h;
    *hi_c += h;
    const LorentzVector d = (1.0 / (2.0 * h)) * (f(hi) - f(lo));
    for (int r = 0; r < 3; ++r) j(r, c) = d[r];
  }
  return j;
}

// Holonomy ---------------------------------------------------------------------

struct Holonomy {
  LorentzIsometry generator;

  /// Generator of the model space of angle alpha: parabolic for alpha = 0,
  /// rotation by alpha otherwise.
  static Holonomy of(ConeAngle alpha) {
    return {alpha.is_btz() ? btz_holonomy_generator() : massive_holonomy_generator(alpha)};
  }

  [[nodiscard]] IsometryClass classify() const { return classify_isometry(generator); }
};

/// Whether a holonomy generator is of the type expected for a chart of cone
/// angle alpha: parabolic for alpha = 0, elliptic with rotation angle alpha
/// (mod 2pi, up to orientation) otherwise.
inline bool holonomy_matches(const Holonomy& h, ConeAngle alpha, double tol = 1e-9) {
  const IsometryClass c = h.classify();
  if (alpha.is_btz()) return c.kind == IsometryKind::parabolic;
  if (!alpha.singular()) return c.kind == IsometryKind::identity;
  const double expect = std::acos(std::clamp(std::cos(alpha.value()), -1.0, 1.0));
  if (expect <= tol) return c.kind == IsometryKind::identity;
  return c.kind == IsometryKind::elliptic && std::abs(c.angle - expect) <= tol;
}

// lambda-rescaling ----------------------------------------------------------------

/// -2 dtau dr + dr^2 + lambda^2 r^2 dtheta^2.
inline Mat3 lambda_metric_at(double lambda, double r) {
  Mat3 g = metric_at(ConeAngle::btz(), r);
  g(2, 2) = lambda * lambda * r * r;
  return g;
}

struct RescaleReport {
  double lambda = 1.0;
  std::vector<double> radii;
  std::vector<double> angular_coefficient;  // (2,2) entry of the pullback at each radius
  double residual = 0.0;
};

/// Pulls the E_0 metric back along (tau, r, th) -> (tau, r, lambda th) at the
/// given radii and compares with the lambda-metric.
inline RescaleReport rescale_btz(double lambda, const std::vector<double>& radii = {0.5, 1.0, 2.0, 3.0}) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw error(errc::out_of_range, "lambda must be > 0");
  RescaleReport out;
  out.lambda = lambda;
  const Mat3 j = Mat3::diag(1.0, 1.0, lambda);
  for (double r : radii) {
    const Mat3 pb = j.transpose() * metric_at(ConeAngle::btz(), r) * j;
    out.radii.push_back(r);
    out.angular_coefficient.push_back(pb(2, 2) / (r * r));
    out.residual = std::max(out.residual, max_abs_diff(pb, lambda_metric_at(lambda, r)));
  }
  return out;
}

/// h g h^{-1} with h the boost scaling the fixed null line of the parabolic
/// element g by e^mu.
inline LorentzIsometry boost_conjugate(const LorentzIsometry& g, double mu) {
  if (classify_isometry(g).kind != IsometryKind::parabolic)
    throw error(errc::precondition, "boost_conjugate expects a parabolic element");
  const LorentzVector n = fixed_direction(g.linear());
  // rotate (1,1,0) onto the fixed line, boost along x, rotate back
  const double phi = std::atan2(n.y, n.x);
  const LorentzIsometry rot(rotation_t(phi));
  const LorentzIsometry h = rot * LorentzIsometry(boost_x(mu)) * rot.inverse();
  return h * g * h.inverse();
}

/// A punctured neighbourhood of a singular point of angle alpha != 2pi embeds
/// into one of angle beta fixing the singular point only when alpha = beta.
inline bool match_cone_charts(ConeAngle alpha, ConeAngle beta) {
  if (!alpha.singular()) throw error(errc::precondition, "first cone angle must be singular");
  return std::abs(alpha.value() - beta.value()) <= ConeAngle::kRegularTol;
}

}  // namespace btz
