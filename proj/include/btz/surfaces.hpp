#pragma once

// Graph surfaces {time = tau(r, theta)} over discs in the model spaces: the
// spacelike criterion, induced metric and lengths, completeness certificates,
// and the two surgery constructions extending a boundary curve inwards.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "btz/error.hpp"
#include "btz/model_space.hpp"

namespace btz {

using Mat2 = std::array<std::array<double, 2>, 2>;

inline bool positive_definite(const Mat2& g) {
  return g[0][0] > 0.0 && g[0][0] * g[1][1] - g[0][1] * g[1][0] > 0.0;
}

// Boundary curves --------------------------------------------------------------

/// Trigonometric polynomial a0 + sum_k (a_k cos k th + b_k sin k th), k >= 1.
class BoundaryCurve {
 public:
  BoundaryCurve() = default;
  BoundaryCurve(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
      : a0_(a0), a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
    if (!std::isfinite(a0_) || !std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); }) ||
        !std::all_of(b_.begin(), b_.end(), [](double v) { return std::isfinite(v); }))
      throw error(errc::out_of_range, "boundary coefficients must be finite");
  }

  static BoundaryCurve constant(double c) { return BoundaryCurve(c, {}, {}); }

  [[nodiscard]] double operator()(double th) const {
    double s = a0_;
    for (std::size_t k = 0; k < a_.size(); ++k) s += a_[k] * std::cos(static_cast<double>(k + 1) * th);
    for (std::size_t k = 0; k < b_.size(); ++k) s += b_[k] * std::sin(static_cast<double>(k + 1) * th);
    return s;
  }

  [[nodiscard]] double derivative(double th) const {
    double s = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      const double n = static_cast<double>(k + 1);
      s -= n * a_[k] * std::sin(n * th);
    }
    for (std::size_t k = 0; k < b_.size(); ++k) {
      const double n = static_cast<double>(k + 1);
      s += n * b_[k] * std::cos(n * th);
    }
    return s;
  }

  /// max over the circle of |d tau / d theta|: dense scan refined by golden
  /// section around the best sample.
  [[nodiscard]] double max_abs_derivative() const {
    constexpr int n = 1 << 16;
    const double step = kTwoPi / n;
    auto f = [this](double th) { return std::abs(derivative(th)); };
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < n; ++i) {
      const double v = f(i * step);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    double lo = (best - 1) * step, hi = (best + 1) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      }
    }
    return std::max({best_val, f1, f2});
  }

  [[nodiscard]] double a0() const { return a0_; }
  [[nodiscard]] const std::vector<double>& cos_coeffs() const { return a_; }
  [[nodiscard]] const std::vector<double>& sin_coeffs() const { return b_; }
  [[nodiscard]] std::size_t degree() const { return std::max(a_.size(), b_.size()); }

 private:
  double a0_ = 0.0;
  std::vector<double> a_;
  std::vector<double> b_;
};

// Height fields ------------------------------------------------------------------

/// tau(r, theta) tabulated on a uniform (r, theta) grid, periodic in theta.
struct HeightGrid {
  double r0 = 0.0;
  double r1 = 1.0;
  std::size_t nr = 0;
  std::size_t nth = 0;
  std::vector<double> tau;  // row-major, index i * nth + j at (r_i, th_j)

  [[nodiscard]] double r_at(std::size_t i) const {
    return r0 + (r1 - r0) * static_cast<double>(i) / static_cast<double>(nr - 1);
  }
  [[nodiscard]] double th_at(std::size_t j) const {
    return kTwoPi * static_cast<double>(j) / static_cast<double>(nth);
  }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return tau[i * nth + (j % nth)]; }

  void validate() const {
    if (nr < 3 || nth < 3) throw error(errc::malformed, "height grid needs at least 3x3 samples");
    if (!(r0 >= 0.0) || !(r1 > r0)) throw error(errc::malformed, "height grid radii must satisfy 0 <= r0 < r1");
    if (tau.size() != nr * nth) throw error(errc::malformed, "height grid size does not match nr * nth");
    for (double v : tau)
      if (!std::isfinite(v)) throw error(errc::malformed, "height grid values must be finite");
  }
};

/// Height function with first partials, either closed-form, a function with
/// central-difference partials, or a tabulated grid.
class HeightField {
 public:
  using Fn = std::function<double(double, double)>;

  static HeightField closed_form(Fn f, Fn f_r, Fn f_th) {
    HeightField h;
    h.f_ = std::move(f);
    h.fr_ = std::move(f_r);
    h.fth_ = std::move(f_th);
    return h;
  }

  /// Partials by central differences with step `step` in both r and theta.
  static HeightField finite_difference(Fn f, double step) {
    if (!(step > 0.0)) throw error(errc::out_of_range, "finite-difference step must be > 0");
    HeightField h;
    h.f_ = f;
    h.fr_ = [f, step](double r, double th) { return (f(r + step, th) - f(r - step, th)) / (2.0 * step); };
    h.fth_ = [f, step](double r, double th) { return (f(r, th + step) - f(r, th - step)) / (2.0 * step); };
    h.step_ = step;
    return h;
  }

  static HeightField tabulated(HeightGrid grid) {
    grid.validate();
    HeightField h;
    h.grid_ = std::move(grid);
    h.build_grid_partials();
    return h;
  }

  /// Tabulate f on an nr x nth grid over [r0, r1].
  static HeightField sample(const Fn& f, double r0, double r1, std::size_t nr, std::size_t nth) {
    HeightGrid g{r0, r1, nr, nth, std::vector<double>(nr * nth)};
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nth; ++j) g.tau[i * nth + j] = f(g.r_at(i), g.th_at(j));
    return tabulated(std::move(g));
  }

  [[nodiscard]] bool is_grid() const { return grid_.has_value(); }
  [[nodiscard]] const std::optional<HeightGrid>& grid() const { return grid_; }
  [[nodiscard]] double step() const { return step_; }

  [[nodiscard]] double value(double r, double th) const { return grid_ ? interp(grid_->tau, r, th) : f_(r, th); }
  [[nodiscard]] double d_r(double r, double th) const { return grid_ ? interp(gr_, r, th) : fr_(r, th); }
  [[nodiscard]] double d_theta(double r, double th) const { return grid_ ? interp(gth_, r, th) : fth_(r, th); }

 private:
  void build_grid_partials() {
    const HeightGrid& g = *grid_;
    const double hr = (g.r1 - g.r0) / static_cast<double>(g.nr - 1);
    const double hth = kTwoPi / static_cast<double>(g.nth);
    gr_.assign(g.tau.size(), 0.0);
    gth_.assign(g.tau.size(), 0.0);
    for (std::size_t i = 0; i < g.nr; ++i) {
      for (std::size_t j = 0; j < g.nth; ++j) {
        double dr;
        if (i == 0) dr = (-3.0 * g.at(0, j) + 4.0 * g.at(1, j) - g.at(2, j)) / (2.0 * hr);
        else if (i + 1 == g.nr) dr = (3.0 * g.at(i, j) - 4.0 * g.at(i - 1, j) + g.at(i - 2, j)) / (2.0 * hr);
        else dr = (g.at(i + 1, j) - g.at(i - 1, j)) / (2.0 * hr);
        gr_[i * g.nth + j] = dr;
        gth_[i * g.nth + j] = (g.at(i, j + 1) - g.at(i, j + g.nth - 1)) / (2.0 * hth);
      }
    }
  }

  // Bilinear in (r, theta), periodic in theta, clamped in r.
  [[nodiscard]] double interp(const std::vector<double>& v, double r, double th) const {
    const HeightGrid& g = *grid_;
    double s = (r - g.r0) / (g.r1 - g.r0) * static_cast<double>(g.nr - 1);
    s = std::clamp(s, 0.0, static_cast<double>(g.nr - 1));
    const auto i = std::min(static_cast<std::size_t>(s), g.nr - 2);
    const double fs = s - static_cast<double>(i);
    const double u = reduce_angle(th) / kTwoPi * static_cast<double>(g.nth);
    const auto j = std::min(static_cast<std::size_t>(u), g.nth - 1);
    const double fu = u - static_cast<double>(j);
    const std::size_t j1 = (j + 1) % g.nth;
    const double a = v[i * g.nth + j] * (1.0 - fu) + v[i * g.nth + j1] * fu;
    const double b = v[(i + 1) * g.nth + j] * (1.0 - fu) + v[(i + 1) * g.nth + j1] * fu;
    return a * (1.0 - fs) + b * fs;
  }

  Fn f_, fr_, fth_;
  double step_ = 0.0;
  std::optional<HeightGrid> grid_;
  std::vector<double> gr_, gth_;
};

// Graph surfaces ---------------------------------------------------------------

/// Closed-form families the library knows how to serialise.
enum class SurfaceFamily { constant, hyperbolic_cap, surgery_complete, surgery_cap, custom, grid };

constexpr std::string_view to_string(SurfaceFamily f) {
  switch (f) {
    case SurfaceFamily::constant: return "constant";
    case SurfaceFamily::hyperbolic_cap: return "hyperbolic-cap";
    case SurfaceFamily::surgery_complete: return "surgery-complete";
    case SurfaceFamily::surgery_cap: return "surgery-cap";
    case SurfaceFamily::custom: return "custom";
    case SurfaceFamily::grid: return "grid";
  }
  return "unknown";
}

struct SurfaceParams {
  SurfaceFamily family = SurfaceFamily::custom;
  double c = 0.0;  // constant height
  double M = 0.0;  // surgery constant
  BoundaryCurve boundary;
};

/// Graph {time = tau(r, theta)} over the disc r <= R (punctured: 0 < r), or
/// over the annulus r_min <= r <= R when r_min > 0.
struct GraphSurface {
  ConeAngle ambient = ConeAngle::btz();
  double radius = 1.0;
  double r_min = 0.0;
  bool punctured = true;
  HeightField field;
  SurfaceParams params;

  [[nodiscard]] bool contains(double r) const {
    if (r > radius || r < r_min) return false;
    return !(punctured && r == 0.0);
  }
  [[nodiscard]] double tau(double r, double th) const { return field.value(r, th); }
  [[nodiscard]] double tau_r(double r, double th) const { return field.d_r(r, th); }
  [[nodiscard]] double tau_theta(double r, double th) const { return field.d_theta(r, th); }
};

inline GraphSurface make_surface(ConeAngle ambient, double R, bool punctured, HeightField field,
                                 SurfaceParams params = {}, double r_min = 0.0) {
  if (!(R > 0.0) || !(r_min >= 0.0) || !(r_min < R)) throw error(errc::out_of_range, "surface radii must satisfy 0 <= r_min < R");
  return GraphSurface{ambient, R, r_min, punctured, std::move(field), std::move(params)};
}

inline GraphSurface constant_surface(double c, double R, bool punctured = true,
                                     ConeAngle ambient = ConeAngle::btz(), double r_min = 0.0) {
  auto zero = [](double, double) { return 0.0; };
  SurfaceParams p;
  p.family = SurfaceFamily::constant;
  p.c = c;
  return make_surface(ambient, R, punctured,
                      HeightField::closed_form([c](double, double) { return c; }, zero, zero), p, r_min);
}

/// tau = (1 + r^2) / (2r), the hyperboloid seen in the BTZ chart.
inline GraphSurface hyperbolic_cap_surface(double R) {
  SurfaceParams p;
  p.family = SurfaceFamily::hyperbolic_cap;
  return make_surface(
      ConeAngle::btz(), R, true,
      HeightField::closed_form([](double r, double) { return (1.0 + r * r) / (2.0 * r); },
                               [](double r, double) { return 0.5 - 0.5 / (r * r); },
                               [](double, double) { return 0.0; }),
      p);
}

inline void require_domain(const GraphSurface& s, double r) {
  if (!s.contains(r)) throw error(errc::out_of_range, "radius outside the surface domain");
}

/// delta = 1 - 2 tau_r - (tau_theta / r)^2 from the first jet of the height.
inline double delta_from_jet(double r, double tau_r, double tau_theta) {
  const double c = tau_theta / r;
  return 1.0 - 2.0 * tau_r - c * c;
}

/// Induced metric in the (dr, dtheta) basis from the first jet. For E_0 this
/// is delta dr^2 + (tau_theta / r dr - r dtheta)^2.
inline Mat2 induced_metric_from_jet(ConeAngle ambient, double r, double tr, double tth) {
  if (ambient.is_btz()) return {{{1.0 - 2.0 * tr, -tth}, {-tth, r * r}}};
  const double k = ambient.ratio();
  return {{{1.0 - tr * tr, -tr * tth}, {-tr * tth, k * k * r * r - tth * tth}}};
}

/// delta at (r, theta), positive iff the graph is spacelike there. E_0 ambient only.
inline double delta(const GraphSurface& s, double r, double th) {
  if (!s.ambient.is_btz()) throw error(errc::precondition, "delta is defined for E_0 surfaces");
  if (!(r > 0.0)) throw error(errc::singular_point, "delta needs r > 0");
  require_domain(s, r);
  return delta_from_jet(r, s.tau_r(r, th), s.tau_theta(r, th));
}

/// Same criterion for a massive ambient: 1 - t_r^2 - (t_theta / (k r))^2 with k = alpha/2pi.
inline double massive_margin(const GraphSurface& s, double r, double th) {
  if (s.ambient.is_btz()) throw error(errc::precondition, "massive_margin needs alpha > 0");
  if (!(r > 0.0)) throw error(errc::singular_point, "spacelike margin needs r > 0");
  require_domain(s, r);
  const double tr = s.tau_r(r, th);
  const double c = s.tau_theta(r, th) / (s.ambient.ratio() * r);
  return 1.0 - tr * tr - c * c;
}

/// delta for E_0 ambients, massive_margin otherwise.
inline double spacelike_margin(const GraphSurface& s, double r, double th) {
  return s.ambient.is_btz() ? delta(s, r, th) : massive_margin(s, r, th);
}

/// Induced metric in the (dr, dtheta) basis.
inline Mat2 induced_metric(const GraphSurface& s, double r, double th) {
  if (!(r > 0.0)) throw error(errc::singular_point, "induced metric needs r > 0");
  require_domain(s, r);
  return induced_metric_from_jet(s.ambient, r, s.tau_r(r, th), s.tau_theta(r, th));
}

/// Length of the polyline through `path` (points (r, theta), theta unwrapped)
/// measured with the induced metric; 5-point Gauss-Legendre on every segment.
inline double surface_length(const GraphSurface& s, const std::vector<std::array<double, 2>>& path) {
  static constexpr std::array<double, 5> nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                  0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.2369268850561891, 0.4786286704993665,
                                                    0.5688888888888889, 0.4786286704993665,
                                                    0.2369268850561891};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dr = path[i + 1][0] - path[i][0];
    const double dth = path[i + 1][1] - path[i][1];
    double seg = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double u = 0.5 * (1.0 + nodes[k]);
      const double r = path[i][0] + u * dr;
      const double th = path[i][1] + u * dth;
      const Mat2 g = induced_metric(s, r, th);
      const double q = g[0][0] * dr * dr + 2.0 * g[0][1] * dr * dth + g[1][1] * dth * dth;
      if (q < 0.0) throw error(errc::precondition, "path direction is not spacelike on the surface");
      seg += weights[k] * std::sqrt(q);
    }
    total += 0.5 * seg;
  }
  return total;
}

/// `segments` pieces with geometric spacing from r_start to r_end at fixed theta.
inline std::vector<std::array<double, 2>> radial_path(double r_start, double r_end, double th,
                                                      std::size_t segments) {
  if (!(r_start > 0.0) || !(r_end > 0.0) || segments < 1)
    throw error(errc::out_of_range, "radial path needs positive radii and >= 1 segment");
  std::vector<std::array<double, 2>> out;
  const double ratio = std::log(r_end / r_start);
  for (std::size_t i = 0; i <= segments; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(segments);
    out.push_back({i == segments ? r_end : r_start * std::exp(u * ratio), th});
  }
  return out;
}

// Grid scans --------------------------------------------------------------------

struct ScanResult {
  double min_value = std::numeric_limits<double>::infinity();
  double r_at = 0.0;
  double theta_at = 0.0;
};

/// Minimum of f(r, theta) over radii x nth equally spaced angles.
template <class F>
ScanResult scan_min(const std::vector<double>& radii, std::size_t nth, F&& f) {
  ScanResult out;
  for (double r : radii) {
    for (std::size_t j = 0; j < nth; ++j) {
      const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(nth);
      const double v = f(r, th);
      if (v < out.min_value) out = {v, r, th};
    }
  }
  return out;
}

inline std::vector<double> log_radii(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = i + 1 == n ? hi : lo * std::pow(hi / lo, u);
  }
  return out;
}

/// n radii equally spaced in (lo, hi], excluding lo.
inline std::vector<double> open_radii(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n);
  return out;
}

/// Radii used for domain-wide scans: log-spaced down to R * 1e-6 near a
/// puncture or the singular line, uniform on annuli.
inline std::vector<double> scan_radii(const GraphSurface& s, std::size_t n) {
  if (s.r_min > 0.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = s.r_min + (s.radius - s.r_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = s.radius;
    return out;
  }
  return log_radii(s.radius * 1e-6, s.radius, n);
}

inline ScanResult min_spacelike_margin(const GraphSurface& s, std::size_t nr = 256, std::size_t nth = 256) {
  return scan_min(scan_radii(s, nr), nth, [&](double r, double th) { return spacelike_margin(s, r, th); });
}

inline ScanResult min_r2_delta(const GraphSurface& s, std::size_t nr = 256, std::size_t nth = 256) {
  return scan_min(scan_radii(s, nr), nth, [&](double r, double th) { return r * r * delta(s, r, th); });
}

inline constexpr double kCertificateFloor = 1e-6;

/// Largest C with delta >= C^2 / r^2 on the scan grid, or none when the grid
/// infimum of r^2 delta is below 1e-6.
inline std::optional<double> completeness_certificate(const GraphSurface& s, std::size_t nr = 256,
                                                      std::size_t nth = 256) {
  if (!s.punctured || s.r_min > 0.0) throw error(errc::precondition, "certificate needs a punctured disc");
  const ScanResult m = min_r2_delta(s, nr, nth);
  if (!(m.min_value >= kCertificateFloor)) return std::nullopt;
  return std::sqrt(m.min_value);
}

/// Whether min_theta tau(r, .) grows without bound as r -> 0, judged on the
/// radii R 2^-k, k = 0..40: the last ten increments must be positive and must
/// not decay geometrically.
inline bool divergence_check(const GraphSurface& s, std::size_t nth = 256) {
  if (!s.punctured || s.r_min > 0.0) throw error(errc::precondition, "divergence check needs a punctured disc");
  std::vector<double> mins;
  for (int k = 0; k <= 40; ++k) {
    const double r = std::ldexp(s.radius, -k);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nth; ++j) m = std::min(m, s.tau(r, kTwoPi * static_cast<double>(j) / static_cast<double>(nth)));
    if (!std::isfinite(m)) return m > 0.0;
    mins.push_back(m);
  }
  const std::size_t n = mins.size();
  for (std::size_t i = n - 10; i < n; ++i)
    if (!(mins[i] - mins[i - 1] > 0.0)) return false;
  const double last = mins[n - 1] - mins[n - 2];
  const double earlier = mins[n - 11] - mins[n - 12];
  return last >= 0.5 * earlier;
}

// Surgery ------------------------------------------------------------------------

struct SurgeryResult {
  GraphSurface surface;
  double M = 0.0;
  double boundary_residual = 0.0;  // max_theta |tau(R, theta) - tau^R(theta)|
};

namespace detail {
inline double boundary_residual(const GraphSurface& s, const BoundaryCurve& b, std::size_t n = 1024) {
  double res = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    res = std::max(res, std::abs(s.tau(s.radius, th) - b(th)));
  }
  return res;
}
}  // namespace detail

/// Punctured complete extension tau = tau^R(theta) + M (1/r - 1/R) with
/// M = 1 + max |d tau^R / d theta|^2. Then r^2 delta = r^2 + 2M - tau^R'^2 > 1.
inline SurgeryResult extend_boundary_complete(const BoundaryCurve& b, double R) {
  if (!(R > 0.0)) throw error(errc::out_of_range, "R must be > 0");
  const double d = b.max_abs_derivative();
  const double M = 1.0 + d * d;
  SurfaceParams p;
  p.family = SurfaceFamily::surgery_complete;
  p.M = M;
  p.boundary = b;
  auto f = [b, M, R](double r, double th) { return b(th) + M * (1.0 / r - 1.0 / R); };
  auto fr = [M](double r, double) { return -M / (r * r); };
  auto fth = [b](double, double th) { return b.derivative(th); };
  SurgeryResult out{make_surface(ConeAngle::btz(), R, true, HeightField::closed_form(f, fr, fth), p), M, 0.0};
  out.boundary_residual = detail::boundary_residual(out.surface, b);
  return out;
}

inline constexpr double kCapMargin = 1e-9;
inline constexpr double kCapMaxM = 0x1p60;

inline GraphSurface cap_surface(const BoundaryCurve& b, double R, double M) {
  SurfaceParams p;
  p.family = SurfaceFamily::surgery_cap;
  p.M = M;
  p.boundary = b;
  const double half = 0.5 * R;
  auto f = [b, M, R, half](double r, double th) {
    if (r <= half) return M / R;
    const double w = (2.0 * r - R) / R;
    return w * w * b(th) + M * (1.0 / r - 1.0 / R);
  };
  auto fr = [b, M, R, half](double r, double th) {
    if (r <= half) return 0.0;
    return 4.0 * (2.0 * r - R) / (R * R) * b(th) - M / (r * r);
  };
  auto fth = [b, R, half](double r, double th) {
    if (r <= half) return 0.0;
    const double w = (2.0 * r - R) / R;
    return w * w * b.derivative(th);
  };
  return make_surface(ConeAngle::btz(), R, false, HeightField::closed_form(f, fr, fth), p);
}

struct CapResult {
  GraphSurface surface;
  double M = 0.0;
  double min_delta = 0.0;              // over the certification grid on (R/2, R]
  double continuity_residual = 0.0;    // at r = R/2
  double boundary_residual = 0.0;
};

/// Unpunctured extension crossing the singular line: the weighted boundary
/// term plus M (1/r - 1/R) on [R/2, R], constant M/R inside. M doubles from 1
/// until delta > 1e-9 on a 512 x 512 grid of (R/2, R] x circle.
inline CapResult extend_boundary_cap(const BoundaryCurve& b, double R, std::size_t grid = 512) {
  if (!(R > 0.0)) throw error(errc::out_of_range, "R must be > 0");
  const std::vector<double> radii = open_radii(0.5 * R, R, grid);
  for (double M = 1.0; M <= kCapMaxM; M *= 2.0) {
    GraphSurface s = cap_surface(b, R, M);
    const ScanResult m = scan_min(radii, grid, [&](double r, double th) { return delta(s, r, th); });
    if (!(m.min_value > kCapMargin)) continue;
    CapResult out{std::move(s), M, m.min_value, 0.0, 0.0};
    const double half = 0.5 * R;
    for (std::size_t j = 0; j < 1024; ++j) {
      const double th = kTwoPi * static_cast<double>(j) / 1024.0;
      const double w = (2.0 * half - R) / R;
      const double outer = w * w * b(th) + M * (1.0 / half - 1.0 / R);
      out.continuity_residual = std::max(out.continuity_residual, std::abs(outer - M / R));
    }
    out.boundary_residual = detail::boundary_residual(out.surface, b);
    return out;
  }
  throw error(errc::certification_failure, "no M <= 2^60 makes the cap spacelike on the grid");
}

/// Joined surface: `inner` over the disc of radius R and `outer` over an
/// annulus starting at R, with matching traces on r = R.
struct CompositeSurface {
  GraphSurface inner;
  GraphSurface outer;
  double trace_residual = 0.0;
  bool inner_spacelike = false;
  bool outer_spacelike = false;
  bool crosses_line = false;
  std::vector<std::array<double, 2>> trace;  // (theta, tau) on r = R
};

inline constexpr double kTraceTol = 1e-9;

inline CompositeSurface assemble_cauchy(const GraphSurface& outer, const GraphSurface& inner,
                                        std::size_t samples = 256) {
  if (!(outer.ambient == inner.ambient)) throw error(errc::mismatch, "pieces live in different ambients");
  if (std::abs(outer.r_min - inner.radius) > kTraceTol * std::max(1.0, inner.radius))
    throw error(errc::mismatch, "outer annulus does not start at the inner radius");
  CompositeSurface out{inner, outer, 0.0, false, false, !inner.punctured, {}};
  const double R = inner.radius;
  for (std::size_t j = 0; j < samples; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
    const double ti = inner.tau(R, th);
    out.trace_residual = std::max(out.trace_residual, std::abs(ti - outer.tau(outer.r_min, th)));
    out.trace.push_back({th, ti});
  }
  if (!(out.trace_residual <= kTraceTol)) throw error(errc::mismatch, "boundary traces differ on r = R");
  out.inner_spacelike = min_spacelike_margin(inner).min_value > 0.0;
  out.outer_spacelike = min_spacelike_margin(outer).min_value > 0.0;
  return out;
}

}  // namespace btz
