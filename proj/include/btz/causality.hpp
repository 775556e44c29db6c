#pragma once

// Causal structure of the model spaces: tangent classes, validation of sampled
// curves, the BTZ decomposition of causal curves, closed-form causal futures and
// a Monte-Carlo volume time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "btz/error.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"

namespace btz {

/// Coordinate vector (d time, d r, d theta).
using CoordVector = std::array<double, 3>;

inline double quadratic(const Mat3& g, const CoordVector& v) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += g(i, j) * v[i] * v[j];
  return s;
}

/// Causal type of the coordinate vector v at radius r > 0. Future orientation
/// is read from the time component. `rel_tol` widens the null band to
/// |q| <= rel_tol * |v|^2.
inline VectorClass tangent_class(ConeAngle alpha, double r, const CoordVector& v, double rel_tol = 0.0) {
  const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  if (n2 == 0.0) return VectorClass::zero;
  const double q = quadratic(metric_at(alpha, r), v);
  const double band = rel_tol * n2;
  if (q > band) return VectorClass::spacelike;
  if (q < -band) return v[0] > 0.0 ? VectorClass::timelike_future : VectorClass::timelike_past;
  return v[0] > 0.0 ? VectorClass::lightlike_future : VectorClass::lightlike_past;
}

// Sampled curves -------------------------------------------------------------------

struct CurveSample {
  double s = 0.0;
  ModelPoint point;
};

/// Samples of a piecewise C^1 curve in one model space, ordered by parameter.
class PiecewiseCurve {
 public:
  PiecewiseCurve() = default;
  explicit PiecewiseCurve(std::vector<CurveSample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) return;
    const ConeAngle a = samples_.front().point.angle;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (!(samples_[i].point.angle == a))
        throw error(errc::malformed, "curve samples use different cone angles");
      if (i > 0 && !(samples_[i].s > samples_[i - 1].s))
        throw error(errc::malformed, "curve parameters must be strictly increasing");
    }
  }

  [[nodiscard]] std::span<const CurveSample> samples() const { return samples_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] bool empty() const { return samples_.empty(); }
  [[nodiscard]] ConeAngle angle() const {
    return samples_.empty() ? ConeAngle::btz() : samples_.front().point.angle;
  }

 private:
  std::vector<CurveSample> samples_;
};

enum class CurveStatus { valid_causal, valid_chronological, violation };

constexpr std::string_view to_string(CurveStatus s) {
  switch (s) {
    case CurveStatus::valid_causal: return "valid-causal";
    case CurveStatus::valid_chronological: return "valid-chronological";
    case CurveStatus::violation: return "violation";
  }
  return "unknown";
}

struct CurveVerdict {
  CurveStatus status = CurveStatus::valid_causal;
  std::size_t segment = 0;  // first failing segment (i -> i+1) when status is violation
};

inline constexpr double kDefaultSecantTol = 1e-9;

namespace detail {

enum class SegmentType { chronological, causal, violation };

// Secant of one segment. Regular segments are judged with the metric at the
// mid-radius; the angle difference is meaningless when an endpoint sits on the
// axis and is dropped.
inline SegmentType classify_segment(const ModelPoint& a, const ModelPoint& b, double rel_tol) {
  const double dt = b.time - a.time;
  const double dr = b.r - a.r;
  if (a.r == 0.0 && b.r == 0.0) {
    if (!(dt > 0.0)) return SegmentType::violation;
    if (!a.angle.singular()) return SegmentType::chronological;
    // the BTZ line is lightlike, massive lines are timelike
    return a.angle.is_btz() ? SegmentType::causal : SegmentType::chronological;
  }
  // future causal curves of E_0 never decrease r
  if (a.angle.is_btz() && dr < 0.0) return SegmentType::violation;
  const double dth = (a.r == 0.0 || b.r == 0.0) ? 0.0 : wrap_pi(b.theta - a.theta);
  const double rm = 0.5 * (a.r + b.r);
  switch (tangent_class(a.angle, rm, {dt, dr, dth}, rel_tol)) {
    case VectorClass::timelike_future: return SegmentType::chronological;
    case VectorClass::lightlike_future: return SegmentType::causal;
    default: return SegmentType::violation;
  }
}

}  // namespace detail

/// Checks every secant of the sampled curve. Regular secants must be future
/// causal (timelike for chronological), singular secants must move forward in
/// time. In E_0 a decrease of r on any segment is a violation.
inline CurveVerdict validate_causal(const PiecewiseCurve& c, double rel_tol = kDefaultSecantTol) {
  const auto s = c.samples();
  bool chronological = true;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    switch (detail::classify_segment(s[i].point, s[i + 1].point, rel_tol)) {
      case detail::SegmentType::violation: return {CurveStatus::violation, i};
      case detail::SegmentType::causal: chronological = false; break;
      case detail::SegmentType::chronological: break;
    }
  }
  return {chronological ? CurveStatus::valid_chronological : CurveStatus::valid_causal, 0};
}

inline bool is_valid(const CurveVerdict& v) { return v.status != CurveStatus::violation; }

struct BtzDecomposition {
  std::vector<CurveSample> singular;  // Delta, on the BTZ line
  std::vector<CurveSample> regular;   // c^0
};

/// Splits a future causal curve of E_0 into its part on the BTZ line followed
/// by its regular part.
inline BtzDecomposition decompose_btz(const PiecewiseCurve& c) {
  if (!c.angle().is_btz()) throw error(errc::precondition, "decompose_btz expects a curve in E_0");
  BtzDecomposition out;
  for (const auto& sample : c.samples()) {
    if (sample.point.r == 0.0) {
      if (!out.regular.empty())
        throw error(errc::malformed, "singular samples after the regular part of the curve");
      out.singular.push_back(sample);
    } else {
      out.regular.push_back(sample);
    }
  }
  if (!is_valid(validate_causal(c))) throw error(errc::precondition, "curve is not future causal");
  return out;
}

// Causal futures ---------------------------------------------------------------

enum class JPlusStatus { in_jplus, on_boundary, outside };

constexpr std::string_view to_string(JPlusStatus s) {
  switch (s) {
    case JPlusStatus::in_jplus: return "in-J+";
    case JPlusStatus::on_boundary: return "on-boundary";
    case JPlusStatus::outside: return "outside";
  }
  return "unknown";
}

/// Position of q relative to J^+(p) for p on the BTZ line:
/// J^+(p) = {tau_q - tau_p >= r_q / 2}. The future singular ray lies in the
/// interior of J^+(p) (though not in I^+(p)); p itself is a boundary point.
inline JPlusStatus btz_causal_future(const ModelPoint& p, const ModelPoint& q, double tol = 1e-12) {
  if (!p.angle.is_btz() || !q.angle.is_btz())
    throw error(errc::precondition, "btz_causal_future works in E_0");
  if (p.r != 0.0) throw error(errc::precondition, "base point must lie on the BTZ line");
  const double dt = q.time - p.time;
  const double scale = tol * (1.0 + std::abs(p.time) + std::abs(q.time) + q.r);
  if (q.r == 0.0) {
    if (std::abs(dt) <= scale) return JPlusStatus::on_boundary;
    return dt > 0.0 ? JPlusStatus::in_jplus : JPlusStatus::outside;
  }
  const double gap = dt - 0.5 * q.r;
  if (std::abs(gap) <= scale) return JPlusStatus::on_boundary;
  return gap > 0.0 ? JPlusStatus::in_jplus : JPlusStatus::outside;
}

/// Length of the shortest path between two points of the Euclidean cone of
/// angle alpha > 0 (through the apex once the opening reaches pi).
inline double cone_distance(ConeAngle alpha, double r1, double th1, double r2, double th2) {
  if (r1 == 0.0) return r2;
  if (r2 == 0.0) return r1;
  const double phi = alpha.ratio() * std::abs(wrap_pi(th2 - th1));
  if (phi >= std::numbers::pi) return r1 + r2;
  return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(phi)));
}

namespace detail {

// Signed margin of y in J^+(x) in E_0, >= 0 iff related. Regular pairs use the
// development into Minkowski space: with a = r_y - r_x and the lift of theta_y
// closest to theta_x, y - x develops to a future causal vector iff
// a >= 0 and 2 a dtau >= a^2 + r_x r_y dtheta^2.
inline double btz_margin(const ModelPoint& x, const ModelPoint& y) {
  const double dt = y.time - x.time;
  if (x.r == 0.0) return y.r == 0.0 ? dt : dt - 0.5 * y.r;
  if (y.r == 0.0) return -1.0;  // regular points never reach the line
  const double a = y.r - x.r;
  if (a < 0.0) return a;
  const double dth = wrap_pi(y.theta - x.theta);
  if (a == 0.0) return dth == 0.0 ? dt : -std::abs(dth);
  return 2.0 * a * dt - a * a - x.r * y.r * dth * dth;
}

}  // namespace detail

/// y in J^+(x) (causal future, including x itself).
inline bool causally_precedes(const ModelPoint& x, const ModelPoint& y) {
  if (!(x.angle == y.angle)) throw error(errc::precondition, "points live in different model spaces");
  if (x.angle.is_btz()) return detail::btz_margin(x, y) >= 0.0;
  return y.time - x.time >= cone_distance(x.angle, x.r, x.theta, y.r, y.theta);
}

/// y in I^+(x). On the BTZ line the future ray of x is causal but not
/// chronological.
inline bool chronologically_precedes(const ModelPoint& x, const ModelPoint& y) {
  if (!(x.angle == y.angle)) throw error(errc::precondition, "points live in different model spaces");
  if (x.angle.is_btz()) {
    if (y.r == 0.0) return false;
    if (x.r != 0.0 && y.r == x.r) return false;
    return detail::btz_margin(x, y) > 0.0;
  }
  return y.time - x.time > cone_distance(x.angle, x.r, x.theta, y.r, y.theta);
}

// Volume time ------------------------------------------------------------------

/// mu = weight3 * (volume of the model metric) + weight1 * (tau-length on the BTZ line).
struct MeasureConfig {
  double weight3 = 1.0;
  double weight1 = 0.0;
  std::size_t samples = 100000;
  /// Draw samples in pairs reflected through the middle time of the slice.
  bool antithetic = true;

  void validate() const {
    if (!(weight3 >= 0.0) || !(weight1 >= 0.0) || !(weight3 + weight1 > 0.0))
      throw error(errc::out_of_range, "measure weights must be >= 0 with positive sum");
    if (samples < 1) throw error(errc::out_of_range, "sample count must be >= 1");
  }
};

struct MeasureEstimate {
  double past = 0.0;    // mu(J^-(p) cap region)
  double future = 0.0;  // mu(J^+(p) cap region)
  std::size_t past_hits = 0;
  std::size_t future_hits = 0;
};

struct VolumeTime {
  double value = 0.0;
  double std_error = 0.0;
  MeasureEstimate measure;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

/// Monte-Carlo volume time T(p) = ln mu(J^-(p)) / mu(J^+(p)) on a bounded tube
/// slice. Samples are drawn once from `seed`, so values at different points
/// share random numbers and inherit the monotonicity of the nested pasts. The
/// BTZ-line part of the measure is one dimensional and computed exactly.
class VolumeTimeEstimator {
 public:
  VolumeTimeEstimator(const TubeRegion& region, const MeasureConfig& cfg, std::uint64_t seed,
                      unsigned workers = 1)
      : region_(region), cfg_(cfg), seed_(seed), workers_(std::max(1u, workers)) {
    cfg_.validate();
    if (!region.bounded()) throw error(errc::precondition, "volume time needs a bounded tube slice");
    group_ = cfg_.antithetic && cfg_.samples >= 2 ? 2 : 1;
    const std::size_t groups = cfg_.samples / group_;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    points_.reserve(groups * group_);
    for (std::size_t i = 0; i < groups; ++i) {
      const double tau = region.time_min + region.length() * unit(rng);
      const double r = region.radius * std::sqrt(unit(rng));
      const double th = reduce_angle(kTwoPi * unit(rng));
      points_.push_back(ModelPoint{region.angle, tau, r, th});
      if (group_ == 2) points_.push_back(ModelPoint{region.angle, region.time_max - (tau - region.time_min), r, th});
    }
    const double base = std::numbers::pi * region.radius * region.radius * region.length();
    volume_ = region.angle.is_btz() ? base : region.angle.ratio() * base;
  }

  [[nodiscard]] double total_volume() const { return volume_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::size_t samples() const { return points_.size(); }

  [[nodiscard]] MeasureEstimate measure(const ModelPoint& p) const { return tally(p).estimate; }

  [[nodiscard]] VolumeTime evaluate(const ModelPoint& p) const {
    const Tally t = tally(p);
    VolumeTime out;
    out.seed = seed_;
    out.samples = points_.size();
    out.measure = t.estimate;
    const MeasureEstimate& m = t.estimate;
    if (!(m.past > 0.0)) throw error(errc::degenerate_measure, "mu(J^-(p)) estimate is 0");
    if (!(m.future > 0.0)) throw error(errc::degenerate_measure, "mu(J^+(p)) estimate is 0");
    out.value = std::log(m.past / m.future);
    // delta method on the group means (a group is one sample or one reflected pair)
    const double n = static_cast<double>(t.groups);
    const double g = static_cast<double>(group_);
    const double ma = t.sa / (g * n), mb = t.sb / (g * n);
    const double den = n > 1.0 ? n - 1.0 : 1.0;
    const double va = (t.saa / (g * g) - n * ma * ma) / den;
    const double vb = (t.sbb / (g * g) - n * mb * mb) / den;
    const double cab = (t.sab / (g * g) - n * ma * mb) / den;
    const double w = cfg_.weight3 * volume_;
    const double var = w * w / n *
                       (va / (m.past * m.past) + vb / (m.future * m.future) - 2.0 * cab / (m.past * m.future));
    out.std_error = std::sqrt(std::max(0.0, var));
    return out;
  }

 private:
  // Integer hit sums over groups, so sharding never changes the result.
  struct Tally {
    MeasureEstimate estimate;
    std::size_t groups = 0;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  };

  struct Sums {
    std::uint64_t a = 0, b = 0, aa = 0, bb = 0, ab = 0;
  };

  [[nodiscard]] Tally tally(const ModelPoint& p) const {
    if (!in_region(region_, p)) throw error(errc::precondition, "point outside the tube slice");
    const std::size_t groups = points_.size() / group_;
    const unsigned w = groups < 20000 ? 1u : workers_;
    std::vector<Sums> partial(w);
    auto work = [&](unsigned k) {
      Sums s;
      for (std::size_t i = k * groups / w; i < (k + 1) * groups / w; ++i) {
        std::uint64_t a = 0, b = 0;
        for (std::size_t j = 0; j < group_; ++j) {
          const ModelPoint& x = points_[i * group_ + j];
          a += causally_precedes(x, p) ? 1 : 0;
          b += causally_precedes(p, x) ? 1 : 0;
        }
        s.a += a;
        s.b += b;
        s.aa += a * a;
        s.bb += b * b;
        s.ab += a * b;
      }
      partial[k] = s;
    };
    if (w == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned k = 0; k < w; ++k) pool.emplace_back(work, k);
    }
    Sums total;
    for (const Sums& s : partial) {
      total.a += s.a;
      total.b += s.b;
      total.aa += s.aa;
      total.bb += s.bb;
      total.ab += s.ab;
    }
    Tally t;
    t.groups = groups;
    t.sa = static_cast<double>(total.a);
    t.sb = static_cast<double>(total.b);
    t.saa = static_cast<double>(total.aa);
    t.sbb = static_cast<double>(total.bb);
    t.sab = static_cast<double>(total.ab);
    MeasureEstimate& m = t.estimate;
    m.past_hits = total.a;
    m.future_hits = total.b;
    const double n = static_cast<double>(points_.size());
    m.past = cfg_.weight3 * volume_ * t.sa / n;
    m.future = cfg_.weight3 * volume_ * t.sb / n;
    if (region_.angle.is_btz() && cfg_.weight1 > 0.0) {
      const auto [lp, lf] = line_lengths(p);
      m.past += cfg_.weight1 * lp;
      m.future += cfg_.weight1 * lf;
    }
    return t;
  }

  // tau-length of the line segments in J^-(p) and J^+(p).
  [[nodiscard]] std::pair<double, double> line_lengths(const ModelPoint& p) const {
    const double a = region_.time_min, b = region_.time_max;
    if (p.r == 0.0) return {p.time - a, b - p.time};
    const double top = std::min(b, p.time - 0.5 * p.r);
    return {std::max(0.0, top - a), 0.0};
  }

  TubeRegion region_;
  MeasureConfig cfg_;
  std::uint64_t seed_;
  unsigned workers_;
  std::size_t group_ = 1;
  double volume_ = 0.0;
  std::vector<ModelPoint> points_;
};

/// One-shot convenience wrapper around VolumeTimeEstimator.
inline VolumeTime volume_time(const TubeRegion& region, const ModelPoint& p, const MeasureConfig& cfg,
                              std::uint64_t seed) {
  return VolumeTimeEstimator(region, cfg, seed).evaluate(p);
}

}  // namespace btz
