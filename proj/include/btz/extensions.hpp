#pragma once

// Tube charts around singular lines, adjoining and removing BTZ lines at chart
// level, and the chain of regions of E_0 built from one singular point.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "btz/causality.hpp"
#include "btz/developing.hpp"
#include "btz/error.hpp"
#include "btz/model_space.hpp"
#include "btz/surfaces.hpp"

namespace btz {

/// Tube {r < R, time in [a, b]} of a model space, with or without its
/// singular line, and the holonomy around the line.
class TubeChart {
 public:
  static TubeChart make(ConeAngle angle, double radius, double time_min, double time_max, bool has_line,
                        Holonomy holonomy) {
    if (!(radius > 0.0)) throw error(errc::out_of_range, "tube radius must be > 0");
    if (std::isnan(time_min) || std::isnan(time_max) || !(time_min < time_max))
      throw error(errc::out_of_range, "tube time interval must satisfy a < b");
    if (has_line && !angle.singular()) throw error(errc::precondition, "a regular cone angle has no singular line");
    if (!holonomy_matches(holonomy, angle))
      throw error(errc::mismatch, "holonomy class does not match the cone angle");
    return TubeChart(angle, radius, time_min, time_max, has_line, std::move(holonomy));
  }

  /// Chart with the standard holonomy of the model space.
  static TubeChart standard(ConeAngle angle, double radius, double time_min, double time_max, bool has_line) {
    return make(angle, radius, time_min, time_max, has_line, Holonomy::of(angle));
  }

  [[nodiscard]] ConeAngle angle() const { return angle_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] double time_min() const { return time_min_; }
  [[nodiscard]] double time_max() const { return time_max_; }
  [[nodiscard]] bool has_singular_line() const { return has_line_; }
  [[nodiscard]] const Holonomy& holonomy() const { return holonomy_; }

  [[nodiscard]] TubeChart with_line(bool has_line) const {
    return make(angle_, radius_, time_min_, time_max_, has_line, holonomy_);
  }
  [[nodiscard]] TubeChart with_holonomy(Holonomy h) const {
    return make(angle_, radius_, time_min_, time_max_, has_line_, std::move(h));
  }

  /// Points of the chart; the axis belongs to it only when the line does.
  [[nodiscard]] bool contains(const ModelPoint& p) const {
    if (!(p.angle == angle_)) return false;
    if (p.r >= radius_ || p.time < time_min_ || p.time > time_max_) return false;
    return p.r > 0.0 || has_line_;
  }

  friend bool operator==(const TubeChart& a, const TubeChart& b) {
    return a.angle_ == b.angle_ && a.radius_ == b.radius_ && a.time_min_ == b.time_min_ &&
           a.time_max_ == b.time_max_ && a.has_line_ == b.has_line_ &&
           a.holonomy_.generator.linear() == b.holonomy_.generator.linear() &&
           a.holonomy_.generator.translation() == b.holonomy_.generator.translation();
  }

 private:
  TubeChart(ConeAngle angle, double radius, double a, double b, bool has_line, Holonomy h)
      : angle_(angle), radius_(radius), time_min_(a), time_max_(b), has_line_(has_line), holonomy_(std::move(h)) {}

  ConeAngle angle_;
  double radius_;
  double time_min_;
  double time_max_;
  bool has_line_;
  Holonomy holonomy_;
};

/// Adds the BTZ line to a regular tube of E_0. Idempotent. Charts whose
/// holonomy is not parabolic cannot receive a BTZ line.
inline TubeChart adjoin_btz(const TubeChart& c) {
  if (c.holonomy().classify().kind != IsometryKind::parabolic || !c.angle().is_btz())
    throw error(errc::not_btz_extendable, "only charts with parabolic holonomy admit a BTZ line");
  return c.with_line(true);
}

struct RemovalResult {
  TubeChart chart;
  SurgeryResult surface;  // complete replacement surface on the punctured disc
};

/// Removes the BTZ line and builds the complete surface extending `boundary`
/// towards the puncture.
inline RemovalResult remove_btz(const TubeChart& c, const BoundaryCurve& boundary) {
  if (!c.has_singular_line() || !c.angle().is_btz())
    throw error(errc::precondition, "remove_btz expects a chart containing a BTZ line");
  return {c.with_line(false), extend_boundary_complete(boundary, c.radius())};
}

/// Conjugates the chart holonomy by the boost of rapidity mu along its fixed line.
inline TubeChart conjugate_holonomy(const TubeChart& c, double mu) {
  return c.with_holonomy({boost_conjugate(c.holonomy().generator, mu)});
}

// Mixed extension chain ------------------------------------------------------------

struct RegionSpacetime {
  std::string name;
  std::function<bool(const ModelPoint&)> contains;
};

/// M0 = {tau < 0, r > 0}, M1 = Reg(E_0) minus J^+(p), M2 = E_0 minus J^+(p),
/// M3 = E_0, with p = (tau = 0, r = 0).
inline std::array<RegionSpacetime, 4> mixed_extension_chain() {
  const ModelPoint p{ConeAngle::btz(), 0.0, 0.0, 0.0};
  auto outside = [p](const ModelPoint& q) { return btz_causal_future(p, q) == JPlusStatus::outside; };
  auto check = [](const ModelPoint& q) {
    if (!q.angle.is_btz()) throw error(errc::precondition, "chain regions live in E_0");
  };
  return {{
      {"M0", [check](const ModelPoint& q) { check(q); return q.time < 0.0 && q.r > 0.0; }},
      {"M1", [check, outside](const ModelPoint& q) { check(q); return q.r > 0.0 && outside(q); }},
      {"M2", [check, outside](const ModelPoint& q) { check(q); return outside(q); }},
      {"M3", [check](const ModelPoint& q) { check(q); return true; }},
  }};
}

/// Membership of q in each of the four regions, in chain order.
inline std::array<bool, 4> chain_membership(const std::array<RegionSpacetime, 4>& chain, const ModelPoint& q) {
  return {chain[0].contains(q), chain[1].contains(q), chain[2].contains(q), chain[3].contains(q)};
}

}  // namespace btz
