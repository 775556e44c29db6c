#pragma once

// Seeded generators and brute-force oracles shared by the verification suites:
// random isometries, random causal curves of E_0, and reachability through a
// grid of causal edges.

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "btz/causality.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"

namespace btz {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

/// rotation * boost * rotation with rapidity in [-max_rapidity, max_rapidity].
inline Mat3 random_lorentz_linear(Rng& rng, double max_rapidity = 2.0) {
  return rotation_t(uniform(rng, 0.0, kTwoPi)) * boost_x(uniform(rng, -max_rapidity, max_rapidity)) *
         rotation_t(uniform(rng, 0.0, kTwoPi));
}

inline LorentzIsometry random_isometry(Rng& rng, double max_rapidity = 2.0) {
  return LorentzIsometry(random_lorentz_linear(rng, max_rapidity),
                         {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)});
}

struct CurveBox {
  double time_min = -0.8;
  double time_max = 0.8;
  double radius = 0.9;
};

/// Future causal curve of E_0 built step by step from the secant condition
/// 2 dtau dr >= dr^2 + r_mid^2 dtheta^2 (with a random surplus). About a third
/// of the curves start with a stretch of the BTZ line. Stays inside `box`.
inline PiecewiseCurve random_btz_causal_curve(Rng& rng, std::size_t steps, const CurveBox& box = {}) {
  const ConeAngle e0 = ConeAngle::btz();
  std::vector<CurveSample> out;
  const double span = box.time_max - box.time_min;
  double tau = box.time_min + uniform(rng, 0.0, 0.3) * span;
  double r = uniform(rng, 0.0, 1.0) < 0.33 ? 0.0 : uniform(rng, 0.0, 0.3) * box.radius;
  double th = uniform(rng, 0.0, kTwoPi);
  const double dt_max = 0.5 * span / static_cast<double>(steps);
  const double dr_max = 0.5 * box.radius / static_cast<double>(steps);
  out.push_back({0.0, ModelPoint::make(e0, tau, r, th)});
  for (std::size_t k = 1; k <= steps; ++k) {
    if (r == 0.0 && uniform(rng, 0.0, 1.0) < 0.4) {
      tau += uniform(rng, 0.1, 1.0) * dt_max;  // stay on the line
    } else {
      const double dr = uniform(rng, 0.05, 1.0) * dr_max;
      const double rm = r + 0.5 * dr;
      // angular part at most dr^2, so the time step stays below dr
      const double dth = r == 0.0 ? 0.0 : uniform(rng, -1.0, 1.0) * dr / rm;
      double need = (dr * dr + rm * rm * dth * dth) / (2.0 * dr);
      need *= 1.0 + 1e-9;
      tau += need + uniform(rng, 0.0, 1.0) * dt_max * 0.2;
      r += dr;
      th += dth;
    }
    out.push_back({static_cast<double>(k), ModelPoint::make(e0, tau, r, th)});
  }
  return PiecewiseCurve(std::move(out));
}

/// Random point of E^{1,2}_alpha in the closed tube {r <= R, time in [a, b]};
/// with probability `axis_prob` on the axis.
inline ModelPoint random_model_point(Rng& rng, ConeAngle alpha, double R, double a, double b, double axis_prob = 0.0) {
  const bool axis = axis_prob > 0.0 && uniform(rng, 0.0, 1.0) < axis_prob;
  return ModelPoint::make(alpha, uniform(rng, a, b), axis ? 0.0 : uniform(rng, 0.0, R), uniform(rng, 0.0, kTwoPi));
}

// Grid reachability ------------------------------------------------------------

/// Uniform (tau, r, theta) lattice of a tube of E_0; every r = 0 node at a
/// given tau is the same point of the singular line.
struct CausalGrid {
  std::size_t nt = 41;
  std::size_t nr = 41;
  std::size_t nth = 17;
  double tau0 = 0.0;
  double hr = 0.05;
  double ht = 0.025;

  [[nodiscard]] std::size_t size() const { return nt * nr * nth; }
  [[nodiscard]] std::size_t index(std::size_t it, std::size_t ir, std::size_t ith) const {
    return (it * nr + ir) * nth + (ir == 0 ? 0 : ith);
  }
  [[nodiscard]] ModelPoint point(std::size_t it, std::size_t ir, std::size_t ith) const {
    return ModelPoint{ConeAngle::btz(), tau0 + ht * static_cast<double>(it), hr * static_cast<double>(ir),
                      ir == 0 ? 0.0 : kTwoPi * static_cast<double>(ith) / static_cast<double>(nth)};
  }
};

/// Nodes reachable from (it0, ir0, ith0) along chains of grid edges whose
/// secants validate_causal accepts. Stencil: dtau in {-1..2}, dr in {-1, 0, 1},
/// dtheta in {-1, 0, 1}; edges out of the line reach every angle.
inline std::vector<char> grid_reachable(const CausalGrid& g, std::size_t it0, std::size_t ir0, std::size_t ith0) {
  std::vector<char> seen(g.size(), 0);
  std::deque<std::array<std::size_t, 3>> queue;
  seen[g.index(it0, ir0, ith0)] = 1;
  queue.push_back({it0, ir0, ir0 == 0 ? 0 : ith0});
  auto edge_ok = [](const ModelPoint& a, const ModelPoint& b) {
    return is_valid(validate_causal(PiecewiseCurve({{0.0, a}, {1.0, b}})));
  };
  while (!queue.empty()) {
    const auto [it, ir, ith] = queue.front();
    queue.pop_front();
    const ModelPoint a = g.point(it, ir, ith);
    for (int dt = -1; dt <= 2; ++dt) {
      const long jt = static_cast<long>(it) + dt;
      if (jt < 0 || jt >= static_cast<long>(g.nt)) continue;
      for (int dr = -1; dr <= 1; ++dr) {
        const long jr = static_cast<long>(ir) + dr;
        if (jr < 0 || jr >= static_cast<long>(g.nr)) continue;
        std::vector<std::size_t> thetas;
        if (jr == 0) {
          thetas = {0};
        } else if (ir == 0) {
          for (std::size_t k = 0; k < g.nth; ++k) thetas.push_back(k);
        } else {
          for (int dth = -1; dth <= 1; ++dth) thetas.push_back((ith + g.nth + dth) % g.nth);
        }
        for (std::size_t jth : thetas) {
          const std::size_t idx = g.index(jt, jr, jth);
          if (seen[idx]) continue;
          const ModelPoint b = g.point(jt, jr, jth);
          if (!edge_ok(a, b)) continue;
          seen[idx] = 1;
          queue.push_back({static_cast<std::size_t>(jt), static_cast<std::size_t>(jr), jth});
        }
      }
    }
  }
  return seen;
}

}  // namespace btz
