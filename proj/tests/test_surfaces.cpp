#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "btz/sampling.hpp"
#include "btz/surfaces.hpp"

namespace {

using namespace btz;
constexpr double kPi = std::numbers::pi;

bool eigen_positive_definite(const Mat2& g) {
  Eigen::Matrix2d m;
  m << g[0][0], g[0][1], g[1][0], g[1][1];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  return es.eigenvalues()(0) > 0.0;
}

GraphSurface closed(ConeAngle a, HeightField::Fn f, HeightField::Fn fr, HeightField::Fn fth, double R = 1.0) {
  return make_surface(a, R, true, HeightField::closed_form(std::move(f), std::move(fr), std::move(fth)));
}

TEST(Delta, Examples) {
  const GraphSurface c = constant_surface(0.4, 1.0);
  EXPECT_EQ(delta(c, 0.3, 1.0), 1.0);
  const GraphSurface cap = hyperbolic_cap_surface(1.0);
  for (double r : {0.01, 0.3, 1.0}) EXPECT_NEAR(delta(cap, r, 0.5), 1.0 / (r * r), 1e-9 / (r * r));
  const GraphSurface lin = closed(ConeAngle::btz(), [](double r, double) { return r; },
                                  [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
  EXPECT_EQ(delta(lin, 0.5, 0.0), -1.0);
  EXPECT_FALSE(positive_definite(induced_metric(lin, 0.5, 0.0)));
}

TEST(Delta, ErrorCodes) {
  const GraphSurface c = constant_surface(0.4, 1.0);
  try {
    (void)delta(c, 0.0, 0.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::singular_point);
  }
  try {
    (void)delta(c, 2.0, 0.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::out_of_range);
  }
  EXPECT_THROW((void)delta(constant_surface(0.0, 1.0, true, ConeAngle(kPi)), 0.5, 0.0), error);
}

TEST(InducedMetric, Examples) {
  const Mat2 c = induced_metric(constant_surface(0.0, 2.0), 1.0, 0.0);
  EXPECT_EQ(c[0][0], 1.0);
  EXPECT_EQ(c[0][1], 0.0);
  EXPECT_EQ(c[1][1], 1.0);
  const Mat2 h = induced_metric(hyperbolic_cap_surface(2.0), 1.0, 0.3);
  EXPECT_NEAR(h[0][0], 1.0, 1e-15);
  EXPECT_NEAR(h[0][1], 0.0, 1e-15);
  EXPECT_NEAR(h[1][1], 1.0, 1e-15);
}

TEST(InducedMetric, DeltaCriterionAgreesWithEigenvalues) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double r = uniform(rng, 0.01, 2.0), tr = uniform(rng, -2, 2), tth = uniform(rng, -2, 2);
    const Mat2 g = induced_metric_from_jet(ConeAngle::btz(), r, tr, tth);
    EXPECT_EQ(delta_from_jet(r, tr, tth) > 0.0, eigen_positive_definite(g));
    EXPECT_EQ(positive_definite(g), eigen_positive_definite(g));
  }
}

TEST(InducedMetric, IsPullbackOfAmbientMetric) {
  // independent oracle: J^T G J with J the embedding (r, th) -> (tau(r, th), r, th)
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const ConeAngle a = i % 2 ? ConeAngle::btz() : ConeAngle(uniform(rng, 0.1, kTwoPi));
    const double r = uniform(rng, 0.05, 2.0), tr = uniform(rng, -2, 2), tth = uniform(rng, -2, 2);
    const Mat3 G = metric_at(a, r);
    Eigen::Matrix3d g;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) g(p, q) = G(p, q);
    Eigen::Matrix<double, 3, 2> j;
    j << tr, tth, 1, 0, 0, 1;
    const Eigen::Matrix2d pb = j.transpose() * g * j;
    const Mat2 ours = induced_metric_from_jet(a, r, tr, tth);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) EXPECT_NEAR(ours[p][q], pb(p, q), 1e-12);
  }
}

TEST(Length, Examples) {
  const GraphSurface c = constant_surface(0.4, 1.0);
  EXPECT_NEAR(surface_length(c, radial_path(1.0, 1e-9, 0.2, 64)), 1.0 - 1e-9, 1e-12);
  std::vector<std::array<double, 2>> circle;
  for (int k = 0; k <= 64; ++k) circle.push_back({0.5, kTwoPi * k / 64.0});
  // polyline in (r, theta) with fixed r is the circle itself
  EXPECT_NEAR(surface_length(c, circle), kPi, 1e-12);
  const GraphSurface cap = hyperbolic_cap_surface(1.0);
  for (double eps : {1e-1, 1e-3, 1e-6})
    EXPECT_NEAR(surface_length(cap, radial_path(1.0, eps, 0.0, 200)), std::log(1.0 / eps), 1e-6);
}

TEST(Length, NonSpacelikePathIsRejected) {
  const GraphSurface lin = closed(ConeAngle::btz(), [](double r, double) { return r; },
                                  [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
  EXPECT_THROW((void)surface_length(lin, radial_path(0.5, 1.0, 0.0, 4)), error);
}

TEST(Certificate, Examples) {
  const auto cap = completeness_certificate(hyperbolic_cap_surface(1.0));
  ASSERT_TRUE(cap.has_value());
  EXPECT_NEAR(*cap, 1.0, 1e-6);
  EXPECT_FALSE(completeness_certificate(constant_surface(0.3, 1.0)).has_value());
  const auto s = completeness_certificate(extend_boundary_complete(BoundaryCurve(0, {0.3}, {0.7}), 1.0).surface);
  ASSERT_TRUE(s.has_value());
  EXPECT_GE(*s, 1.0);
  EXPECT_THROW((void)completeness_certificate(constant_surface(0.3, 1.0, false)), error);
}

TEST(Divergence, Examples) {
  EXPECT_TRUE(divergence_check(hyperbolic_cap_surface(1.0)));
  EXPECT_FALSE(divergence_check(constant_surface(0.3, 1.0)));
  EXPECT_TRUE(divergence_check(extend_boundary_complete(BoundaryCurve::constant(2.0), 1.0).surface));
  // bounded but increasing heights do not count
  const GraphSurface slow = closed(ConeAngle::btz(), [](double r, double) { return -r; },
                                   [](double, double) { return -1.0; }, [](double, double) { return 0.0; });
  EXPECT_FALSE(divergence_check(slow));
}

TEST(BoundaryCurveType, Derivative) {
  const BoundaryCurve b(0.5, {0.2, -0.1}, {0.3});
  for (double th : {0.0, 0.7, 2.5}) {
    const double h = 1e-6;
    EXPECT_NEAR(b.derivative(th), (b(th + h) - b(th - h)) / (2 * h), 1e-8);
  }
  EXPECT_NEAR(BoundaryCurve(0, {}, {1.0}).max_abs_derivative(), 1.0, 1e-12);
  EXPECT_NEAR(BoundaryCurve(0, {0, 0.5}, {}).max_abs_derivative(), 1.0, 1e-12);
  EXPECT_THROW(BoundaryCurve(std::nan(""), {}, {}), error);
}

TEST(SurgeryComplete, ConstantBoundary) {
  const SurgeryResult s = extend_boundary_complete(BoundaryCurve::constant(0.7), 1.0);
  EXPECT_EQ(s.M, 1.0);
  EXPECT_EQ(s.boundary_residual, 0.0);
  for (double r : {0.01, 0.5, 1.0}) {
    EXPECT_NEAR(s.surface.tau(r, 0.3), 0.7 + 1.0 / r - 1.0, 1e-12);
    // delta = 1 - 2 tau_r = 1 + 2 M / r^2
    EXPECT_NEAR(delta(s.surface, r, 0.3), 1.0 + 2.0 / (r * r), 1e-9 / (r * r));
  }
}

TEST(SurgeryComplete, SineBoundary) {
  const SurgeryResult s = extend_boundary_complete(BoundaryCurve(0, {}, {1.0}), 1.0);
  EXPECT_NEAR(s.M, 2.0, 1e-12);
  EXPECT_GT(min_r2_delta(s.surface).min_value, 1.0);
  EXPECT_EQ(s.boundary_residual, 0.0);
}

TEST(SurgeryComplete, RandomBoundariesAreCertified) {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto deg = static_cast<std::size_t>(uniform(rng, 0, 6));
    std::vector<double> a(deg), b(deg);
    for (auto& v : a) v = uniform(rng, -1, 1);
    for (auto& v : b) v = uniform(rng, -1, 1);
    const SurgeryResult s = extend_boundary_complete(BoundaryCurve(uniform(rng, -1, 1), a, b), 1.0);
    EXPECT_GT(min_r2_delta(s.surface, 128, 128).min_value, 1.0);
  }
}

TEST(SurgeryCap, ZeroBoundary) {
  const CapResult c = extend_boundary_cap(BoundaryCurve::constant(0.0), 1.0);
  EXPECT_EQ(c.M, 1.0);
  EXPECT_EQ(c.continuity_residual, 0.0);
  EXPECT_FALSE(c.surface.punctured);
  EXPECT_NEAR(c.surface.tau(0.2, 0.0), 1.0, 1e-15);
  for (double r : {0.6, 0.8, 1.0}) EXPECT_NEAR(delta(c.surface, r, 0.0), 1.0 + 2.0 / (r * r), 1e-12);
  EXPECT_EQ(delta(c.surface, 0.3, 0.0), 1.0);
}

TEST(SurgeryCap, CosineBoundaryDoublingSearch) {
  const CapResult c = extend_boundary_cap(BoundaryCurve(0, {1.0}, {}), 1.0);
  EXPECT_GT(c.min_delta, kCapMargin);
  EXPECT_LT(c.continuity_residual, 1e-12);
  EXPECT_EQ(c.boundary_residual, 0.0);
  // M is the first power of two that works: half of it must fail somewhere
  const GraphSurface half = cap_surface(BoundaryCurve(0, {1.0}, {}), 1.0, 0.5 * c.M);
  const ScanResult m =
      scan_min(open_radii(0.5, 1.0, 512), 512, [&](double r, double th) { return delta(half, r, th); });
  EXPECT_LE(m.min_value, kCapMargin);
}

TEST(Assemble, Examples) {
  const GraphSurface outer = constant_surface(1.0, 2.0, false, ConeAngle::btz(), 1.0);
  const CompositeSurface a = assemble_cauchy(outer, extend_boundary_complete(BoundaryCurve::constant(1.0), 1.0).surface);
  EXPECT_LE(a.trace_residual, kTraceTol);
  EXPECT_TRUE(a.inner_spacelike);
  EXPECT_TRUE(a.outer_spacelike);
  EXPECT_FALSE(a.crosses_line);
  const CompositeSurface b = assemble_cauchy(outer, extend_boundary_cap(BoundaryCurve::constant(1.0), 1.0).surface);
  EXPECT_TRUE(b.crosses_line);
  try {
    (void)assemble_cauchy(outer, extend_boundary_complete(BoundaryCurve::constant(0.0), 1.0).surface);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::mismatch);
  }
}

TEST(GridField, SecondOrderPartials) {
  auto f = [](double r, double th) { return std::sin(2 * r) * std::cos(3 * th) + r * r; };
  auto fr = [](double r, double th) { return 2 * std::cos(2 * r) * std::cos(3 * th) + 2 * r; };
  auto err = [&](std::size_t n) {
    const HeightField h = HeightField::sample(f, 0.5, 1.0, n, 4 * n);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(n - 1);
      e = std::max(e, std::abs(h.d_r(r, 0.0) - fr(r, 0.0)));
    }
    return e;
  };
  EXPECT_NEAR(err(65) / err(129), 4.0, 0.5);
}

TEST(GridField, Validation) {
  HeightGrid g{0.0, 1.0, 3, 3, {0, 0, 0, 0, 0, 0, 0, 0}};
  try {
    (void)HeightField::tabulated(g);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::malformed);
  }
}

TEST(MassiveSurfaces, RadialLengthBound) {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const ConeAngle a(uniform(rng, 0.2, kTwoPi));
    const double c = uniform(rng, -0.9, 0.9);
    const GraphSurface s = closed(a, [c](double r, double) { return c * r; }, [c](double, double) { return c; },
                                  [](double, double) { return 0.0; });
    const double len = surface_length(s, radial_path(1e-3, 1.0, 0.0, 32));
    EXPECT_LE(len, 1.0 - 1e-3 + 1e-12);
    EXPECT_NEAR(len, std::sqrt(1 - c * c) * (1.0 - 1e-3), 1e-12);
    EXPECT_GT(min_spacelike_margin(s, 32, 32).min_value, 0.0);
  }
}

}  // namespace
