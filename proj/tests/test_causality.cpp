#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "btz/causality.hpp"
#include "btz/developing.hpp"
#include "btz/sampling.hpp"

namespace {

using namespace btz;
constexpr double kPi = std::numbers::pi;
const ConeAngle kE0 = ConeAngle::btz();

TEST(TangentClass, Examples) {
  EXPECT_EQ(tangent_class(kE0, 1.0, {1, 0, 0}), VectorClass::lightlike_future);
  EXPECT_EQ(tangent_class(kE0, 1.0, {0.5, 1, 0}), VectorClass::lightlike_future);
  EXPECT_EQ(tangent_class(ConeAngle(kPi), 1.0, {0, 1, 0}), VectorClass::spacelike);
  EXPECT_EQ(tangent_class(kE0, 1.0, {0.4, 1, 0}), VectorClass::spacelike);
  EXPECT_EQ(tangent_class(kE0, 1.0, {1, 1, 0}), VectorClass::timelike_future);
}

PiecewiseCurve radial_null(double theta0) {
  std::vector<CurveSample> s;
  for (int i = 0; i <= 9; ++i) {
    const double u = 0.1 + 0.1 * i;
    s.push_back({u, ModelPoint::make(kE0, u / 2, u, theta0)});
  }
  return PiecewiseCurve(s);
}

PiecewiseCurve line_then_radial() {
  std::vector<CurveSample> s;
  for (int i = 0; i <= 4; ++i) s.push_back({0.25 * i, {kE0, 0.25 * i, 0.0, 0.0}});
  for (int i = 1; i <= 4; ++i) s.push_back({1.0 + 0.25 * i, ModelPoint::make(kE0, 1.0 + 0.125 * i, 0.25 * i, 0.5)});
  return PiecewiseCurve(s);
}

TEST(ValidateCausal, RadialNullCurve) {
  EXPECT_EQ(validate_causal(radial_null(0.7)).status, CurveStatus::valid_causal);
}

TEST(ValidateCausal, LineThenRadialNull) {
  EXPECT_EQ(validate_causal(line_then_radial()).status, CurveStatus::valid_causal);
}

TEST(ValidateCausal, DecreasingRadiusIsViolation) {
  std::vector<CurveSample> s;
  for (int i = 0; i <= 5; ++i) s.push_back({double(i), ModelPoint::make(kE0, 10.0 * i, 1.0 - 0.1 * i, 0.0)});
  const CurveVerdict v = validate_causal(PiecewiseCurve(s));
  EXPECT_EQ(v.status, CurveStatus::violation);
  EXPECT_EQ(v.segment, 0u);
}

TEST(ValidateCausal, LineIsNotReachedFromRegularPoints) {
  const PiecewiseCurve c({{0.0, ModelPoint::make(kE0, 0, 0.5, 0)}, {1.0, ModelPoint::make(kE0, 5, 0, 0)}});
  EXPECT_EQ(validate_causal(c).status, CurveStatus::violation);
}

TEST(ValidateCausal, MassiveLineSegmentsAreChronological) {
  const ConeAngle a(kPi);
  const PiecewiseCurve c({{0.0, {a, 0, 0, 0}}, {1.0, {a, 1, 0, 0}}, {2.0, ModelPoint::make(a, 2, 0.5, 1)}});
  EXPECT_EQ(validate_causal(c).status, CurveStatus::valid_chronological);
  const PiecewiseCurve back({{0.0, {a, 1, 0, 0}}, {1.0, {a, 0, 0, 0}}});
  EXPECT_EQ(validate_causal(back).status, CurveStatus::violation);
}

TEST(PiecewiseCurveType, Malformed) {
  try {
    PiecewiseCurve bad({{1.0, {kE0, 0, 0, 0}}, {0.5, {kE0, 1, 0, 0}}});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::malformed);
  }
  EXPECT_THROW(PiecewiseCurve({{0.0, {kE0, 0, 0, 0}}, {1.0, {ConeAngle(kPi), 1, 0, 0}}}), error);
}

TEST(DecomposeBtz, Examples) {
  const auto mixed = decompose_btz(line_then_radial());
  EXPECT_EQ(mixed.singular.size(), 5u);
  EXPECT_EQ(mixed.regular.size(), 4u);
  EXPECT_GT(mixed.regular.front().point.r, 0.0);

  const auto regular = decompose_btz(radial_null(0.0));
  EXPECT_TRUE(regular.singular.empty());
  EXPECT_EQ(regular.regular.size(), 10u);

  const PiecewiseCurve on_line({{0.0, {kE0, 0, 0, 0}}, {1.0, {kE0, 1, 0, 0}}});
  const auto line = decompose_btz(on_line);
  EXPECT_EQ(line.singular.size(), 2u);
  EXPECT_TRUE(line.regular.empty());
}

TEST(DecomposeBtz, ErrorCodes) {
  const PiecewiseCurve back({{0.0, ModelPoint::make(kE0, 0, 0.5, 0)}, {1.0, {kE0, 1, 0, 0}}});
  try {
    (void)decompose_btz(back);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::malformed);
  }
  const PiecewiseCurve down({{0.0, ModelPoint::make(kE0, 0, 0.5, 0)}, {1.0, ModelPoint::make(kE0, 1, 0.2, 0)}});
  try {
    (void)decompose_btz(down);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::precondition);
  }
}

TEST(BtzCausalFuture, Examples) {
  const ModelPoint p{kE0, 0, 0, 0};
  EXPECT_EQ(btz_causal_future(p, ModelPoint::make(kE0, 1.0, 1.0, 2.0)), JPlusStatus::in_jplus);
  EXPECT_EQ(btz_causal_future(p, ModelPoint::make(kE0, 0.4, 1.0, 2.0)), JPlusStatus::outside);
  EXPECT_EQ(btz_causal_future(p, ModelPoint::make(kE0, 0.5, 1.0, 2.0)), JPlusStatus::on_boundary);
  EXPECT_EQ(btz_causal_future(p, {kE0, 0.3, 0, 0}), JPlusStatus::in_jplus);
  EXPECT_EQ(btz_causal_future(p, {kE0, -0.3, 0, 0}), JPlusStatus::outside);
  EXPECT_THROW((void)btz_causal_future(ModelPoint::make(kE0, 0, 1, 0), p), error);
}

TEST(BtzCausalFuture, BoundaryCurvesAreValidNullCurves) {
  // the curves (s/2, s, theta) sweep the boundary and validate as causal
  const ModelPoint p{kE0, 0, 0, 0};
  const PiecewiseCurve c = radial_null(1.3);
  for (const auto& s : c.samples())
    EXPECT_EQ(btz_causal_future(p, s.point), JPlusStatus::on_boundary);
}

// Regular points of E_0: the universal cover develops isometrically onto the
// half space {t - x > 0}, which is causally convex, so the relation is the
// Minkowski relation between developed lifts.
bool minkowski_oracle(const ModelPoint& x, const ModelPoint& y) {
  const LorentzVector u = develop_btz({x.time, x.r, x.theta});
  for (int k = -2; k <= 2; ++k) {
    const LorentzVector v = develop_btz({y.time, y.r, y.theta + k * kTwoPi});
    if (minkowski_causal(u, v) != CausalRelation::none) return true;
  }
  return false;
}

TEST(CausallyPrecedes, RegularPointsMatchMinkowskiOracle) {
  Rng rng(31);
  std::size_t related = 0, compared = 0;
  for (int i = 0; i < 20000; ++i) {
    const ModelPoint x = ModelPoint::make(kE0, uniform(rng, -1, 1), uniform(rng, 0.05, 1.0), uniform(rng, 0, kTwoPi));
    const ModelPoint y = ModelPoint::make(kE0, uniform(rng, -1, 1), uniform(rng, 0.05, 1.0), uniform(rng, 0, kTwoPi));
    const double margin = detail::btz_margin(x, y);
    if (std::abs(margin) < 1e-9) continue;  // leave exact boundary cases to rounding
    ++compared;
    const bool ours = causally_precedes(x, y);
    related += ours ? 1 : 0;
    EXPECT_EQ(ours, minkowski_oracle(x, y)) << x.time << ' ' << x.r << ' ' << x.theta << " -> " << y.time << ' '
                                            << y.r << ' ' << y.theta;
  }
  EXPECT_GT(related, compared / 20);
}

TEST(CausallyPrecedes, ConstructiveWitnessForRelatedRegularPoints) {
  // related pairs are joined by the developed straight segment, pulled back
  // and sampled finely; it must validate as a causal curve
  Rng rng(37);
  int witnessed = 0;
  for (int i = 0; i < 4000 && witnessed < 200; ++i) {
    const ModelPoint x = ModelPoint::make(kE0, uniform(rng, -1, 0), uniform(rng, 0.05, 0.5), uniform(rng, 0, kTwoPi));
    const ModelPoint y = ModelPoint::make(kE0, uniform(rng, 0, 1), uniform(rng, 0.5, 1.0), uniform(rng, 0, kTwoPi));
    if (!causally_precedes(x, y)) continue;
    const LorentzVector u = develop_btz({x.time, x.r, x.theta});
    const LorentzVector v = develop_btz({y.time, y.r, x.theta + wrap_pi(y.theta - x.theta)});
    std::vector<CurveSample> s;
    for (int k = 0; k <= 400; ++k) {
      const double f = k / 400.0;
      const CoverPoint c = undevelop_btz(u + f * (v - u));
      s.push_back({f, ModelPoint::make(kE0, c.time, c.r, c.theta)});
    }
    EXPECT_TRUE(is_valid(validate_causal(PiecewiseCurve(s), 1e-6)));
    ++witnessed;
  }
  EXPECT_EQ(witnessed, 200);
}

TEST(CausallyPrecedes, LinePointsAndRays) {
  const ModelPoint p{kE0, 0, 0, 0};
  EXPECT_TRUE(causally_precedes(p, {kE0, 1, 0, 0}));
  EXPECT_FALSE(chronologically_precedes(p, {kE0, 1, 0, 0}));
  EXPECT_TRUE(chronologically_precedes(p, ModelPoint::make(kE0, 1, 1, 0)));
  EXPECT_FALSE(causally_precedes(ModelPoint::make(kE0, 0, 1, 0), {kE0, 5, 0, 0}));
}

TEST(ConeDistance, ReducesToEuclideanForRegularAngle) {
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const double r1 = uniform(rng, 0, 2), r2 = uniform(rng, 0, 2), t1 = uniform(rng, 0, kTwoPi),
                 t2 = uniform(rng, 0, kTwoPi);
    const double e = std::hypot(r1 * std::cos(t1) - r2 * std::cos(t2), r1 * std::sin(t1) - r2 * std::sin(t2));
    EXPECT_NEAR(cone_distance(ConeAngle::regular(), r1, t1, r2, t2), e, 1e-12);
  }
}

TEST(ConeDistance, MetricProperties) {
  Rng rng(43);
  for (int i = 0; i < 1000; ++i) {
    const ConeAngle a(uniform(rng, 0.1, kTwoPi));
    const double r[3] = {uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2)};
    const double t[3] = {uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi)};
    const double d01 = cone_distance(a, r[0], t[0], r[1], t[1]);
    EXPECT_NEAR(d01, cone_distance(a, r[1], t[1], r[0], t[0]), 1e-12);
    EXPECT_LE(d01, cone_distance(a, r[0], t[0], r[2], t[2]) + cone_distance(a, r[2], t[2], r[1], t[1]) + 1e-12);
    EXPECT_LE(d01, r[0] + r[1] + 1e-12);
  }
  // on the cone of angle pi, coordinate angle pi unfolds to a quarter turn
  EXPECT_NEAR(cone_distance(ConeAngle(kPi), 1.0, 0.0, 1.0, kPi), std::sqrt(2.0), 1e-15);
  // unfolded separation above pi: the path goes through the apex
  EXPECT_DOUBLE_EQ(cone_distance(ConeAngle(3 * kPi), 1.0, 0.0, 2.0, kPi), 3.0);
}

TEST(VolumeTime, DegenerateAtLinePointWithoutLineWeight) {
  const TubeRegion reg = TubeRegion::make(kE0, 1.0, -1.0, 1.0);
  MeasureConfig cfg;
  cfg.samples = 20000;
  const VolumeTimeEstimator est(reg, cfg, 1);
  const ModelPoint p{kE0, 0, 0, 0};
  EXPECT_EQ(est.measure(p).past, 0.0);
  try {
    (void)est.evaluate(p);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_measure);
  }
}

TEST(VolumeTime, LineWeightMakesLineValuesIncrease) {
  const TubeRegion reg = TubeRegion::make(kE0, 1.0, -1.0, 1.0);
  MeasureConfig cfg;
  cfg.samples = 20000;
  cfg.weight1 = 1.0;
  const VolumeTimeEstimator est(reg, cfg, 1);
  const double a = est.evaluate({kE0, -0.5, 0, 0}).value, b = est.evaluate({kE0, 0, 0, 0}).value,
               c = est.evaluate({kE0, 0.5, 0, 0}).value;
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(VolumeTime, SymmetricPointOfMassiveTube) {
  const ConeAngle a(kPi);
  const TubeRegion reg = TubeRegion::make(a, 1.0, -1.0, 1.0);
  MeasureConfig cfg;
  cfg.samples = 20000;
  const VolumeTime v = volume_time(reg, ModelPoint::make(a, 0, 0.3, 1), cfg, 5);
  EXPECT_LE(std::abs(v.value), 3.0 / std::sqrt(20000.0));
}

TEST(VolumeTime, MeasureAgainstClosedFormInMinkowski) {
  // p at the center of a regular slice of half height 1 and radius 1: the
  // past is a unit cone of volume pi / 3; the slice has volume 2 pi
  const ConeAngle a = ConeAngle::regular();
  const TubeRegion reg = TubeRegion::make(a, 1.0, -1.0, 1.0);
  MeasureConfig cfg;
  cfg.samples = 400000;
  const VolumeTimeEstimator est(reg, cfg, 9);
  const MeasureEstimate m = est.measure({a, 0, 0, 0});
  const double expected = kPi / 3.0;
  const double p = expected / (2 * kPi);
  const double se = 2 * kPi * std::sqrt(p * (1 - p) / 400000.0);
  EXPECT_NEAR(m.past, expected, 4 * se);
  EXPECT_DOUBLE_EQ(m.past, m.future);
}

TEST(VolumeTime, ShardingDoesNotChangeResult) {
  const TubeRegion reg = TubeRegion::make(kE0, 1.0, -1.0, 1.0);
  MeasureConfig cfg;
  cfg.samples = 100000;
  cfg.weight1 = 0.5;
  const ModelPoint p = ModelPoint::make(kE0, 0.1, 0.3, 2.0);
  const VolumeTime one = VolumeTimeEstimator(reg, cfg, 3, 1).evaluate(p);
  const VolumeTime four = VolumeTimeEstimator(reg, cfg, 3, 4).evaluate(p);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(VolumeTime, ErrorCodes) {
  MeasureConfig cfg;
  cfg.weight3 = 0.0;
  EXPECT_THROW(cfg.validate(), error);
  const TubeRegion unbounded{kE0, 1.0};
  EXPECT_THROW(VolumeTimeEstimator(unbounded, MeasureConfig{}, 1), error);
  const TubeRegion reg = TubeRegion::make(kE0, 1.0, -1.0, 1.0);
  EXPECT_THROW((void)volume_time(reg, {kE0, 2.0, 0, 0}, MeasureConfig{}, 1), error);
}

}  // namespace
