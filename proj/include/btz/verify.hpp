#pragma once

// Verification suites run by the command-line tool. Each check records a
// residual against a tolerance; qualitative checks record pass/fail only.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "btz/causality.hpp"
#include "btz/developing.hpp"
#include "btz/extensions.hpp"
#include "btz/lorentz.hpp"
#include "btz/model_space.hpp"
#include "btz/modular.hpp"
#include "btz/sampling.hpp"
#include "btz/surfaces.hpp"

namespace btz::verify {

struct ReportRecord {
  std::string suite;
  std::string check;
  bool pass = false;
  std::optional<double> residual;
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  double millis = 0.0;
  std::string note;
};

struct Options {
  std::uint64_t seed = 7;
  std::optional<double> tol;  // replaces every default tolerance when set
  std::size_t grid = 256;     // surface scan resolution
  std::size_t mc_samples = 200000;
};

struct Outcome {
  bool pass = false;
  std::optional<double> residual;
  std::optional<double> tolerance;
  std::string note;
};

class Recorder {
 public:
  Recorder(std::string suite, const Options& opt, std::vector<ReportRecord>& out)
      : suite_(std::move(suite)), opt_(opt), out_(out) {}

  [[nodiscard]] double tol(double default_tol) const { return opt_.tol.value_or(default_tol); }
  [[nodiscard]] const Options& options() const { return opt_; }

  /// Runs one check with its own generator derived from the seed and the
  /// check position, so checks do not depend on each other.
  void run(const std::string& name, const std::function<Outcome(Rng&)>& body) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt_.seed), static_cast<std::uint32_t>(opt_.seed >> 32),
                      static_cast<std::uint32_t>(index_++), static_cast<std::uint32_t>(std::hash<std::string>{}(suite_))};
    Rng rng(seq);
    const auto t0 = std::chrono::steady_clock::now();
    ReportRecord rec{suite_, name, false, {}, {}, opt_.seed, 0.0, {}};
    try {
      const Outcome o = body(rng);
      rec.pass = o.pass;
      rec.residual = o.residual;
      rec.tolerance = o.tolerance;
      rec.note = o.note;
    } catch (const std::exception& e) {
      rec.pass = false;
      rec.note = std::string("exception: ") + e.what();
    }
    rec.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out_.push_back(std::move(rec));
  }

 private:
  std::string suite_;
  const Options& opt_;
  std::vector<ReportRecord>& out_;
  std::size_t index_ = 0;
};

inline Outcome within(double residual, double tolerance) { return {residual <= tolerance, residual, tolerance, {}}; }
inline Outcome flag(bool ok, std::string note = {}) { return {ok, std::nullopt, std::nullopt, std::move(note)}; }

template <class F>
bool throws_code(errc code, F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code() == code;
  }
  return false;
}

// Suites ---------------------------------------------------------------------------

inline void lorentz_suite(Recorder& rec) {
  rec.run("q_form examples", [&](Rng&) {
    const double res = std::max({std::abs(q_form({1, 0, 0}) + 1.0), std::abs(q_form({1, 1, 0})),
                                 std::abs(q_form({3, 4, 0}) - 7.0)});
    return within(res, rec.tol(1e-15));
  });
  rec.run("q_form invariance under isometries", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const LorentzIsometry g(random_lorentz_linear(rng));
      const LorentzVector u{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
      res = std::max(res, std::abs(q_form(g.apply(u)) - q_form(u)));
    }
    return within(res, rec.tol(1e-9));
  });
  rec.run("classification is conjugation invariant", [&](Rng& rng) {
    double res = 0.0;
    bool kinds = true;
    for (int i = 0; i < 500; ++i) {
      const Mat3 h = random_lorentz_linear(rng, 1.0);
      const LorentzIsometry H(h);
      const double a = uniform(rng, 0.2, 2.9), mu = uniform(rng, 0.2, 2.0);
      for (const Mat3& g : {rotation_t(a), boost_y(mu), null_rotation(uniform(rng, -3, 3))}) {
        const IsometryClass c0 = classify_isometry(LorentzIsometry(g));
        const IsometryClass c1 = classify_isometry(H * LorentzIsometry(g) * H.inverse());
        kinds = kinds && c0.kind == c1.kind;
        res = std::max({res, std::abs(c0.angle - c1.angle), std::abs(c0.lambda - c1.lambda)});
      }
    }
    Outcome o = within(res, rec.tol(1e-9));
    o.pass = o.pass && kinds;
    return o;
  });
  rec.run("classification examples", [&](Rng&) {
    const IsometryClass e = classify_isometry(LorentzIsometry(rotation_t(std::numbers::pi)));
    const IsometryClass h = classify_isometry(LorentzIsometry(boost_x(1.0)));
    const IsometryClass p = classify_isometry(btz_holonomy_generator());
    const double res = std::max({std::abs(e.angle - std::numbers::pi), std::abs(e.trace + 1.0),
                                 std::abs(h.lambda - std::exp(1.0)), std::abs(h.trace - 1.0 - 2.0 * std::cosh(1.0)),
                                 std::abs(p.trace - 3.0)});
    Outcome o = within(res, rec.tol(1e-12));
    o.pass = o.pass && e.kind == IsometryKind::elliptic && h.kind == IsometryKind::hyperbolic &&
             p.kind == IsometryKind::parabolic;
    return o;
  });
  rec.run("negation swaps time orientation", [&](Rng& rng) {
    auto swapped = [](VectorClass c) {
      switch (c) {
        case VectorClass::timelike_future: return VectorClass::timelike_past;
        case VectorClass::timelike_past: return VectorClass::timelike_future;
        case VectorClass::lightlike_future: return VectorClass::lightlike_past;
        case VectorClass::lightlike_past: return VectorClass::lightlike_future;
        default: return c;
      }
    };
    bool ok = true;
    for (int i = 0; i < 10000; ++i) {
      const LorentzVector u{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
      ok = ok && classify_vector(-u) == swapped(classify_vector(u));
    }
    ok = ok && classify_vector({-1, 1, 0}) == VectorClass::lightlike_past;
    return flag(ok);
  });
  rec.run("hyperboloid embedding lies on q = -1", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double rad = 0.99 * std::sqrt(uniform(rng, 0, 1)), a = uniform(rng, 0, kTwoPi);
      res = std::max(res, std::abs(q_form(hyperboloid_embed(rad * std::cos(a), rad * std::sin(a))) + 1.0));
    }
    return within(res, rec.tol(1e-12));
  });
}

inline void model_suite(Recorder& rec) {
  rec.run("metric examples", [&](Rng&) {
    Mat3 btz2;
    btz2.m = {{{0, -1, 0}, {-1, 1, 0}, {0, 0, 4}}};
    const double res = std::max({max_abs_diff(metric_at(ConeAngle::regular(), 1.0), Mat3::diag(-1, 1, 1)),
                                 max_abs_diff(metric_at(ConeAngle::btz(), 2.0), btz2),
                                 max_abs_diff(metric_at(ConeAngle(std::numbers::pi), 1.0), Mat3::diag(-1, 1, 0.25))});
    return within(res, rec.tol(1e-15));
  });
  rec.run("omega family endpoints", [&](Rng&) {
    double res = max_abs_diff(omega_metric_at(0.0, 1.0), Mat3::diag(-1, 1, 1));
    for (double r : {0.5, 1.0, 3.0}) res = std::max(res, max_abs_diff(omega_metric_at(1.0, r), metric_at(ConeAngle::btz(), r)));
    return within(res, 0.0);
  });
  rec.run("omega transform pullback", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const ConeAngle a(uniform(rng, 1e-3, 1.0) * kTwoPi);
      const double r = uniform(rng, 0.01, 5.0);
      res = std::max(res, max_abs_diff(OmegaTransform(a).pullback_metric(r), metric_at(a, r)));
    }
    return within(res, rec.tol(1e-9));
  });
  rec.run("omega metric determinant is -r^2", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double w = uniform(rng, -1, 1), r = uniform(rng, 0.01, 5.0);
      res = std::max(res, std::abs(omega_metric_at(w, r).det() + r * r) / (r * r));
    }
    return within(res, rec.tol(1e-12));
  });
  rec.run("circumference law", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const ConeAngle a(uniform(rng, 0.01, 4.0 * std::numbers::pi));
      const double r = uniform(rng, 0.01, 5.0);
      const double len = kTwoPi * std::sqrt(metric_at(a, r)(2, 2));
      res = std::max(res, std::abs(len - a.value() * r));
    }
    return within(res, rec.tol(1e-9));
  });
}

inline void causality_suite(Recorder& rec) {
  rec.run("tangent class examples", [&](Rng&) {
    const bool ok = tangent_class(ConeAngle::btz(), 1.0, {1, 0, 0}) == VectorClass::lightlike_future &&
                    tangent_class(ConeAngle::btz(), 1.0, {0.5, 1, 0}) == VectorClass::lightlike_future &&
                    tangent_class(ConeAngle(std::numbers::pi), 1.0, {0, 1, 0}) == VectorClass::spacelike;
    return flag(ok);
  });
  rec.run("J+ of a line point examples", [&](Rng&) {
    const ModelPoint p{ConeAngle::btz(), 0, 0, 0};
    const bool ok = btz_causal_future(p, {ConeAngle::btz(), 1.0, 1.0, 0.3}) == JPlusStatus::in_jplus &&
                    btz_causal_future(p, {ConeAngle::btz(), 0.4, 1.0, 0.3}) == JPlusStatus::outside &&
                    btz_causal_future(p, {ConeAngle::btz(), 0.5, 1.0, 0.3}) == JPlusStatus::on_boundary;
    return flag(ok);
  });
  rec.run("J+ agrees with grid reachability", [&](Rng&) {
    const CausalGrid g;
    std::size_t disagree = 0;
    for (std::size_t it0 : {0u, 5u, 10u, 20u, 30u}) {
      const auto reach = grid_reachable(g, it0, 0, 0);
      const ModelPoint p = g.point(it0, 0, 0);
      for (std::size_t it = 0; it < g.nt; ++it)
        for (std::size_t ir = 0; ir < g.nr; ++ir)
          for (std::size_t ith = 0; ith < (ir == 0 ? 1 : g.nth); ++ith) {
            const bool in = btz_causal_future(p, g.point(it, ir, ith)) != JPlusStatus::outside;
            if (in != static_cast<bool>(reach[g.index(it, ir, ith)])) ++disagree;
          }
    }
    return within(static_cast<double>(disagree), 0.0);
  });
  rec.run("validated causal curves have non-decreasing r", [&](Rng& rng) {
    std::size_t validated = 0, bad = 0;
    while (validated < 10000) {
      const PiecewiseCurve c = random_btz_causal_curve(rng, 8);
      if (!is_valid(validate_causal(c))) return flag(false, "generated curve rejected");
      ++validated;
      const auto s = c.samples();
      for (std::size_t i = 0; i + 1 < s.size(); ++i) bad += s[i + 1].point.r < s[i].point.r ? 1 : 0;
    }
    return within(static_cast<double>(bad), 0.0);
  });
  rec.run("curve validation examples", [&](Rng&) {
    const ConeAngle e0 = ConeAngle::btz();
    std::vector<CurveSample> radial, mixed, falling;
    for (int i = 0; i <= 9; ++i) {
      const double s = 0.1 + 0.1 * i;
      radial.push_back({s, {e0, s / 2, s, 1.0}});
      falling.push_back({s, {e0, s, 1.1 - s, 1.0}});
    }
    for (int i = 0; i <= 4; ++i) mixed.push_back({0.25 * i, {e0, 0.25 * i, 0.0, 0.0}});
    for (int i = 1; i <= 4; ++i) mixed.push_back({1.0 + 0.25 * i, {e0, 1.0 + 0.125 * i, 0.25 * i, 0.5}});
    const PiecewiseCurve m(mixed);
    const auto d = decompose_btz(m);
    const bool ok = validate_causal(PiecewiseCurve(radial)).status == CurveStatus::valid_causal &&
                    validate_causal(m).status == CurveStatus::valid_causal &&
                    validate_causal(PiecewiseCurve(falling)).status == CurveStatus::violation &&
                    d.singular.size() == 5 && d.regular.size() == 4;
    return flag(ok);
  });
  rec.run("volume time: degenerate at a line point without line weight", [&](Rng&) {
    const TubeRegion reg = TubeRegion::make(ConeAngle::btz(), 1.0, -1.0, 1.0);
    MeasureConfig cfg;
    cfg.samples = rec.options().mc_samples;
    const VolumeTimeEstimator est(reg, cfg, rec.options().seed);
    const ModelPoint p{ConeAngle::btz(), 0.0, 0.0, 0.0};
    const bool ok = est.measure(p).past == 0.0 && throws_code(errc::degenerate_measure, [&] { (void)est.evaluate(p); });
    return flag(ok);
  });
  rec.run("volume time: increasing along the line with line weight", [&](Rng&) {
    const TubeRegion reg = TubeRegion::make(ConeAngle::btz(), 1.0, -1.0, 1.0);
    MeasureConfig cfg;
    cfg.samples = rec.options().mc_samples;
    cfg.weight1 = 1.0;
    const VolumeTimeEstimator est(reg, cfg, rec.options().seed);
    double prev = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double t : {-0.5, 0.0, 0.5}) {
      const double v = est.evaluate({ConeAngle::btz(), t, 0.0, 0.0}).value;
      ok = ok && v > prev;
      prev = v;
    }
    return flag(ok);
  });
  rec.run("volume time: symmetric point of a massive tube", [&](Rng&) {
    const ConeAngle a(std::numbers::pi);
    const TubeRegion reg = TubeRegion::make(a, 1.0, -1.0, 1.0);
    MeasureConfig cfg;
    cfg.samples = rec.options().mc_samples;
    const VolumeTime v = volume_time(reg, {a, 0.0, 0.3, 1.0}, cfg, rec.options().seed);
    return within(std::abs(v.value), 3.0 / std::sqrt(static_cast<double>(cfg.samples)));
  });
  rec.run("volume time monotone along causal curves", [&](Rng& rng) {
    const TubeRegion reg = TubeRegion::make(ConeAngle::btz(), 1.0, -1.0, 1.0);
    MeasureConfig cfg;
    cfg.samples = rec.options().mc_samples;
    cfg.weight1 = 1.0;
    const VolumeTimeEstimator est(reg, cfg, rec.options().seed);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const PiecewiseCurve c = random_btz_causal_curve(rng, 4);
      std::optional<VolumeTime> prev;
      for (const auto& s : c.samples()) {
        const VolumeTime v = est.evaluate(s.point);
        if (prev) {
          const double allowed = 3.0 * std::hypot(prev->std_error, v.std_error);
          worst = std::max(worst, prev->value - v.value - allowed);
        }
        prev = v;
      }
    }
    return within(worst, 0.0);
  });
}

inline void developing_suite(Recorder& rec) {
  auto cover = [](Rng& rng) {
    return CoverPoint::make(uniform(rng, -2, 2), uniform(rng, 0.01, 3.0), uniform(rng, -2 * kTwoPi, 2 * kTwoPi));
  };
  rec.run("BTZ development is isometric (exact Jacobian)", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const CoverPoint p = cover(rng);
      res = std::max(res, pullback_residual(develop_btz_jacobian(p), metric_at(ConeAngle::btz(), p.r)));
    }
    return within(res, rec.tol(1e-9));
  });
  rec.run("massive development is isometric (exact Jacobian)", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const ConeAngle a(uniform(rng, 0.05, 4.0 * std::numbers::pi));
      const CoverPoint p = cover(rng);
      res = std::max(res, pullback_residual(develop_massive_jacobian(a, p), metric_at(a, p.r)));
    }
    return within(res, rec.tol(1e-9));
  });
  rec.run("developments are isometric (finite differences)", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const ConeAngle a(uniform(rng, 0.05, 4.0 * std::numbers::pi));
      const CoverPoint p = CoverPoint::make(uniform(rng, -2, 2), uniform(rng, 0.1, 3.0), uniform(rng, -kTwoPi, kTwoPi));
      res = std::max(res, pullback_residual(numeric_jacobian(develop_btz, p, 1e-4), metric_at(ConeAngle::btz(), p.r)));
      auto fm = [a](const CoverPoint& q) { return develop_massive(a, q); };
      res = std::max(res, pullback_residual(numeric_jacobian(fm, p, 1e-4), metric_at(a, p.r)));
    }
    return within(res, rec.tol(1e-5));
  });
  rec.run("holonomy equivariance", [&](Rng& rng) {
    const LorentzIsometry g = btz_holonomy_generator();
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const CoverPoint p = CoverPoint::make(uniform(rng, -2, 2), uniform(rng, 0.01, 3.0), uniform(rng, -kTwoPi, kTwoPi));
      const ConeAngle a(uniform(rng, 0.05, 4.0 * std::numbers::pi));
      const LorentzIsometry h = massive_holonomy_generator(a);
      const CoverPoint q{p.time, p.r, p.theta + kTwoPi};
      const LorentzVector d1 = develop_btz(q) - g(develop_btz(p));
      const LorentzVector d2 = develop_massive(a, q) - h(develop_massive(a, p));
      res = std::max({res, euclidean_norm(d1), euclidean_norm(d2)});
    }
    return within(res, rec.tol(1e-9));
  });
  rec.run("BTZ holonomy is parabolic fixing (1,1,0)", [&](Rng&) {
    const LorentzIsometry g = btz_holonomy_generator();
    const double res = std::max(std::abs(g.linear().trace() - 3.0), euclidean_norm(g({1, 1, 0}) - LorentzVector{1, 1, 0}));
    Outcome o = within(res, rec.tol(1e-12));
    o.pass = o.pass && classify_isometry(g).kind == IsometryKind::parabolic;
    return o;
  });
  rec.run("image law t - x = r", [&](Rng& rng) {
    double res = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const CoverPoint p = cover(rng);
      const LorentzVector u = develop_btz(p);
      res = std::max(res, std::abs((u.t - u.x) - p.r));
    }
    return within(res, rec.tol(1e-12));
  });
  rec.run("BTZ development is injective on samples", [&](Rng& rng) {
    std::size_t collisions = 0;
    for (int i = 0; i < 10000; ++i) {
      const CoverPoint p = cover(rng), q = cover(rng);
      if (euclidean_norm(develop_btz(p) - develop_btz(q)) == 0.0) ++collisions;
    }
    return within(static_cast<double>(collisions), 0.0);
  });
  rec.run("lambda rescaling", [&](Rng&) {
    const RescaleReport one = rescale_btz(1.0), two = rescale_btz(2.0, {1.0}), third = rescale_btz(1.0 / 3.0, {3.0});
    const double res = std::max({one.residual, two.residual, third.residual, std::abs(two.angular_coefficient[0] - 4.0),
                                 std::abs(third.angular_coefficient[0] * 9.0 - 1.0)});
    return within(res, rec.tol(1e-12));
  });
  rec.run("boost conjugation keeps the parabolic class and fixed line", [&](Rng& rng) {
    const LorentzIsometry g = btz_holonomy_generator();
    double res = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double mu = uniform(rng, -1.5, 1.5);
      const LorentzIsometry c = boost_conjugate(g, mu);
      res = std::max({res, std::abs(c.linear().trace() - 3.0), euclidean_norm(c({1, 1, 0}) - LorentzVector{1, 1, 0}),
                      max_abs_diff(c.linear(), null_rotation(kTwoPi * std::exp(mu)))});
    }
    return within(res, rec.tol(1e-9));
  });
  rec.run("cone chart matching", [&](Rng&) {
    const double pi = std::numbers::pi;
    return flag(match_cone_charts(ConeAngle(pi), ConeAngle(pi)) && !match_cone_charts(ConeAngle(pi), ConeAngle(2 * pi / 3)) &&
                !match_cone_charts(ConeAngle::btz(), ConeAngle(pi)));
  });
}

inline void surfaces_suite(Recorder& rec) {
  const std::size_t grid = rec.options().grid;
  rec.run("delta criterion matches positive definiteness", [&](Rng& rng) {
    std::size_t mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
      const double r = uniform(rng, 0.01, 2.0), tr = uniform(rng, -2, 2), tth = uniform(rng, -2, 2);
      const bool crit = delta_from_jet(r, tr, tth) > 0.0;
      if (crit != positive_definite(induced_metric_from_jet(ConeAngle::btz(), r, tr, tth))) ++mismatches;
    }
    return within(static_cast<double>(mismatches), 0.0);
  });
  rec.run("complete surgery certificates", [&](Rng& rng) {
    double worst = std::numeric_limits<double>::infinity(), boundary = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto deg = static_cast<std::size_t>(uniform(rng, 0, 6));
      std::vector<double> a(deg), b(deg);
      for (auto& v : a) v = uniform(rng, -1, 1);
      for (auto& v : b) v = uniform(rng, -1, 1);
      const SurgeryResult s = extend_boundary_complete(BoundaryCurve(uniform(rng, -1, 1), a, b), 1.0);
      worst = std::min(worst, min_r2_delta(s.surface, grid, grid).min_value);
      boundary = std::max(boundary, s.boundary_residual);
    }
    return Outcome{worst > 1.0 && boundary == 0.0, boundary, 0.0, "min r^2 delta = " + std::to_string(worst)};
  });
  rec.run("cap surgery certificates", [&](Rng& rng) {
    double cont = 0.0;
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      std::vector<double> a(3), b(3);
      for (auto& v : a) v = uniform(rng, -1, 1);
      for (auto& v : b) v = uniform(rng, -1, 1);
      const CapResult c = extend_boundary_cap(BoundaryCurve(uniform(rng, -1, 1), a, b), 1.0);
      cont = std::max(cont, c.continuity_residual);
      ok = ok && c.min_delta > kCapMargin;
    }
    Outcome o = within(cont, rec.tol(1e-12));
    o.pass = o.pass && ok;
    return o;
  });
  rec.run("hyperbolic cap benchmark", [&](Rng& rng) {
    const GraphSurface s = hyperbolic_cap_surface(1.0);
    double res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = uniform(rng, 0.01, 1.0);
      res = std::max(res, std::abs(delta(s, r, uniform(rng, 0, kTwoPi)) - 1.0 / (r * r)) * r * r);
    }
    const auto c = completeness_certificate(s, grid, grid);
    const double len = surface_length(s, radial_path(1.0, 1e-3, 0.0, 400));
    res = std::max({res, c ? std::abs(*c - 1.0) : 1.0, std::abs(len - std::log(1e3))});
    return within(res, rec.tol(1e-6));
  });
  rec.run("constant surfaces are not certified", [&](Rng&) {
    const GraphSurface s = constant_surface(0.5, 1.0);
    return flag(!completeness_certificate(s, grid, grid) && !divergence_check(s));
  });
  rec.run("certified surfaces diverge at the puncture", [&](Rng& rng) {
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
      const SurgeryResult s = extend_boundary_complete(BoundaryCurve(0.0, {uniform(rng, -1, 1)}, {uniform(rng, -1, 1)}), 1.0);
      if (completeness_certificate(s.surface, 64, 64)) ok = ok && divergence_check(s.surface);
    }
    ok = ok && divergence_check(hyperbolic_cap_surface(1.0));
    return flag(ok);
  });
  rec.run("massive radial length bound", [&](Rng& rng) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      const ConeAngle a(uniform(rng, 0.1, kTwoPi));
      const double c1 = uniform(rng, -0.6, 0.6), c2 = uniform(rng, -0.4, 0.4);  // keeps |d_r t| < 1
      const GraphSurface s = make_surface(
          a, 1.0, true,
          HeightField::closed_form([c1, c2](double r, double th) { return c1 * r + c2 * r * r * std::cos(th) * 0.4; },
                                   [c1, c2](double r, double th) { return c1 + 0.8 * c2 * r * std::cos(th); },
                                   [c2](double r, double th) { return -0.4 * c2 * r * r * std::sin(th); }));
      const double th = uniform(rng, 0, kTwoPi);
      worst = std::max(worst, surface_length(s, radial_path(1e-3, 1.0, th, 64)) - (1.0 - 1e-3));
    }
    return within(std::max(worst, 0.0), 0.0);
  });
  rec.run("BTZ radial length bound", [&](Rng& rng) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      const double c = uniform(rng, -1, 1), a = uniform(rng, -0.4, 0.4), b = uniform(rng, -0.4, 0.4);
      const GraphSurface s = make_surface(
          ConeAngle::btz(), 1.0, true,
          HeightField::closed_form([=](double r, double th) { return c + r * (a * std::cos(th) + b * std::sin(th)); },
                                   [=](double, double th) { return a * std::cos(th) + b * std::sin(th); },
                                   [=](double r, double th) { return r * (b * std::cos(th) - a * std::sin(th)); }));
      const double th = uniform(rng, 0, kTwoPi);
      const double bound = 2.0 - 2.0 * (s.tau(1.0, th) - s.tau(1e-12, th));
      worst = std::max(worst, surface_length(s, radial_path(1e-3, 1.0, th, 64)) - bound);
    }
    return within(std::max(worst, 0.0), 0.0);
  });
  rec.run("finite-difference partials converge at second order", [&](Rng&) {
    auto f = [](double r, double th) { return std::sin(2.0 * r) * std::cos(3.0 * th) + r * r; };
    auto fr = [](double r, double th) { return 2.0 * std::cos(2.0 * r) * std::cos(3.0 * th) + 2.0 * r; };
    const double h = 1.0 / 64.0;
    const HeightField a = HeightField::finite_difference(f, h), b = HeightField::finite_difference(f, h / 2);
    double ea = 0.0, eb = 0.0;
    for (int i = 1; i < 50; ++i) {
      const double r = 0.02 * i, th = 0.1 * i;
      ea = std::max(ea, std::abs(a.d_r(r, th) - fr(r, th)));
      eb = std::max(eb, std::abs(b.d_r(r, th) - fr(r, th)));
    }
    const double ratio = ea / eb;
    return Outcome{ratio > 3.5 && ratio < 4.5, std::abs(ratio - 4.0), 0.5, "error ratio " + std::to_string(ratio)};
  });
  rec.run("assembly of surgery pieces", [&](Rng&) {
    const GraphSurface outer = constant_surface(1.0, 2.0, false, ConeAngle::btz(), 1.0);
    const CompositeSurface a = assemble_cauchy(outer, extend_boundary_complete(BoundaryCurve::constant(1.0), 1.0).surface);
    const CompositeSurface b = assemble_cauchy(outer, extend_boundary_cap(BoundaryCurve::constant(1.0), 1.0).surface);
    const bool mismatch = throws_code(errc::mismatch, [&] {
      (void)assemble_cauchy(outer, extend_boundary_complete(BoundaryCurve::constant(2.0), 1.0).surface);
    });
    return flag(a.inner_spacelike && a.outer_spacelike && !a.crosses_line && b.crosses_line && b.inner_spacelike && mismatch);
  });
}

inline void extensions_suite(Recorder& rec) {
  rec.run("mixed extension chain is monotone", [&](Rng& rng) {
    const auto chain = mixed_extension_chain();
    std::size_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto m = chain_membership(chain, random_model_point(rng, ConeAngle::btz(), 2.0, -2.0, 2.0, 0.2));
      for (int k = 0; k < 3; ++k) bad += (m[k] && !m[k + 1]) ? 1 : 0;
    }
    return within(static_cast<double>(bad), 0.0);
  });
  rec.run("mixed extension chain examples", [&](Rng&) {
    const auto chain = mixed_extension_chain();
    const ConeAngle e0 = ConeAngle::btz();
    const bool ok = chain_membership(chain, {e0, -1, 0, 0}) == std::array<bool, 4>{false, false, true, true} &&
                    chain_membership(chain, {e0, -1, 1, 0}) == std::array<bool, 4>{true, true, true, true} &&
                    chain_membership(chain, {e0, 1, 1, 0}) == std::array<bool, 4>{false, false, false, true};
    return flag(ok);
  });
  rec.run("adjoin is idempotent and commutes with boost conjugation", [&](Rng& rng) {
    const TubeChart c = TubeChart::standard(ConeAngle::btz(), 1.0, 0.0, 1.0, false);
    bool ok = adjoin_btz(adjoin_btz(c)) == adjoin_btz(c) && adjoin_btz(c).has_singular_line();
    for (int i = 0; i < 20; ++i) {
      const double mu = uniform(rng, -1, 1);
      const TubeChart x = adjoin_btz(conjugate_holonomy(c, mu)), y = conjugate_holonomy(adjoin_btz(c), mu);
      ok = ok && max_abs_diff(x.holonomy().generator.linear(), y.holonomy().generator.linear()) == 0.0 &&
           x.has_singular_line() == y.has_singular_line();
    }
    return flag(ok);
  });
  rec.run("massive charts cannot gain a BTZ line", [&](Rng&) {
    const TubeChart c = TubeChart::standard(ConeAngle(std::numbers::pi), 1.0, 0.0, 1.0, false);
    return flag(throws_code(errc::not_btz_extendable, [&] { (void)adjoin_btz(c); }));
  });
  rec.run("removal yields certified complete surfaces", [&](Rng& rng) {
    const TubeChart c = TubeChart::standard(ConeAngle::btz(), 1.0, 0.0, 1.0, true);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const RemovalResult r = remove_btz(c, BoundaryCurve(uniform(rng, 0, 2), {uniform(rng, -1, 1)}, {uniform(rng, -1, 1)}));
      const auto cert = completeness_certificate(r.surface.surface, 128, 128);
      worst = std::min(worst, cert ? *cert : 0.0);
      if (r.chart.has_singular_line() || !(adjoin_btz(r.chart) == c)) return flag(false, "round trip failed");
    }
    const bool pre = throws_code(errc::precondition, [&] { (void)remove_btz(c.with_line(false), BoundaryCurve::constant(1)); });
    return Outcome{worst >= 1.0 && pre, worst, 1.0, "smallest certificate"};
  });
}

inline void modular_suite(Recorder& rec) {
  rec.run("generator relations", [&](Rng&) {
    const auto g = psl2z_representation();
    const LorentzIsometry st = g.S * g.T;
    const double res = std::max({max_abs_diff((g.S * g.S).linear(), Mat3::identity()),
                                 max_abs_diff((st * st * st).linear(), Mat3::identity()),
                                 euclidean_norm(g.T({1, 1, 0}) - LorentzVector{1, 1, 0})});
    return within(res, rec.tol(1e-9));
  });
  rec.run("fundamental triangle angles", [&](Rng&) {
    const auto t = fundamental_triangles();
    const double pi = std::numbers::pi;
    const double res = std::max({std::abs(triangle_angle(t[0], 1) - pi / 2), std::abs(triangle_angle(t[1], 1) - pi / 2),
                                 std::abs(triangle_angle(t[0], 0) - pi / 3), std::abs(triangle_angle(t[1], 0) - pi / 3),
                                 std::abs(q_form(t[0].vertices[2].ray))});
    return within(res, rec.tol(1e-9));
  });
  rec.run("singular line classification", [&](Rng&) {
    const SuspensionComplex cx = build_complex();
    const double pi = std::numbers::pi;
    double res = 0.0;
    int massive_pi = 0, massive_third = 0, btz = 0;
    for (const auto& l : cx.lines) {
      if (l.type == LineType::btz && l.holonomy.kind == IsometryKind::parabolic) {
        ++btz;
        res = std::max(res, l.cone_angle);
      } else if (l.type == LineType::massive && std::abs(l.cone_angle - pi) < 1e-6) {
        ++massive_pi;
        res = std::max({res, std::abs(l.cone_angle - pi), std::abs(l.holonomy.angle - pi)});
      } else if (l.type == LineType::massive && std::abs(l.cone_angle - 2 * pi / 3) < 1e-6) {
        ++massive_third;
        res = std::max({res, std::abs(l.cone_angle - 2 * pi / 3), std::abs(l.holonomy.angle - 2 * pi / 3)});
      }
    }
    Outcome o = within(res, rec.tol(1e-9));
    o.pass = o.pass && cx.lines.size() == 3 && massive_pi == 1 && massive_third == 1 && btz == 1;
    return o;
  });
  rec.run("polyhedral surface combinatorics and Gauss-Bonnet", [&](Rng&) {
    const PolyhedralSurface s = polyhedral_cauchy_surface(1.0);
    double defect = 0.0;
    for (const auto& c : s.cone_points) defect += kTwoPi - c.angle;
    const double res = std::max({std::abs(s.cone_angle_sum() - kTwoPi), std::abs(defect - 2 * kTwoPi)});
    Outcome o = within(res, rec.tol(1e-6));
    o.pass = o.pass && s.V == 3 && s.E == 3 && s.F == 2 && s.euler_characteristic() == 2 && s.max_edge_mismatch < 1e-9;
    return o;
  });
  rec.run("surfaces at t0 = 1 and 2 are homothetic", [&](Rng&) {
    const PolyhedralSurface a = polyhedral_cauchy_surface(1.0), b = polyhedral_cauchy_surface(2.0);
    double res = 0.0;
    for (std::size_t k = 0; k < a.triangles.size(); ++k)
      for (int i = 0; i < 3; ++i) {
        const auto& ta = a.triangles[k].vertices;
        const auto& tb = b.triangles[k].vertices;
        res = std::max(res, std::abs(2.0 * planar_length(ta[i], ta[(i + 1) % 3]) - planar_length(tb[i], tb[(i + 1) % 3])));
      }
    return within(res, rec.tol(1e-12));
  });
  rec.run("sampled rays meet the surface once", [&](Rng& rng) {
    const PolyhedralSurface s = polyhedral_cauchy_surface(1.0);
    const auto tris = fundamental_triangles();
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) bad += ray_intersection_count(s, sample_sector_ray(rng, tris)) == 1 ? 0 : 1;
    bad += ray_intersection_count(s, {1, 0, 0}) == 1 ? 0 : 1;
    bad += ray_intersection_count(s, {1, 1, 0}) == 1 ? 0 : 1;
    return within(static_cast<double>(bad), 0.0);
  });
}

// Driver ---------------------------------------------------------------------------

struct SuiteEntry {
  const char* name;
  void (*run)(Recorder&);
};

inline constexpr std::array<SuiteEntry, 7> kSuites = {{{"lorentz", lorentz_suite},
                                                      {"model", model_suite},
                                                      {"causality", causality_suite},
                                                      {"developing", developing_suite},
                                                      {"surfaces", surfaces_suite},
                                                      {"extensions", extensions_suite},
                                                      {"modular", modular_suite}}};

/// Runs `suite` ("all" for every suite) in declaration order.
inline std::vector<ReportRecord> run_suites(const std::string& suite, const Options& opt) {
  std::vector<ReportRecord> out;
  bool found = false;
  for (const auto& s : kSuites) {
    if (suite != "all" && suite != s.name) continue;
    found = true;
    Recorder rec(s.name, opt, out);
    s.run(rec);
  }
  if (!found) throw error(errc::precondition, "unknown suite '" + suite + "'");
  return out;
}

inline nlohmann::ordered_json report_json(const std::vector<ReportRecord>& recs, const Options& opt, bool timing) {
  using json = nlohmann::ordered_json;
  json checks = json::array();
  std::size_t failed = 0;
  for (const auto& r : recs) {
    json j = {{"suite", r.suite}, {"check", r.check}, {"status", r.pass ? "pass" : "fail"}};
    j["residual"] = r.residual ? json(*r.residual) : json(nullptr);
    j["tolerance"] = r.tolerance ? json(*r.tolerance) : json(nullptr);
    j["seed"] = r.seed;
    if (timing) j["millis"] = r.millis;
    if (!r.note.empty()) j["note"] = r.note;
    checks.push_back(std::move(j));
    failed += r.pass ? 0 : 1;
  }
  return {{"seed", opt.seed},
          {"grid", opt.grid},
          {"mc_samples", opt.mc_samples},
          {"tol_override", opt.tol ? json(*opt.tol) : json(nullptr)},
          {"checks", checks},
          {"total", recs.size()},
          {"failed", failed},
          {"status", failed == 0 ? "pass" : "fail"}};
}

}  // namespace btz::verify
