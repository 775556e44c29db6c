// Acceptance criteria. Prints one PASS/FAIL line per criterion; an optional
// argument selects a single criterion. Exit status is nonzero on any failure.

#include <Eigen/Dense>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <thread>
#include <iostream>
#include <sstream>
#include <string>

#include "btz/btz.hpp"

using namespace btz;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* name, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.3e", name, v);
  return buf;
}

Rng seeded(int criterion) {
  std::seed_seq seq{7, criterion};
  return Rng(seq);
}

CoverPoint random_cover(Rng& rng) {
  return CoverPoint::make(uniform(rng, -2, 2), uniform(rng, 0.01, 3.0), uniform(rng, -2 * kTwoPi, 2 * kTwoPi));
}

BoundaryCurve random_boundary(Rng& rng) {
  const auto deg = static_cast<std::size_t>(uniform(rng, 0, 6));
  std::vector<double> a(deg), b(deg);
  for (auto& v : a) v = uniform(rng, -1, 1);
  for (auto& v : b) v = uniform(rng, -1, 1);
  return BoundaryCurve(uniform(rng, -1, 1), a, b);
}

Verdict c1() {
  Rng rng = seeded(1);
  double exact = 0.0, fd = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const CoverPoint p = random_cover(rng);
    const ConeAngle a(uniform(rng, 0.05, 4.0 * std::numbers::pi));
    exact = std::max({exact, pullback_residual(develop_btz_jacobian(p), metric_at(ConeAngle::btz(), p.r)),
                      pullback_residual(develop_massive_jacobian(a, p), metric_at(a, p.r))});
    const CoverPoint q = CoverPoint::make(p.time, std::max(p.r, 0.1), p.theta);
    auto fm = [a](const CoverPoint& x) { return develop_massive(a, x); };
    fd = std::max({fd, pullback_residual(numeric_jacobian(develop_btz, q, 1e-4), metric_at(ConeAngle::btz(), q.r)),
                   pullback_residual(numeric_jacobian(fm, q, 1e-4), metric_at(a, q.r))});
  }
  return {exact < 1e-9 && fd < 1e-5, fmt("exact", exact) + " " + fmt("fd", fd)};
}

Verdict c2() {
  Rng rng = seeded(2);
  const LorentzIsometry g = btz_holonomy_generator();
  double eq = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CoverPoint p = random_cover(rng);
    const CoverPoint q{p.time, p.r, p.theta + kTwoPi};
    eq = std::max(eq, euclidean_norm(develop_btz(q) - g(develop_btz(p))));
  }
  const double tr = std::abs(g.linear().trace() - 3.0);
  const double fix = euclidean_norm(g({1, 1, 0}) - LorentzVector{1, 1, 0});
  return {eq < 1e-9 && tr <= 1e-12 && fix <= 1e-12, fmt("equivariance", eq) + " " + fmt("trace", tr) + " " + fmt("fixed", fix)};
}

Verdict c3() {
  Rng rng = seeded(3);
  double res = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const CoverPoint p = random_cover(rng);
    const LorentzVector u = develop_btz(p);
    res = std::max(res, std::abs((u.t - u.x) - p.r));
  }
  return {res <= 1e-12, fmt("max |t-x-r|", res)};
}

Verdict c4() {
  Rng rng = seeded(4);
  double res = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ConeAngle a((1.0 - uniform(rng, 0.0, 1.0)) * kTwoPi);
    (void)uniform(rng, -2, 2);  // the pullback does not depend on t
    const double r = uniform(rng, 0.01, 5.0);
    res = std::max(res, max_abs_diff(OmegaTransform(a).pullback_metric(r), metric_at(a, r)));
  }
  bool exact = true;
  for (double r : {0.1, 0.5, 1.0, 2.0, 7.0}) {
    exact = exact && max_abs_diff(omega_metric_at(0.0, r), Mat3::diag(-1, 1, r * r)) == 0.0;
    exact = exact && max_abs_diff(omega_metric_at(1.0, r), metric_at(ConeAngle::btz(), r)) == 0.0;
  }
  return {res < 1e-9 && exact, fmt("pullback", res) + (exact ? " endpoints exact" : " endpoints differ")};
}

Verdict c5() {
  Rng rng = seeded(5);
  std::size_t mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r = uniform(rng, 0.01, 2.0), tr = uniform(rng, -2, 2), tth = uniform(rng, -2, 2);
    const Mat2 g = induced_metric_from_jet(ConeAngle::btz(), r, tr, tth);
    Eigen::Matrix2d m;
    m << g[0][0], g[0][1], g[1][0], g[1][1];
    const bool pd = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues().minCoeff() > 0.0;
    if ((delta_from_jet(r, tr, tth) > 0.0) != pd) ++mismatches;
  }
  return {mismatches == 0, "mismatches=" + std::to_string(mismatches) + "/10000"};
}

Verdict c6() {
  Rng rng = seeded(6);
  double worst = std::numeric_limits<double>::infinity(), boundary = 0.0, cont = 0.0;
  double cap_delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const BoundaryCurve b = random_boundary(rng);
    const SurgeryResult s = extend_boundary_complete(b, 1.0);
    worst = std::min(worst, min_r2_delta(s.surface, 256, 256).min_value);
    boundary = std::max(boundary, s.boundary_residual);
    const CapResult c = extend_boundary_cap(b, 1.0);
    cont = std::max(cont, c.continuity_residual);
    cap_delta = std::min(cap_delta, c.min_delta);
  }
  const bool ok = worst > 1.0 && boundary == 0.0 && cont <= 1e-12 && cap_delta > 1e-9;
  return {ok, fmt("min r2delta", worst) + " " + fmt("boundary", boundary) + " " + fmt("cap continuity", cont) + " " +
                  fmt("cap min delta", cap_delta)};
}

Verdict c7() {
  Rng rng = seeded(7);
  const GraphSurface s = hyperbolic_cap_surface(1.0);
  double res = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double r = uniform(rng, 0.01, 1.0);
    res = std::max(res, std::abs(delta(s, r, uniform(rng, 0, kTwoPi)) - 1.0 / (r * r)));
  }
  const auto c = completeness_certificate(s);
  const double cerr = c ? std::abs(*c - 1.0) : std::numeric_limits<double>::infinity();
  double lerr = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double len = surface_length(s, radial_path(1.0, eps, 0.7, 400));
    lerr = std::max(lerr, std::abs(len - std::log(1.0 / eps)));
  }
  return {res <= 1e-9 && cerr <= 1e-6 && lerr <= 1e-6, fmt("delta", res) + " " + fmt("|C-1|", cerr) + " " + fmt("length", lerr)};
}

Verdict c8() {
  const CausalGrid g;
  std::size_t disagree = 0, total = 0;
  for (std::size_t it0 : {0u, 5u, 10u, 20u, 30u}) {
    const auto reach = grid_reachable(g, it0, 0, 0);
    const ModelPoint p = g.point(it0, 0, 0);
    for (std::size_t it = 0; it < g.nt; ++it)
      for (std::size_t ir = 0; ir < g.nr; ++ir)
        for (std::size_t ith = 0; ith < (ir == 0 ? 1 : g.nth); ++ith) {
          const bool in = btz_causal_future(p, g.point(it, ir, ith)) != JPlusStatus::outside;
          disagree += in != static_cast<bool>(reach[g.index(it, ir, ith)]) ? 1 : 0;
          ++total;
        }
  }
  Rng rng = seeded(8);
  std::size_t rejected = 0, decreasing = 0;
  for (int k = 0; k < 10000; ++k) {
    const PiecewiseCurve c = random_btz_causal_curve(rng, 8);
    if (!is_valid(validate_causal(c))) {
      ++rejected;
      continue;
    }
    const auto s = c.samples();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) decreasing += s[i + 1].point.r < s[i].point.r ? 1 : 0;
  }
  const bool ok = disagree == 0 && rejected == 0 && decreasing == 0;
  return {ok, "grid disagreements=" + std::to_string(disagree) + "/" + std::to_string(total) +
                  " rejected=" + std::to_string(rejected) + " decreasing steps=" + std::to_string(decreasing)};
}

Verdict c9() {
  const TubeRegion reg = TubeRegion::make(ConeAngle::btz(), 1.0, -1.0, 1.0);
  MeasureConfig cfg;
  cfg.samples = 1000000;
  cfg.weight1 = 1.0;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  const VolumeTimeEstimator est(reg, cfg, 7, workers);
  Rng rng = seeded(9);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const PiecewiseCurve c = random_btz_causal_curve(rng, 4);
    std::optional<VolumeTime> prev;
    for (const auto& s : c.samples()) {
      const VolumeTime v = est.evaluate(s.point);
      if (prev) worst = std::max(worst, prev->value - v.value - 3.0 * std::hypot(prev->std_error, v.std_error));
      prev = v;
    }
  }
  MeasureConfig plain = cfg;
  plain.weight1 = 0.0;
  const VolumeTimeEstimator zero(reg, plain, 7, workers);
  const ModelPoint line{ConeAngle::btz(), 0.0, 0.0, 0.0};
  bool degenerate = false;
  try {
    (void)zero.evaluate(line);
  } catch (const error& e) {
    degenerate = e.code() == errc::degenerate_measure;
  }
  const bool empty = zero.measure(line).past == 0.0;
  bool increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (double t : {-0.5, 0.0, 0.5}) {
    const double v = est.evaluate({ConeAngle::btz(), t, 0.0, 0.0}).value;
    increasing = increasing && v > prev;
    prev = v;
  }
  const bool ok = worst <= 0.0 && empty && degenerate && increasing;
  return {ok, fmt("worst drop beyond 3SE", worst) + (empty ? " past=0" : " past>0") +
                  (degenerate ? " degenerate" : " not-degenerate") + (increasing ? " line increasing" : " line not increasing")};
}

Verdict c10() {
  const auto g = psl2z_representation();
  const LorentzIsometry st = g.S * g.T;
  const double rel = std::max(max_abs_diff((g.S * g.S).linear(), Mat3::identity()),
                              max_abs_diff((st * st * st).linear(), Mat3::identity()));
  const SuspensionComplex cx = build_complex();
  const double pi = std::numbers::pi;
  int m_pi = 0, m_third = 0, btz = 0;
  double ang = 0.0;
  for (const auto& l : cx.lines) {
    if (l.type == LineType::btz && l.holonomy.kind == IsometryKind::parabolic) {
      ++btz;
      ang = std::max(ang, std::abs(l.cone_angle));
    } else if (l.type == LineType::massive && std::abs(l.cone_angle - pi) < 1e-6) {
      ++m_pi;
      ang = std::max({ang, std::abs(l.cone_angle - pi), std::abs(l.holonomy.angle - pi)});
    } else if (l.type == LineType::massive && std::abs(l.cone_angle - 2 * pi / 3) < 1e-6) {
      ++m_third;
      ang = std::max({ang, std::abs(l.cone_angle - 2 * pi / 3), std::abs(l.holonomy.angle - 2 * pi / 3)});
    }
  }
  const bool lines = cx.lines.size() == 3 && m_pi == 1 && m_third == 1 && btz == 1;
  const PolyhedralSurface s = polyhedral_cauchy_surface(1.0);
  const double sum = std::abs(s.cone_angle_sum() - kTwoPi);
  const bool vef = s.V == 3 && s.E == 3 && s.F == 2;
  Rng rng = seeded(10);
  const auto tris = fundamental_triangles();
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) bad += ray_intersection_count(s, sample_sector_ray(rng, tris)) == 1 ? 0 : 1;
  const bool ok = rel < 1e-9 && lines && ang < 1e-9 && vef && sum <= 1e-6 && bad == 0;
  return {ok, fmt("relations", rel) + " " + fmt("angles", ang) + (lines ? " lines ok" : " lines wrong") + " V,E,F=" +
                  std::to_string(s.V) + "," + std::to_string(s.E) + "," + std::to_string(s.F) + " " + fmt("angle sum", sum) +
                  " bad rays=" + std::to_string(bad)};
}

Verdict c11() {
  const auto chain = mixed_extension_chain();
  Rng rng = seeded(11);
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto m = chain_membership(chain, random_model_point(rng, ConeAngle::btz(), 2.0, -2.0, 2.0, 0.2));
    for (int k = 0; k < 3; ++k) bad += (m[k] && !m[k + 1]) ? 1 : 0;
  }
  const ConeAngle e0 = ConeAngle::btz();
  const bool ex = chain_membership(chain, {e0, -1, 0, 0}) == std::array<bool, 4>{false, false, true, true} &&
                  chain_membership(chain, {e0, -1, 1, 0}) == std::array<bool, 4>{true, true, true, true} &&
                  chain_membership(chain, {e0, 1, 1, 0}) == std::array<bool, 4>{false, false, false, true};
  return {bad == 0 && ex, "violations=" + std::to_string(bad) + (ex ? " examples ok" : " examples wrong")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict c12() {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag = std::to_string(std::random_device{}());
  const auto a = dir / ("btz_accept_a_" + tag + ".json");
  const auto b = dir / ("btz_accept_b_" + tag + ".json");
  auto run = [](const std::filesystem::path& out) {
    const std::string cmd = std::string("\"") + BTZKIT_PATH + "\" verify --suite all --seed 7 --no-timing > \"" +
                            out.string() + "\"";
    return std::system(cmd.c_str());
  };
  const int ra = run(a), rb = run(b);
  const std::string sa = slurp(a), sb = slurp(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  const bool ok = ra == 0 && rb == 0 && !sa.empty() && sa == sb;
  return {ok, "bytes=" + std::to_string(sa.size()) + (sa == sb ? " identical" : " differ") +
                  " exit=" + std::to_string(ra) + "," + std::to_string(rb)};
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::array<Criterion, 12> all = {{{"developing map isometry", c1},
                                          {"holonomy equivariance", c2},
                                          {"image law", c3},
                                          {"omega family consistency", c4},
                                          {"delta criterion", c5},
                                          {"surgery certificates", c6},
                                          {"hyperbolic cap benchmark", c7},
                                          {"causal structure", c8},
                                          {"volume time", c9},
                                          {"modular example", c10},
                                          {"mixed extension chain", c11},
                                          {"determinism", c12}}};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 12) {
      std::cerr << "usage: acceptance [1-12]\n";
      return 2;
    }
  }
  int failed = 0;
  for (int i = 0; i < 12; ++i) {
    if (only != 0 && only != i + 1) continue;
    Verdict v;
    try {
      v = all[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << " " << all[i].name << ": " << v.detail
              << std::endl;
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
