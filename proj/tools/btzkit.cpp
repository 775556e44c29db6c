// btzkit: verification suites and data export for the model spaces, causal
// structure, surfaces and the modular example.
//
// Exit codes: 0 all checks pass, 1 a check failed (or the library refused the
// input), 2 usage error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "btz/btz.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Global {
  std::uint64_t seed = 7;
  std::optional<double> tol;
  std::string out;
  std::size_t grid = 256;
  bool no_timing = false;
};

void emit_text(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    btz::io::write_text_file(g.out, text);
  }
}

void emit(const Global& g, const json& j) { emit_text(g, j.dump(2) + "\n"); }

std::string csv_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

btz::ModelPoint point_arg(double alpha, const std::vector<double>& v) {
  return btz::ModelPoint::make(btz::ConeAngle(alpha), v.at(0), v.at(1), v.at(2));
}

btz::PiecewiseCurve curve_from_json(const json& j) {
  const btz::ConeAngle a(btz::io::read_real(j, "alpha"));
  if (!j.contains("samples") || !j.at("samples").is_array())
    throw btz::error(btz::errc::malformed, "curve needs a 'samples' array");
  std::vector<btz::CurveSample> samples;
  for (const auto& s : j.at("samples"))
    samples.push_back({btz::io::read_real(s, "s"), btz::ModelPoint::make(a, btz::io::read_real(s, "time"),
                                                                         btz::io::read_real(s, "r"),
                                                                         btz::io::read_real(s, "theta"))});
  return btz::PiecewiseCurve(std::move(samples));
}

json surface_report(const btz::GraphSurface& s, std::size_t grid) {
  const btz::ScanResult m = btz::min_spacelike_margin(s, grid, grid);
  json j = btz::io::surface_header(s);
  j["min_spacelike_margin"] = m.min_value;
  j["argmin"] = {{"r", m.r_at}, {"theta", m.theta_at}};
  j["spacelike"] = m.min_value > 0.0;
  if (s.punctured && s.r_min == 0.0 && s.ambient.is_btz()) {
    const auto c = btz::completeness_certificate(s, grid, grid);
    j["completeness_certificate"] = c ? json(*c) : json(nullptr);
    j["divergent_at_puncture"] = btz::divergence_check(s);
  }
  return j;
}

// Subcommand handlers ------------------------------------------------------------

int run_verify(const Global& g, const std::string& suite, std::size_t mc_samples) {
  btz::verify::Options opt;
  opt.seed = g.seed;
  opt.tol = g.tol;
  opt.grid = g.grid;
  opt.mc_samples = mc_samples;
  const auto recs = btz::verify::run_suites(suite, opt);
  const json rep = btz::verify::report_json(recs, opt, !g.no_timing);
  emit(g, rep);
  return rep["failed"].get<std::size_t>() == 0 ? kExitPass : kExitFail;
}

int run_causal_check(const Global& g, const std::string& path) {
  const btz::PiecewiseCurve c = curve_from_json(btz::io::read_json_file(path));
  const btz::CurveVerdict v = btz::validate_causal(c, g.tol.value_or(btz::kDefaultSecantTol));
  json j = {{"status", btz::to_string(v.status)}, {"samples", c.size()}};
  if (v.status == btz::CurveStatus::violation) j["first_bad_segment"] = v.segment;
  if (c.angle().is_btz() && btz::is_valid(v)) {
    const auto d = btz::decompose_btz(c);
    j["singular_samples"] = d.singular.size();
    j["regular_samples"] = d.regular.size();
  }
  emit(g, j);
  return btz::is_valid(v) ? kExitPass : kExitFail;
}

int run_causal_jplus(const Global& g, const std::vector<double>& p, const std::vector<double>& q) {
  const btz::ModelPoint a = point_arg(0.0, p), b = point_arg(0.0, q);
  const btz::JPlusStatus s = btz::btz_causal_future(a, b);
  emit(g, {{"p", btz::io::to_json(a)}, {"q", btz::io::to_json(b)}, {"status", btz::to_string(s)}});
  return kExitPass;
}

struct VolumeArgs {
  double alpha = 0.0, R = 1.0, a = -1.0, b = 1.0, weight1 = 0.0;
  std::size_t samples = 100000;
  std::vector<double> point;
};

int run_causal_volumetime(const Global& g, const VolumeArgs& v) {
  const btz::ConeAngle alpha(v.alpha);
  const btz::TubeRegion reg = btz::TubeRegion::make(alpha, v.R, v.a, v.b);
  btz::MeasureConfig cfg;
  cfg.samples = v.samples;
  cfg.weight1 = v.weight1;
  const btz::ModelPoint p = point_arg(v.alpha, v.point);
  const btz::VolumeTimeEstimator est(reg, cfg, g.seed);
  const btz::MeasureEstimate m = est.measure(p);
  json j = {{"point", btz::io::to_json(p)},
            {"seed", g.seed},
            {"samples", est.samples()},
            {"mu_past", m.past},
            {"mu_future", m.future}};
  int code = kExitPass;
  try {
    const btz::VolumeTime t = est.evaluate(p);
    j["volume_time"] = t.value;
    j["std_error"] = t.std_error;
  } catch (const btz::error& e) {
    if (e.code() != btz::errc::degenerate_measure) throw;
    j["error"] = btz::to_string(e.code());
    code = kExitFail;
  }
  emit(g, j);
  return code;
}

int run_develop_sample(const Global& g, std::size_t n, double alpha, double r_max) {
  const btz::ConeAngle a(alpha);
  btz::Rng rng(g.seed);
  std::ostringstream os;
  os << "tau,r,theta_cover,t,x,y\n";
  for (std::size_t i = 0; i < n; ++i) {
    const btz::CoverPoint p = btz::CoverPoint::make(btz::uniform(rng, -1.0, 1.0), btz::uniform(rng, 1e-3, r_max),
                                                    btz::uniform(rng, -btz::kTwoPi, btz::kTwoPi));
    const btz::LorentzVector u = a.is_btz() ? btz::develop_btz(p) : btz::develop_massive(a, p);
    os << csv_real(p.time) << ',' << csv_real(p.r) << ',' << csv_real(p.theta) << ',' << csv_real(u.t) << ','
       << csv_real(u.x) << ',' << csv_real(u.y) << '\n';
  }
  emit_text(g, os.str());
  return kExitPass;
}

int run_surface_check(const Global& g, const std::string& path) {
  const btz::GraphSurface s = btz::io::read_surface(path);
  const json j = surface_report(s, g.grid);
  emit(g, j);
  return j["spacelike"].get<bool>() ? kExitPass : kExitFail;
}

int run_surface_extend(const Global& g, const std::string& boundary, double R, bool cap) {
  const btz::BoundaryCurve b = btz::io::boundary_from_json(btz::io::read_json_file(boundary));
  json j;
  btz::GraphSurface s = btz::constant_surface(0.0, R);
  if (cap) {
    btz::CapResult c = btz::extend_boundary_cap(b, R);
    j = {{"M", c.M},
         {"min_delta", c.min_delta},
         {"continuity_residual", c.continuity_residual},
         {"boundary_residual", c.boundary_residual}};
    s = std::move(c.surface);
  } else {
    btz::SurgeryResult r = btz::extend_boundary_complete(b, R);
    const btz::ScanResult m = btz::min_r2_delta(r.surface, g.grid, g.grid);
    j = {{"M", r.M}, {"min_r2_delta", m.min_value}, {"boundary_residual", r.boundary_residual}};
    s = std::move(r.surface);
  }
  if (g.out.empty()) {
    j["surface"] = btz::io::surface_header(s);
    std::cout << j.dump(2) << "\n";
  } else {
    btz::io::write_surface(g.out, s);
    j["surface_file"] = fs::path(g.out).filename().string();
    std::cerr << j.dump(2) << "\n";
  }
  return kExitPass;
}

int run_surface_assemble(const Global& g, const std::string& outer, const std::string& inner) {
  const btz::CompositeSurface c =
      btz::assemble_cauchy(btz::io::read_surface(outer), btz::io::read_surface(inner), g.grid);
  emit(g, {{"trace_residual", c.trace_residual},
           {"inner_spacelike", c.inner_spacelike},
           {"outer_spacelike", c.outer_spacelike},
           {"crosses_singular_line", c.crosses_line}});
  return c.inner_spacelike && c.outer_spacelike ? kExitPass : kExitFail;
}

int run_surface_tabulate(const Global& g, const std::string& in, std::size_t nr, std::size_t nth, double r0) {
  const btz::GraphSurface s = btz::io::read_surface(in);
  auto f = [&s](double r, double th) { return s.tau(r, th); };
  const double lo = std::max(r0, s.r_min);
  btz::GraphSurface t = btz::make_surface(s.ambient, s.radius, s.punctured,
                                          btz::HeightField::sample(f, lo, s.radius, nr, nth),
                                          btz::SurfaceParams{btz::SurfaceFamily::grid, 0.0, 0.0, {}}, lo);
  if (g.out.empty()) throw btz::error(btz::errc::precondition, "surface tabulate needs --out");
  btz::io::write_surface(g.out, t);
  return kExitPass;
}

int run_extend_adjoin(const Global& g, const std::string& chart, std::optional<double> mu) {
  btz::TubeChart c = btz::io::chart_from_json(btz::io::read_json_file(chart));
  if (mu) c = btz::conjugate_holonomy(c, *mu);
  emit(g, btz::io::to_json(btz::adjoin_btz(c)));
  return kExitPass;
}

int run_extend_remove(const Global& g, const std::string& chart, const std::string& boundary) {
  const btz::TubeChart c = btz::io::chart_from_json(btz::io::read_json_file(chart));
  const btz::RemovalResult r =
      btz::remove_btz(c, btz::io::boundary_from_json(btz::io::read_json_file(boundary)));
  const auto cert = btz::completeness_certificate(r.surface.surface, g.grid, g.grid);
  emit(g, {{"chart", btz::io::to_json(r.chart)},
           {"surface", btz::io::surface_header(r.surface.surface)},
           {"completeness_certificate", cert ? json(*cert) : json(nullptr)}});
  return cert ? kExitPass : kExitFail;
}

int run_extend_chain(const Global& g, std::size_t n) {
  const auto chain = btz::mixed_extension_chain();
  btz::Rng rng(g.seed);
  std::size_t violations = 0;
  std::array<std::size_t, 4> counts{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = btz::chain_membership(chain, btz::random_model_point(rng, btz::ConeAngle::btz(), 2.0, -2.0, 2.0, 0.2));
    for (int k = 0; k < 4; ++k) counts[k] += m[k] ? 1 : 0;
    for (int k = 0; k < 3; ++k) violations += (m[k] && !m[k + 1]) ? 1 : 0;
  }
  json examples = json::array();
  for (const btz::ModelPoint& q : {btz::ModelPoint{btz::ConeAngle::btz(), -1, 0, 0},
                                   btz::ModelPoint{btz::ConeAngle::btz(), -1, 1, 0},
                                   btz::ModelPoint{btz::ConeAngle::btz(), 1, 1, 0}}) {
    const auto m = btz::chain_membership(chain, q);
    examples.push_back({{"point", btz::io::to_json(q)}, {"membership", m}});
  }
  emit(g, {{"samples", n}, {"counts", counts}, {"monotonicity_violations", violations}, {"examples", examples}});
  return violations == 0 ? kExitPass : kExitFail;
}

int run_modular_build(const Global& g) {
  const btz::SuspensionComplex cx = btz::build_complex();
  emit(g, btz::io::to_json(cx));
  return kExitPass;
}

int run_modular_surface(const Global& g, double t0, const std::string& soup) {
  const btz::PolyhedralSurface s = btz::polyhedral_cauchy_surface(t0);
  if (!soup.empty()) btz::io::write_text_file(soup, btz::io::triangle_soup_csv(s));
  emit(g, btz::io::to_json(s));
  return s.euler_characteristic() == 2 ? kExitPass : kExitFail;
}

int run_modular_rays(const Global& g, std::size_t n, double t0) {
  const btz::PolyhedralSurface s = btz::polyhedral_cauchy_surface(t0);
  const auto tris = btz::fundamental_triangles();
  btz::Rng rng(g.seed);
  std::vector<std::size_t> counts;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = btz::ray_intersection_count(s, btz::sample_sector_ray(rng, tris));
    counts.push_back(c);
    bad += c == 1 ? 0 : 1;
  }
  emit(g, {{"t0", t0}, {"seed", g.seed}, {"rays", n}, {"not_exactly_once", bad}, {"intersection_counts", counts}});
  return bad == 0 ? kExitPass : kExitFail;
}

int run_conefield(const Global& g, const std::vector<double>& omegas, std::size_t n_r, std::size_t n_phi,
                  double theta) {
  std::ostringstream os;
  os << "omega,r,theta,phi,radial_height,online_height\n";
  json summary = json::array();
  for (double w : omegas) {
    if (!(w >= 0.0 && w <= 1.0)) throw btz::error(btz::errc::out_of_range, "omega must lie in [0, 1]");
    const double online = btz::online_cone_height(w);
    double gap = 0.0;
    for (std::size_t i = 0; i < n_r; ++i) {
      const double r = std::pow(10.0, -static_cast<double>(i));  // 1, 0.1, ... towards the line
      for (std::size_t k = 0; k < n_phi; ++k) {
        const double phi = btz::kTwoPi * static_cast<double>(k) / static_cast<double>(n_phi);
        const double h = btz::radial_cone_height(w, theta, phi);
        gap = std::max(gap, std::abs(h - online));
        os << csv_real(w) << ',' << csv_real(r) << ',' << csv_real(theta) << ',' << csv_real(phi) << ','
           << csv_real(h) << ',' << csv_real(online) << '\n';
      }
    }
    summary.push_back({{"omega", w}, {"online_height", online}, {"max_height_gap", btz::io::real(gap)}});
  }
  if (g.out.empty()) {
    std::cout << os.str();
  } else {
    btz::io::write_text_file(g.out, os.str());
    std::cerr << summary.dump(2) << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model spaces, causal structure and Cauchy surfaces near singular lines"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  double tol = 0.0;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "Override every default tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--grid", g.grid, "Scan resolution for surface checks")->check(CLI::Range(4, 1 << 14))->capture_default_str();
  app.add_flag("--no-timing", g.no_timing, "Omit timings from reports");

  std::function<int()> action;

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  std::string suite = "all";
  std::size_t mc = 200000;
  verify->add_option("--suite", suite, "Suite name or 'all'")
      ->check(CLI::IsMember({"all", "lorentz", "model", "causality", "developing", "surfaces", "extensions", "modular"}))
      ->capture_default_str();
  verify->add_option("--samples", mc, "Monte-Carlo samples for volume time")->check(CLI::Range(2, 100000000))->capture_default_str();
  verify->callback([&] { action = [&] { return run_verify(g, suite, mc); }; });

  auto* causal = app.add_subcommand("causal", "Causal structure queries")->require_subcommand(1);
  std::string curve_path;
  auto* c_check = causal->add_subcommand("check", "Validate a piecewise curve file");
  c_check->add_option("--curve", curve_path, "Curve JSON {alpha, samples:[{s,time,r,theta}]}")->required();
  c_check->callback([&] { action = [&] { return run_causal_check(g, curve_path); }; });
  std::vector<double> jp, jq;
  auto* c_jplus = causal->add_subcommand("jplus", "Is q in J+(p) in E_0?");
  c_jplus->add_option("--p", jp, "tau r theta")->expected(3)->required();
  c_jplus->add_option("--q", jq, "tau r theta")->expected(3)->required();
  c_jplus->callback([&] { action = [&] { return run_causal_jplus(g, jp, jq); }; });
  VolumeArgs va;
  auto* c_vt = causal->add_subcommand("volumetime", "Monte-Carlo volume time on a tube slice");
  c_vt->add_option("--alpha", va.alpha, "Cone angle")->check(CLI::NonNegativeNumber);
  c_vt->add_option("--R", va.R, "Tube radius");
  c_vt->add_option("--a", va.a, "Lower time bound");
  c_vt->add_option("--b", va.b, "Upper time bound");
  c_vt->add_option("--weight1", va.weight1, "Weight of the line measure")->check(CLI::NonNegativeNumber);
  c_vt->add_option("--samples", va.samples, "Sample count")->check(CLI::Range(2, 100000000));
  c_vt->add_option("--point", va.point, "time r theta")->expected(3)->required();
  c_vt->callback([&] { action = [&] { return run_causal_volumetime(g, va); }; });

  auto* develop = app.add_subcommand("develop", "Developing maps")->require_subcommand(1);
  std::size_t dev_n = 1000;
  double dev_alpha = 0.0, dev_r = 2.0;
  auto* d_sample = develop->add_subcommand("sample", "CSV of random cover points and their images");
  d_sample->add_option("--n", dev_n, "Number of points");
  d_sample->add_option("--alpha", dev_alpha, "Cone angle (0 for BTZ)")->check(CLI::NonNegativeNumber);
  d_sample->add_option("--rmax", dev_r, "Largest radius")->check(CLI::PositiveNumber);
  d_sample->callback([&] { action = [&] { return run_develop_sample(g, dev_n, dev_alpha, dev_r); }; });

  auto* surface = app.add_subcommand("surface", "Graph surfaces")->require_subcommand(1);
  std::string s_in, s_boundary, s_outer, s_inner;
  double s_R = 1.0, s_r0 = 0.1;
  std::size_t s_nr = 128, s_nth = 128;
  auto* s_check = surface->add_subcommand("check", "Spacelike and completeness checks of a surface file");
  s_check->add_option("--in", s_in, "Surface file")->required();
  s_check->callback([&] { action = [&] { return run_surface_check(g, s_in); }; });
  auto* s_extend = surface->add_subcommand("extend", "Complete punctured extension of a boundary curve");
  s_extend->add_option("--boundary", s_boundary, "Boundary JSON {a0, cos, sin}")->required();
  s_extend->add_option("--R", s_R, "Disc radius")->check(CLI::PositiveNumber);
  s_extend->callback([&] { action = [&] { return run_surface_extend(g, s_boundary, s_R, false); }; });
  auto* s_cap = surface->add_subcommand("cap", "Extension across the singular line");
  s_cap->add_option("--boundary", s_boundary, "Boundary JSON {a0, cos, sin}")->required();
  s_cap->add_option("--R", s_R, "Disc radius")->check(CLI::PositiveNumber);
  s_cap->callback([&] { action = [&] { return run_surface_extend(g, s_boundary, s_R, true); }; });
  auto* s_asm = surface->add_subcommand("assemble", "Join an outer annulus and an inner piece");
  s_asm->add_option("--outer", s_outer, "Outer surface file")->required();
  s_asm->add_option("--inner", s_inner, "Inner surface file")->required();
  s_asm->callback([&] { action = [&] { return run_surface_assemble(g, s_outer, s_inner); }; });
  auto* s_tab = surface->add_subcommand("tabulate", "Resample a surface file onto a grid surface");
  s_tab->add_option("--in", s_in, "Surface file")->required();
  s_tab->add_option("--nr", s_nr, "Radial nodes")->check(CLI::Range(3, 1 << 14));
  s_tab->add_option("--nth", s_nth, "Angular nodes")->check(CLI::Range(3, 1 << 14));
  s_tab->add_option("--r0", s_r0, "Inner radius for punctured surfaces")->check(CLI::PositiveNumber);
  s_tab->callback([&] { action = [&] { return run_surface_tabulate(g, s_in, s_nr, s_nth, s_r0); }; });

  auto* extend = app.add_subcommand("extend", "BTZ extensions of tube charts")->require_subcommand(1);
  std::string e_chart, e_boundary;
  std::optional<double> e_mu;
  std::size_t e_n = 10000;
  auto* e_adj = extend->add_subcommand("adjoin", "Adjoin the BTZ line to a chart");
  e_adj->add_option("--chart", e_chart, "Chart JSON")->required();
  e_adj->add_option("--mu", e_mu, "Conjugate the holonomy by this boost first");
  e_adj->callback([&] { action = [&] { return run_extend_adjoin(g, e_chart, e_mu); }; });
  auto* e_rem = extend->add_subcommand("remove", "Remove the BTZ line and build a complete surface");
  e_rem->add_option("--chart", e_chart, "Chart JSON")->required();
  e_rem->add_option("--boundary", e_boundary, "Boundary JSON")->required();
  e_rem->callback([&] { action = [&] { return run_extend_remove(g, e_chart, e_boundary); }; });
  auto* e_chain = extend->add_subcommand("example-chain", "Membership in the chain M0 to M3");
  e_chain->add_option("--n", e_n, "Random points");
  e_chain->callback([&] { action = [&] { return run_extend_chain(g, e_n); }; });

  auto* modular = app.add_subcommand("modular", "The modular-group example")->require_subcommand(1);
  double m_t0 = 1.0;
  std::size_t m_n = 1000;
  std::string m_soup;
  modular->add_subcommand("build", "Suspension complex and singular lines")->callback([&] {
    action = [&] { return run_modular_build(g); };
  });
  auto* m_surf = modular->add_subcommand("surface", "Polyhedral Cauchy surface at time t0");
  m_surf->add_option("--t0", m_t0, "Level")->check(CLI::PositiveNumber);
  m_surf->add_option("--soup", m_soup, "Write the triangle soup CSV here");
  m_surf->callback([&] { action = [&] { return run_modular_surface(g, m_t0, m_soup); }; });
  auto* m_rays = modular->add_subcommand("rays", "Intersections of random future rays with the surface");
  m_rays->add_option("--n", m_n, "Number of rays");
  m_rays->add_option("--t0", m_t0, "Level")->check(CLI::PositiveNumber);
  m_rays->callback([&] { action = [&] { return run_modular_rays(g, m_n, m_t0); }; });

  auto* cone = app.add_subcommand("conefield", "Future cones near a singular point: radial limit vs on the line");
  std::vector<double> c_omega{0.0, 0.5, 0.9, 1.0};
  std::size_t c_nr = 6, c_nphi = 64;
  double c_theta = 0.0;
  cone->add_option("--omega", c_omega, "Omega values in [0, 1]");
  cone->add_option("--nr", c_nr, "Radii 10^0 ... 10^-(nr-1)")->check(CLI::Range(1, 300));
  cone->add_option("--nphi", c_nphi, "Directions per radius")->check(CLI::Range(1, 1 << 16));
  cone->add_option("--theta", c_theta, "Polar angle of the base point");
  cone->callback([&] { action = [&] { return run_conefield(g, c_omega, c_nr, c_nphi, c_theta); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (*tol_opt) g.tol = tol;

  try {
    return action ? action() : kExitUsage;
  } catch (const btz::error& e) {
    std::cerr << json({{"error", btz::to_string(e.code())}, {"message", e.what()}}).dump() << "\n";
    return e.code() == btz::errc::io || e.code() == btz::errc::malformed ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return kExitFail;
  }
}
