#include "stratum/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "stratum/diagnostics.hpp"
#include "stratum/energy.hpp"
#include "stratum/fem.hpp"
#include "stratum/minimize.hpp"
#include "stratum/relaxation.hpp"

namespace stratum::runner {

using io::Config;
using io::format_double;

int max_threads() {
  const char* env = std::getenv("STRATUM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

namespace {

/// Equilibrium displacement when the config enables FEM and the profile is
/// meshable; null otherwise (u = 0 closed form).
struct MaybeSolved {
  std::optional<fem::Mesh> mesh;
  std::optional<fem::Displacement> u;
  const fem::Displacement* get() const { return u ? &*u : nullptr; }
};

MaybeSolved maybe_solve(const geom::Profile& p, const Config& cfg,
                        const fem::ElasticMode& mode) {
  MaybeSolved out;
  if (cfg.fem_resolution <= 0.0 || cfg.materials.e0 <= 0.0 ||
      !p.jumps().empty()) {
    return out;
  }
  const double depth =
      cfg.fem_depth > 0.0 ? cfg.fem_depth : 2.0 * std::max(p.max_height(), 1.0);
  fem::BCSpec bc;
  bc.periodic_x = cfg.lateral == io::Lateral::Periodic;
  out.mesh = fem::build_mesh(p, depth, cfg.fem_resolution, bc);
  out.u = fem::solve_equilibrium(*out.mesh, cfg.materials, mode, bc,
                                 cfg.tol_solve);
  return out;
}

}  // namespace

std::string evaluate(const std::string& profile_path,
                     const std::string& config_path,
                     const std::string& functional, double delta_override) {
  const geom::Profile p = io::load_profile(profile_path);
  Config cfg = io::load_config(config_path);
  if (delta_override > 0.0) cfg.delta = delta_override;
  energy::EvalOptions opt;
  opt.depth = cfg.fem_depth;
  opt.resolution = cfg.fem_resolution;
  energy::EnergyReport rep;
  if (functional == "F") {
    MaybeSolved s = maybe_solve(p, cfg, fem::ElasticMode::Sharp());
    rep = energy::eval_F(s.get(), p, cfg.materials, opt);
  } else if (functional == "F0") {
    MaybeSolved s = maybe_solve(p, cfg, fem::ElasticMode::Sharp());
    rep = energy::eval_F0(s.get(), p, cfg.materials, opt);
  } else if (functional == "Fdelta") {
    const mat::TransitionParams t = io::transition_of(cfg);
    MaybeSolved s = maybe_solve(p, cfg, fem::ElasticMode::Delta(t));
    rep = energy::eval_Fdelta(s.get(), p, cfg.materials, t, opt);
  } else if (functional == "Fdelta-relaxed") {
    const mat::TransitionParams t = io::transition_of(cfg);
    MaybeSolved s = maybe_solve(p, cfg, fem::ElasticMode::Delta(t));
    rep = energy::eval_Fdelta_relaxed(s.get(), p, cfg.materials, t, opt);
  } else {
    throw io::IoError("unknown functional '" + functional +
                      "' (expected F, F0, Fdelta, or Fdelta-relaxed)");
  }
  std::ostringstream out;
  io::emit_report_header(out);
  io::emit_report(rep, out);
  return out.str();
}

std::string run_minimize(const MinimizeArgs& args) {
  const Config cfg = io::load_config(args.config_path);
  minimize::MinimizeSpec spec{io::load_profile(args.initial_path),
                              args.target_area,
                              args.mu,
                              args.lambdas,
                              args.knots};
  spec.seed = args.seed;
  spec.fem_depth = cfg.fem_depth;
  spec.fem_resolution = cfg.fem_resolution;
  spec.tol_solve = cfg.tol_solve;
  minimize::MinimizeResult res = minimize::run(spec, cfg.materials);
  std::ostringstream out;
  out << "lambda,iter,penalized,area_error,step_norm,boundary_length\n";
  for (const auto& rec : res.log) {
    out << format_double(rec.lambda) << ',' << rec.iter << ','
        << format_double(rec.penalized) << ',' << format_double(rec.area_error)
        << ',' << format_double(rec.step_norm) << ','
        << format_double(rec.boundary_length) << '\n';
  }
  out << "# lambda_used " << format_double(res.lambda_used) << '\n';
  out << "# area_error " << format_double(res.area_error) << '\n';
  out << "# locality_used " << format_double(res.locality_used) << '\n';
  out << "# converged " << (res.converged ? 1 : 0) << '\n';
  out << "# certificate_ok " << (res.certificate_ok ? 1 : 0) << '\n';
  if (!args.out_profile_path.empty()) {
    io::save_profile_file(res.profile, args.out_profile_path);
  }
  if (!res.converged || !res.certificate_ok) {
    throw CertificateFailure(out.str());
  }
  return out.str();
}

std::string gamma_sweep(const std::string& profile_path,
                        const std::string& config_path,
                        const std::vector<double>& deltas, bool with_lift) {
  const geom::Profile p = io::load_profile(profile_path);
  const Config cfg = io::load_config(config_path);
  MaybeSolved s = maybe_solve(p, cfg, fem::ElasticMode::Sharp());
  const auto rows =
      diag::gamma_sweep(s.get(), p, cfg.materials, cfg.f, deltas, with_lift);
  std::ostringstream out;
  out << "delta,F_delta_total,F_total,gap,lift_t\n";
  for (const auto& r : rows) {
    out << format_double(r.delta) << ',' << format_double(r.f_delta_total)
        << ',' << format_double(r.f_total) << ',' << format_double(r.gap)
        << ',' << format_double(r.lift_t) << '\n';
  }
  return out.str();
}

std::string relax_sequence(const std::string& profile_path,
                           const std::string& config_path, int steps, double r,
                           const std::string& mode) {
  const geom::Profile p = io::load_profile(profile_path);
  const Config cfg = io::load_config(config_path);
  const mat::Materials& m = cfg.materials;
  bool dewetting;
  if (mode == "wetting") {
    dewetting = false;
  } else if (mode == "dewetting") {
    dewetting = true;
  } else if (mode == "auto") {
    dewetting = m.gamma_f < m.gamma_s - m.gamma_fs;
  } else {
    throw io::IoError("mode must be auto, wetting, or dewetting");
  }

  const auto Ls = relax::default_L_schedule(p, steps);
  relax::RecoverySequence seq = relax::build_recovery_sequence(p, r, Ls);
  const double f_target = energy::eval_F(nullptr, p, m).total;

  std::ostringstream out;
  out << "n,L,eps,lambda,mu,area_err,F0_total,F_target_total,surface_gap\n";
  for (auto& st : seq.steps) {
    geom::Profile h_final = st.h_n;
    if (dewetting) {
      const double eps_lift = st.eps_n > 0.0 ? st.eps_n : 1.0 / st.L;
      h_final = relax::dewetting_lift(h_final, eps_lift).h_n;
    }
    const double f0 = energy::eval_F0(nullptr, h_final, m).total;
    const double s_tilde = energy::surface_integral_phi(
        m, geom::decompose(st.h_tilde).tilde_gamma);
    const double s_n =
        energy::surface_integral_phi(m, geom::decompose(st.h_n).tilde_gamma);
    out << st.n << ',' << format_double(st.L) << ','
        << format_double(st.eps_n) << ',' << format_double(st.lambda_n) << ','
        << format_double(st.mu_n) << ',' << format_double(st.area_err) << ','
        << format_double(f0) << ',' << format_double(f_target) << ','
        << format_double(std::abs(s_tilde - s_n)) << '\n';
  }
  return out.str();
}

std::string check_ball(const std::string& profile_path, double rho,
                       double spacing) {
  const geom::Profile p = io::load_profile(profile_path);
  const diag::BallCertificate cert = diag::internal_ball_check(p, rho, spacing);
  std::ostringstream out;
  out << "{\n";
  out << "  \"rho\": " << format_double(cert.rho) << ",\n";
  out << "  \"spacing\": " << format_double(cert.sample_spacing) << ",\n";
  out << "  \"passed\": " << (cert.passed ? "true" : "false") << ",\n";
  out << "  \"witnesses\": " << cert.witnesses.size() << ",\n";
  out << "  \"violations\": [";
  for (std::size_t i = 0; i < cert.violations.size(); ++i) {
    const auto& v = cert.violations[i];
    out << (i ? ", " : "") << "{\"x\": " << format_double(v.z.x)
        << ", \"y\": " << format_double(v.z.y)
        << ", \"best_rho\": " << format_double(v.best_rho) << "}";
  }
  out << "]\n}\n";
  if (!cert.passed) throw CertificateFailure(out.str());
  return out.str();
}

std::string make_manifest(const std::vector<std::string>& input_paths,
                          const std::string& config_path, std::uint64_t seed) {
  io::RunManifest man;
  const Config cfg = io::load_config(config_path);
  man.config_snapshot = cfg.snapshot;
  man.seed = seed;
  man.input_hashes.emplace_back(config_path, io::file_hash(config_path));
  for (const auto& path : input_paths) {
    man.input_hashes.emplace_back(path, io::file_hash(path));
  }
  man.tolerances.emplace_back("tol_solve", cfg.tol_solve);
  man.tolerances.emplace_back("tol_quad", relax::kTolQuad);
  std::ostringstream out;
  man.write(out);
  return out.str();
}

}  // namespace stratum::runner
