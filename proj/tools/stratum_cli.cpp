#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stratum.h"

namespace {

int finish(int status, char* out) {
  if (out) {
    std::fputs(out, stdout);
    stratum_free(out);
  }
  if (status != STRATUM_OK && status != STRATUM_ERR_CERTIFICATE) {
    std::fprintf(stderr, "error: %s\n", stratum_last_error());
  }
  return status;
}

void maybe_manifest(const std::string& manifest_path,
                    const std::string& profile_path,
                    const std::string& config_path, std::uint64_t seed) {
  if (manifest_path.empty()) return;
  char* text = nullptr;
  const int rc = stratum_make_manifest(profile_path.c_str(),
                                       config_path.c_str(), seed, &text);
  if (rc == STRATUM_OK && text) {
    if (std::FILE* f = std::fopen(manifest_path.c_str(), "w")) {
      std::fputs(text, f);
      std::fclose(f);
    }
  }
  stratum_free(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational thin-film energy toolkit"};
  app.require_subcommand(1);

  std::string profile, config, manifest;
  std::uint64_t seed = 1;

  auto* ev = app.add_subcommand("evaluate", "evaluate one functional");
  std::string functional = "F";
  double delta_override = 0.0;
  ev->add_option("--profile", profile)->required();
  ev->add_option("--config", config)->required();
  ev->add_option("--functional", functional)
      ->check(CLI::IsMember({"F", "F0", "Fdelta", "Fdelta-relaxed"}));
  ev->add_option("--delta", delta_override);
  ev->add_option("--manifest", manifest);

  auto* mn = app.add_subcommand("minimize", "local minimization at fixed area");
  std::string initial, out_profile;
  double target_area = 0.0, mu = 0.0;
  std::vector<double> lambdas{1, 2, 4, 8};
  int knots = 64;
  mn->add_option("--config", config)->required();
  mn->add_option("--initial", initial)->required();
  mn->add_option("--target-area", target_area)->required();
  mn->add_option("--mu", mu)->required();
  mn->add_option("--lambdas", lambdas)->delimiter(',');
  mn->add_option("--knots", knots);
  mn->add_option("--seed", seed);
  mn->add_option("--out-profile", out_profile);
  mn->add_option("--manifest", manifest);

  auto* gs = app.add_subcommand("gamma-sweep", "transition-layer limit sweep");
  std::vector<double> deltas;
  bool with_lift = false;
  gs->add_option("--profile", profile)->required();
  gs->add_option("--config", config)->required();
  gs->add_option("--deltas", deltas)->delimiter(',')->required();
  gs->add_flag("--with-lift", with_lift);
  gs->add_option("--manifest", manifest);

  auto* rs = app.add_subcommand("relax-sequence", "recovery sequence table");
  int steps = 8;
  double r = 0.5;
  std::string mode = "auto";
  rs->add_option("--profile", profile)->required();
  rs->add_option("--config", config)->required();
  rs->add_option("--steps", steps);
  rs->add_option("--r", r);
  rs->add_option("--mode", mode)
      ->check(CLI::IsMember({"auto", "wetting", "dewetting"}));
  rs->add_option("--manifest", manifest);

  auto* cb = app.add_subcommand("check-ball", "internal-ball certificate");
  double rho = 0.0, spacing = 0.0;
  cb->add_option("--profile", profile)->required();
  cb->add_option("--rho", rho)->required();
  cb->add_option("--spacing", spacing)->required();

  CLI11_PARSE(app, argc, argv);

  char* out = nullptr;
  if (ev->parsed()) {
    maybe_manifest(manifest, profile, config, seed);
    const int rc = stratum_run_evaluate(profile.c_str(), config.c_str(),
                                        functional.c_str(), delta_override,
                                        &out);
    return finish(rc, out);
  }
  if (mn->parsed()) {
    maybe_manifest(manifest, initial, config, seed);
    const int rc = stratum_run_minimize(
        config.c_str(), initial.c_str(), target_area, mu, lambdas.data(),
        lambdas.size(), knots, seed,
        out_profile.empty() ? nullptr : out_profile.c_str(), &out);
    return finish(rc, out);
  }
  if (gs->parsed()) {
    maybe_manifest(manifest, profile, config, seed);
    const int rc =
        stratum_run_gamma_sweep(profile.c_str(), config.c_str(), deltas.data(),
                                deltas.size(), with_lift ? 1 : 0, &out);
    return finish(rc, out);
  }
  if (rs->parsed()) {
    maybe_manifest(manifest, profile, config, seed);
    const int rc = stratum_run_relax_sequence(profile.c_str(), config.c_str(),
                                              steps, r, mode.c_str(), &out);
    return finish(rc, out);
  }
  if (cb->parsed()) {
    const int rc =
        stratum_run_check_ball(profile.c_str(), rho, spacing, &out);
    return finish(rc, out);
  }
  return STRATUM_ERR_INVALID_INPUT;
}
