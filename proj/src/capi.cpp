#include "stratum.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "stratum/diagnostics.hpp"
#include "stratum/fem.hpp"
#include "stratum/io.hpp"
#include "stratum/minimize.hpp"
#include "stratum/relaxation.hpp"
#include "stratum/runner.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_output(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

int classify(const std::exception& e) {
  if (dynamic_cast<const stratum::io::IoError*>(&e) ||
      dynamic_cast<const stratum::geom::ProfileError*>(&e) ||
      dynamic_cast<const stratum::mat::MaterialError*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e)) {
    return STRATUM_ERR_INVALID_INPUT;
  }
  return STRATUM_ERR_NUMERICAL;
}

template <typename Fn>
int run_guarded(char** out, Fn&& fn) {
  g_last_error.clear();
  try {
    set_output(out, fn());
    return STRATUM_OK;
  } catch (const stratum::runner::CertificateFailure& e) {
    // The report itself is the payload; the call "worked" but said no.
    set_output(out, e.what());
    g_last_error = "certificate failure";
    return STRATUM_ERR_CERTIFICATE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return classify(e);
  }
}

}  // namespace

struct stratum_profile {
  stratum::geom::Profile p;
};

struct stratum_config {
  stratum::io::Config c;
};

extern "C" {

const char* stratum_version(void) { return stratum::io::kVersion; }

const char* stratum_last_error(void) { return g_last_error.c_str(); }

void stratum_free(char* s) { std::free(s); }

stratum_profile* stratum_profile_load(const char* path) {
  g_last_error.clear();
  try {
    return new stratum_profile{stratum::io::load_profile(path)};
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

void stratum_profile_free(stratum_profile* p) { delete p; }

double stratum_profile_area(const stratum_profile* p) {
  return p ? stratum::geom::film_area(p->p) : 0.0;
}

double stratum_profile_max_height(const stratum_profile* p) {
  return p ? p->p.max_height() : 0.0;
}

int stratum_profile_is_lipschitz(const stratum_profile* p) {
  return p && p->p.is_lipschitz() ? 1 : 0;
}

stratum_config* stratum_config_load(const char* path) {
  g_last_error.clear();
  try {
    return new stratum_config{stratum::io::load_config(path)};
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

void stratum_config_free(stratum_config* c) { delete c; }

int stratum_run_evaluate(const char* profile_path, const char* config_path,
                         const char* functional, double delta,
                         char** out_csv) {
  return run_guarded(out_csv, [&] {
    return stratum::runner::evaluate(profile_path, config_path, functional,
                                     delta);
  });
}

int stratum_run_minimize(const char* config_path, const char* initial_path,
                         double target_area, double mu, const double* lambdas,
                         size_t n_lambdas, int knots, uint64_t seed,
                         const char* out_profile_path, char** out_csv) {
  return run_guarded(out_csv, [&] {
    stratum::runner::MinimizeArgs args;
    args.config_path = config_path;
    args.initial_path = initial_path;
    args.target_area = target_area;
    args.mu = mu;
    args.lambdas.assign(lambdas, lambdas + n_lambdas);
    args.knots = knots;
    args.seed = seed;
    if (out_profile_path) args.out_profile_path = out_profile_path;
    return stratum::runner::run_minimize(args);
  });
}

int stratum_run_gamma_sweep(const char* profile_path, const char* config_path,
                            const double* deltas, size_t n_deltas,
                            int with_lift, char** out_csv) {
  return run_guarded(out_csv, [&] {
    return stratum::runner::gamma_sweep(
        profile_path, config_path,
        std::vector<double>(deltas, deltas + n_deltas), with_lift != 0);
  });
}

int stratum_run_relax_sequence(const char* profile_path,
                               const char* config_path, int steps, double r,
                               const char* mode, char** out_csv) {
  return run_guarded(out_csv, [&] {
    return stratum::runner::relax_sequence(profile_path, config_path, steps, r,
                                           mode);
  });
}

int stratum_run_check_ball(const char* profile_path, double rho,
                           double spacing, char** out_report) {
  return run_guarded(out_report, [&] {
    return stratum::runner::check_ball(profile_path, rho, spacing);
  });
}

int stratum_make_manifest(const char* profile_path, const char* config_path,
                          uint64_t seed, char** out_text) {
  return run_guarded(out_text, [&] {
    std::vector<std::string> inputs;
    if (profile_path && profile_path[0]) inputs.push_back(profile_path);
    return stratum::runner::make_manifest(inputs, config_path, seed);
  });
}

}  // extern "C"
