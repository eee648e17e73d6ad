#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratum/io.hpp"

namespace stratum::runner {

/// Certificate-style failures (a check ran fine and reported "no").
class CertificateFailure : public std::runtime_error {
 public:
  explicit CertificateFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// Parallelism cap from STRATUM_THREADS (>= 1); the current implementation
/// is sequential, so the cap is trivially honored.
int max_threads();

/// delta_override > 0 replaces the config's delta for this evaluation.
std::string evaluate(const std::string& profile_path,
                     const std::string& config_path,
                     const std::string& functional,
                     double delta_override = 0.0);

struct MinimizeArgs {
  std::string config_path;
  std::string initial_path;
  double target_area = 0.0;
  double mu = 0.0;
  std::vector<double> lambdas;
  int knots = 64;
  std::uint64_t seed = 1;
  std::string out_profile_path;  // empty: do not write
};

std::string run_minimize(const MinimizeArgs& args);

std::string gamma_sweep(const std::string& profile_path,
                        const std::string& config_path,
                        const std::vector<double>& deltas, bool with_lift);

std::string relax_sequence(const std::string& profile_path,
                           const std::string& config_path, int steps, double r,
                           const std::string& mode);

/// Throws CertificateFailure when the ball check rejects; the report text
/// is embedded in the exception in that case as well.
std::string check_ball(const std::string& profile_path, double rho,
                       double spacing);

std::string make_manifest(const std::vector<std::string>& input_paths,
                          const std::string& config_path, std::uint64_t seed);

}  // namespace stratum::runner
