#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/energy.hpp"
#include "stratum/fem.hpp"
#include "stratum/geometry.hpp"
#include "stratum/materials.hpp"

namespace stratum::minimize {

class MinimizeError : public std::runtime_error {
 public:
  explicit MinimizeError(const std::string& what) : std::runtime_error(what) {}
};

struct MinimizeSpec {
  geom::Profile initial;
  double target_area = 0.0;
  double mu = 0.0;  // locality radius in area units
  std::vector<double> lambda_schedule;
  int knot_count = 64;
  int max_outer_iters = 200;
  double tol_step = 1e-7;
  double tol_area = 1e-6;
  double tol_cert = 1e-8;
  std::uint64_t seed = 1;
  // FEM settings; depth <= 0 skips the elastic solve (pure surface descent).
  double fem_depth = 0.0;
  double fem_resolution = 0.0;
  double tol_solve = 1e-10;
};

struct IterationRecord {
  double lambda = 0.0;
  int iter = 0;
  double penalized = 0.0;
  double area_error = 0.0;
  double step_norm = 0.0;
  double boundary_length = 0.0;
};

struct MinimizeResult {
  geom::Profile profile;
  energy::EnergyReport report;
  double lambda_used = 0.0;
  double area_error = 0.0;
  double locality_used = 0.0;
  bool converged = false;
  bool certificate_ok = false;
  std::vector<IterationRecord> log;
};

/// Total energy at the elastic equilibrium for p plus
/// lambda |film_area(p) - target_area|.
double penalized_energy(const geom::Profile& p, const mat::Materials& m,
                        double lambda, double target_area,
                        const MinimizeSpec& spec);

/// Projected descent on nodal heights for each lambda in the schedule;
/// returns the first lambda whose minimizer meets the area tolerance.
MinimizeResult run(const MinimizeSpec& spec, const mat::Materials& m);

}  // namespace stratum::minimize
