#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/fem.hpp"
#include "stratum/geometry.hpp"

namespace stratum::relax {

class RelaxError : public std::runtime_error {
 public:
  explicit RelaxError(const std::string& what) : std::runtime_error(what) {}
};

/// Absolute tolerance on film areas for the volume-correction step.
inline constexpr double kTolQuad = 1e-10;

/// Yosida transform h_L(x) = inf_z { h(z) + L|x - z| }, evaluated on the
/// pointwise (lsc) values of the profile; jumps ramp with slope L and cuts
/// pull the approximant down to the cut bottom. The result is L-Lipschitz,
/// 0 <= h_L <= h, and increases pointwise in L.
geom::Profile yosida_transform(const geom::Profile& p, double L);

std::vector<geom::Profile> lipschitz_approximants(
    const geom::Profile& p, const std::vector<double>& L_schedule);

/// Default schedule L_k = 2^k L_0 with L_0 = 4 Var(h)/(b-a), k = 0..n-1.
std::vector<double> default_L_schedule(const geom::Profile& p, int n);

struct VolumeCorrection {
  geom::Profile h_n;
  double eps_n = 0.0;
  double lambda_n = 0.0;
  double mu_n = 0.0;
};

/// Restores the film area lost by the Lipschitz approximation: with
/// deficit d = target - area(tilde_h), lambda = d^r, the profile is left
/// at 0 where it vanishes, raised by eps where it exceeds lambda, and
/// scaled by (1 + eps/lambda) below; eps = d / mu makes the restoration
/// exact.
VolumeCorrection volume_correct(const geom::Profile& tilde_h,
                                double target_area, double r);

/// u_n(x, y) = u(x, y - eps) above y0 + eps, the frozen trace u(x, y0) on
/// the buffer strip, unchanged below; resampled on the nodes of target
/// (defaults to the mesh of u).
fem::Displacement shift_displacement(const fem::Displacement& u, double eps_n,
                                     double y0,
                                     const fem::Mesh* target = nullptr);

struct DewettingLift {
  geom::Profile h_n;
  double t_n = 0.0;
};

/// h_n = min{p + eps, t} with t chosen by bisection so the film area is
/// preserved; the lifted boundary stays strictly above y = 0.
DewettingLift dewetting_lift(const geom::Profile& p, double eps_n);

struct VitaliReport {
  double empirical_mu = 0.0;  // inf over recorded steps
  double trend_slope = 0.0;   // least-squares slope of the per-step bound
  bool decays = false;
  std::vector<double> per_step;
};

/// Per-step bound |{h_n >= lambda_n}| + (1/lambda_n) int_{h_n < lambda_n} h_n
/// and its infimum; flags a decay trend toward zero.
VitaliReport vitali_lower_bound(const std::vector<geom::Profile>& h_seq,
                                const std::vector<double>& lambda_seq);

struct RecoveryStep {
  int n = 0;
  double L = 0.0;
  geom::Profile h_tilde;
  geom::Profile h_n;
  double eps_n = 0.0;
  double lambda_n = 0.0;
  double mu_n = 0.0;
  double area_err = 0.0;
  double sigma_n = 0.0;  // (eps/lambda)^2 + 2 eps/lambda
};

struct RecoverySequence {
  geom::Profile target;
  double r = 0.5;
  bool dewetting = false;
  std::vector<RecoveryStep> steps;
};

/// Composes the approximation pipeline: Yosida transforms along the L
/// schedule, then exact volume correction per step.
RecoverySequence build_recovery_sequence(const geom::Profile& target, double r,
                                         const std::vector<double>& L_schedule);

}  // namespace stratum::relax
