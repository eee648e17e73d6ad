#pragma once

#include <functional>
#include <optional>
#include <string>

#include "stratum/fem.hpp"
#include "stratum/geometry.hpp"
#include "stratum/materials.hpp"

namespace stratum::energy {

class EnergyError : public std::runtime_error {
 public:
  explicit EnergyError(const std::string& what) : std::runtime_error(what) {}
};

enum class Functional { F, F0, Fdelta, FdeltaRelaxed };

std::string functional_name(Functional f);

struct EnergyReport {
  double bulk = 0.0;
  double surface = 0.0;
  double cut_term = 0.0;
  double wetting_term = 0.0;
  double total = 0.0;
  Functional functional_tag = Functional::F;
  double truncation_depth = 0.0;
  double resolution = 0.0;
};

/// Adaptive Simpson quadrature, relative tolerance per call.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9);

struct EvalOptions {
  /// Substrate truncation for bulk terms evaluated without a displacement
  /// (delta modes integrate the mismatch tail down to -depth).
  double depth = 0.0;  // 0: use 2 * max h
  double resolution = 0.0;
  /// Relaxed functional: use E_delta instead of the printed E_0 in the bulk.
  bool use_regularized_mismatch = false;
};

/// The displacement is optional; absent means u = 0, for which the bulk term
/// has a closed form valid for any admissible profile (jumps and cuts
/// included).
EnergyReport eval_F(const fem::Displacement* u, const geom::Profile& p,
                    const mat::Materials& m, const EvalOptions& opt = {});

EnergyReport eval_F0(const fem::Displacement* u, const geom::Profile& p,
                     const mat::Materials& m, const EvalOptions& opt = {});

EnergyReport eval_Fdelta(const fem::Displacement* u, const geom::Profile& p,
                         const mat::Materials& m,
                         const mat::TransitionParams& t,
                         const EvalOptions& opt = {});

EnergyReport eval_Fdelta_relaxed(const fem::Displacement* u,
                                 const geom::Profile& p,
                                 const mat::Materials& m,
                                 const mat::TransitionParams& t,
                                 const EvalOptions& opt = {});

/// Surface integral of phi over the given boundary segments (exact, the
/// density is piecewise constant).
double surface_integral_phi(const mat::Materials& m,
                            const std::vector<geom::Segment>& segments);

double surface_integral_phi_delta(const mat::Materials& m,
                                  const mat::TransitionParams& t,
                                  const std::vector<geom::Segment>& segments);

}  // namespace stratum::energy
