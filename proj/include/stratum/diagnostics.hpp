#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stratum/energy.hpp"
#include "stratum/fem.hpp"
#include "stratum/geometry.hpp"
#include "stratum/materials.hpp"

namespace stratum::diag {

class DiagError : public std::runtime_error {
 public:
  explicit DiagError(const std::string& what) : std::runtime_error(what) {}
};

struct BallWitness {
  geom::Point z;
  geom::Point center;
};

struct BallViolation {
  geom::Point z;
  double best_rho = 0.0;  // largest radius still admissible at z
};

struct BallCertificate {
  double rho = 0.0;
  double rho0 = 0.0;  // largest passing dyadic radius in sweep mode
  bool passed = false;
  double sample_spacing = 0.0;
  std::vector<BallWitness> witnesses;
  std::vector<BallViolation> violations;
};

/// Tests whether every sampled boundary point is touched from inside the
/// film by a ball of radius rho lying in Omega_h (intersected with the
/// strip); 32 candidate directions per sample in the inward normal cone.
BallCertificate internal_ball_check(const geom::Profile& p, double rho,
                                    double spacing);

/// Dyadic sweep of radii in [spacing, (b-a)/2]; rho0 is the largest that
/// passes.
BallCertificate internal_ball_sweep(const geom::Profile& p, double spacing);

struct IsoperimetricProbe {
  double theta = 0.0;     // arc length over chord length
  double area = 0.0;      // region between arc and chord
  double slack = 0.0;     // (theta+1) chord / (2 sqrt(pi)) - sqrt(area)
};

/// Region cut off by the chord [p1, p2] between two boundary points with
/// the chord inside Omega_h; checks sqrt|D| <= (theta+1) chord/(2 sqrt(pi)).
IsoperimetricProbe isoperimetric_probe(const geom::Profile& p, geom::Point p1,
                                       geom::Point p2);

struct GammaRow {
  double delta = 0.0;
  double f_delta_total = 0.0;
  double f_total = 0.0;
  double gap = 0.0;
  double lift_t = 0.0;  // cap height when a dewetting lift was applied
};

/// Evaluates the transition-layer energy against the sharp one along a
/// decreasing delta schedule; when with_lift is set the profile is first
/// lifted off the substrate with eps = sqrt(delta).
std::vector<GammaRow> gamma_sweep(const fem::Displacement* u,
                                  const geom::Profile& p,
                                  const mat::Materials& m,
                                  mat::BoundaryLayer f,
                                  const std::vector<double>& deltas,
                                  bool with_lift = false);

struct LocalGraph {
  geom::Point at;
  double lipschitz = 0.0;
  bool two_sided = false;  // cut neighborhood with matched one-sided graphs
};

struct BoundaryClassification {
  std::vector<geom::Segment> regular;
  std::vector<geom::Point> cusps;
  std::vector<geom::Segment> cut_segments;
  std::vector<LocalGraph> local_graphs;
};

BoundaryClassification classify_boundary(const geom::Profile& p);

}  // namespace stratum::diag
