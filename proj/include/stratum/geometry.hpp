#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratum::geom {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Point a;
  Point b;
  double length() const;
};

double point_segment_distance(const Point& p, const Segment& s);

/// Strip [a,b] on the x-axis, b > a > 0.
struct Interval {
  double a;
  double b;
  Interval(double a_, double b_);
  double length() const { return b - a; }
};

struct Knot {
  double x;
  double y;
};

/// Vertical jump segment at x: the one-sided limits are {y_low, y_high}.
struct JumpMark {
  double x;
  double y_low;
  double y_high;
};

/// Vertical cut at x hanging below the lower envelope: h(x) = y_bottom < h^-(x) = y_top.
struct CutMark {
  double x;
  double y_bottom;
  double y_top;
};

/// One maximal linear piece of the height function on (x0, x1).
/// y0/y1 are the one-sided limits at the piece ends, so consecutive pieces
/// disagree at a shared x exactly when the profile jumps there.
struct LinearPiece {
  double x0, x1;
  double y0, y1;
  double value_at(double x) const;
  double slope() const;
  double length() const;
};

class ProfileError : public std::runtime_error {
 public:
  explicit ProfileError(const std::string& what) : std::runtime_error(what) {}
};

/// Piecewise-linear lower-semicontinuous height profile with explicit jump
/// and cut markers. Immutable after construction; construction validates
/// every invariant and compiles the piece list.
class Profile {
 public:
  Profile(Interval interval, std::vector<Knot> knots,
          std::vector<JumpMark> jumps = {}, std::vector<CutMark> cuts = {});

  /// Constant profile on [a,b].
  static Profile constant(Interval interval, double height);

  const Interval& interval() const { return interval_; }
  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<JumpMark>& jumps() const { return jumps_; }
  const std::vector<CutMark>& cuts() const { return cuts_; }
  const std::vector<LinearPiece>& pieces() const { return pieces_; }

  /// Pointwise (lsc) value, cut marks included.
  double value(double x) const;
  /// Limits of the piecewise interpolant, ignoring the cut at x itself.
  double left_limit(double x) const;
  double right_limit(double x) const;

  double max_height() const;
  double total_variation() const;

  bool is_lipschitz() const { return jumps_.empty() && cuts_.empty(); }
  /// Largest |slope| over the linear pieces.
  double lipschitz_constant() const;

 private:
  Interval interval_;
  std::vector<Knot> knots_;
  std::vector<JumpMark> jumps_;
  std::vector<CutMark> cuts_;
  std::vector<LinearPiece> pieces_;
  void validate_and_compile();
};

/// (h^-(x), h^+(x)) = liminf / limsup of the profile at x.
struct Envelopes {
  double h_minus;
  double h_plus;
};

Envelopes envelopes(const Profile& p, double x);

/// One maximal x-interval (or point) where h = 0.
struct ZeroPart {
  double x0, x1;  // x0 == x1 for an isolated zero
  bool is_interval() const { return x1 > x0; }
};

struct BoundaryDecomposition {
  std::vector<Segment> graph_part;
  std::vector<Segment> jump_part;
  std::vector<Segment> cut_part;
  std::vector<Point> cusp_points;
  std::vector<Segment> tilde_gamma;  // graph + jump = Gamma_h \ cuts
  std::vector<ZeroPart> zero_set;

  double graph_length() const;
  double jump_length() const;
  double cut_length() const;
  double total_length() const;        // H^1(Gamma_h)
  double tilde_length() const;        // H^1(tilde Gamma_h)
  double zero_set_measure() const;    // 1-d measure of the projected zero set
};

/// Slope beyond which a one-sided derivative counts as infinite for cusp
/// detection.
inline constexpr double kDefaultCuspSlope = 1e6;

BoundaryDecomposition decompose(const Profile& p,
                                double cusp_slope = kDefaultCuspSlope);

/// |Omega_h^+| = integral of h over [a,b]; exact trapezoid sum.
double film_area(const Profile& p);

/// Integral of |h_p - h_q| on the merged knot grid; exact.
double symmetric_difference_area(const Profile& p, const Profile& q);

/// Hausdorff distance between the strip-restricted complements of the two
/// subgraphs, evaluated on boundary samples with the given spacing fraction
/// of (b-a).
double hausdorff_complement_distance(const Profile& p, const Profile& q,
                                     double sample_spacing_rel = 1e-4);

}  // namespace stratum::geom
