#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stratum::mat {

class MaterialError : public std::runtime_error {
 public:
  explicit MaterialError(const std::string& what) : std::runtime_error(what) {}
};

/// Symmetric 2x2 matrix in the orthonormal Voigt basis (E11, E22, sqrt(2) E12).
struct Sym2 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  static Sym2 from_components(double e11, double e22, double e12) {
    return {{e11, e22, std::sqrt(2.0) * e12}};
  }
  static Sym2 e1_dyadic_e1() { return {{1.0, 0.0, 0.0}}; }

  double e11() const { return v[0]; }
  double e22() const { return v[1]; }
  double e12() const { return v[2] / std::sqrt(2.0); }
  double norm2() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

  Sym2 operator+(const Sym2& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
  Sym2 operator-(const Sym2& o) const { return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}}; }
  Sym2 operator*(double s) const { return {{s * v[0], s * v[1], s * v[2]}}; }
};

inline double dot(const Sym2& a, const Sym2& b) {
  return a.v[0] * b.v[0] + a.v[1] * b.v[1] + a.v[2] * b.v[2];
}

/// Fourth-order tensor with major and minor symmetries, acting on Sym2: a
/// symmetric 3x3 matrix in the same basis.
struct Tensor4 {
  // Row-major upper storage of a symmetric 3x3 matrix.
  std::array<double, 9> m{};

  static Tensor4 isotropic(double lambda, double mu);
  static Tensor4 zero() { return {}; }

  double at(int i, int j) const { return m[3 * i + j]; }
  Sym2 apply(const Sym2& e) const;
  bool is_symmetric(double tol = 1e-12) const;
  /// Smallest eigenvalue of the 3x3 matrix (Jacobi iteration).
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  Tensor4 operator+(const Tensor4& o) const;
  Tensor4 operator-(const Tensor4& o) const;
  Tensor4 operator*(double s) const;
};

/// Quadratic form E : C E.
inline double quad(const Tensor4& c, const Sym2& e) { return dot(c.apply(e), e); }

enum class BoundaryLayer { Atan, Tanh };

/// Boundary-layer function value f(y): smooth, increasing, f(0)=0, f(+-inf)=+-1.
double boundary_layer(BoundaryLayer f, double y);

struct TransitionParams {
  double delta;
  BoundaryLayer f = BoundaryLayer::Atan;

  TransitionParams(double delta_, BoundaryLayer f_ = BoundaryLayer::Atan)
      : delta(delta_), f(f_) {
    if (!(delta > 0.0)) throw MaterialError("delta must be > 0");
  }
  double f_at(double y) const { return boundary_layer(f, y / delta); }
};

struct Materials {
  double gamma_f;
  double gamma_s;
  double gamma_fs;
  double e0;
  Tensor4 C_f;
  Tensor4 C_s;

  Materials(double gf, double gs, double gfs, double e0_, Tensor4 cf, Tensor4 cs);
};

/// Surface density of the relaxed model: gamma_f above the substrate,
/// min{gamma_f, gamma_s - gamma_fs} at and below y = 0.
double phi(const Materials& m, double y);

/// Sharp-interface density: gamma_f for y > 0, gamma_s at y = 0; undefined below.
double phi0(const Materials& m, double y);

/// Transition-layer density gamma_f f(y/d) + (gamma_s - gamma_fs)(1 - f(y/d)).
double phi_delta(const Materials& m, const TransitionParams& t, double y);

/// Regularized elasticity tensor; C_delta(0) = C_s, C_delta(+inf) = C_f.
Tensor4 c_delta(const Materials& m, const TransitionParams& t, double y);

/// Sharp elasticity tensor C(y): C_f for y > 0, C_s otherwise.
const Tensor4& c_sharp(const Materials& m, double y);

double w0(const Materials& m, double y, const Sym2& e);
double w_delta(const Materials& m, const TransitionParams& t, double y, const Sym2& e);

/// Sharp mismatch strain e0 (e1 (x) e1) 1{y >= 0}.
Sym2 mismatch_sharp(const Materials& m, double y);
/// Regularized mismatch strain (e0/2)(1 + f(y/d)) e1 (x) e1.
Sym2 mismatch_delta(const Materials& m, const TransitionParams& t, double y);

/// beta = min{gamma_f, gamma_s - gamma_fs} / gamma_f, in [0,1].
double beta(const Materials& m);

/// Perimeter bound M(C) of profiles with energy at most C.
double perimeter_bound(const Materials& m, double C);

}  // namespace stratum::mat
