#include "stratum/materials.hpp"

#include <algorithm>
#include <cmath>

namespace stratum::mat {

Tensor4 Tensor4::isotropic(double lambda, double mu) {
  if (!(mu > 0.0 && lambda + mu > 0.0)) {
    throw MaterialError("isotropic tensor requires mu > 0 and lambda + mu > 0");
  }
  Tensor4 c;
  // C E = 2 mu E + lambda tr(E) I; tr picks up the (1,1,0) direction.
  for (int i = 0; i < 3; ++i) c.m[3 * i + i] = 2.0 * mu;
  c.m[0] += lambda;
  c.m[1] += lambda;
  c.m[3] += lambda;
  c.m[4] += lambda;
  return c;
}

Sym2 Tensor4::apply(const Sym2& e) const {
  Sym2 r;
  for (int i = 0; i < 3; ++i) {
    r.v[i] = m[3 * i] * e.v[0] + m[3 * i + 1] * e.v[1] + m[3 * i + 2] * e.v[2];
  }
  return r;
}

bool Tensor4::is_symmetric(double tol) const {
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    }
  }
  return true;
}

namespace {

// Cyclic Jacobi eigenvalues of a symmetric 3x3 matrix.
std::array<double, 3> eigenvalues3(std::array<double, 9> a) {
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = std::abs(a[1]) + std::abs(a[2]) + std::abs(a[5]);
    if (off < 1e-15 * (std::abs(a[0]) + std::abs(a[4]) + std::abs(a[8]) + 1e-300)) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a[3 * p + q];
        if (apq == 0.0) continue;
        const double app = a[3 * p + p], aqq = a[3 * q + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        std::array<double, 9> b = a;
        for (int k = 0; k < 3; ++k) {
          b[3 * p + k] = c * a[3 * p + k] - s * a[3 * q + k];
          b[3 * q + k] = s * a[3 * p + k] + c * a[3 * q + k];
        }
        a = b;
        for (int k = 0; k < 3; ++k) {
          b[3 * k + p] = c * a[3 * k + p] - s * a[3 * k + q];
          b[3 * k + q] = s * a[3 * k + p] + c * a[3 * k + q];
        }
        a = b;
      }
    }
  }
  return {a[0], a[4], a[8]};
}

}  // namespace

double Tensor4::min_eigenvalue() const {
  const auto ev = eigenvalues3(m);
  return std::min({ev[0], ev[1], ev[2]});
}

double Tensor4::max_eigenvalue() const {
  const auto ev = eigenvalues3(m);
  return std::max({ev[0], ev[1], ev[2]});
}

Tensor4 Tensor4::operator+(const Tensor4& o) const {
  Tensor4 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
  return r;
}

Tensor4 Tensor4::operator-(const Tensor4& o) const {
  Tensor4 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
  return r;
}

Tensor4 Tensor4::operator*(double s) const {
  Tensor4 r;
  for (int i = 0; i < 9; ++i) r.m[i] = s * m[i];
  return r;
}

double boundary_layer(BoundaryLayer f, double y) {
  switch (f) {
    case BoundaryLayer::Atan:
      return (2.0 / M_PI) * std::atan(y);
    case BoundaryLayer::Tanh:
      return std::tanh(y);
  }
  return 0.0;
}

Materials::Materials(double gf, double gs, double gfs, double e0_, Tensor4 cf,
                     Tensor4 cs)
    : gamma_f(gf), gamma_s(gs), gamma_fs(gfs), e0(e0_), C_f(cf), C_s(cs) {
  if (!(gamma_f > 0.0)) throw MaterialError("gamma_f > 0 violated");
  if (!(gamma_s > 0.0)) throw MaterialError("gamma_s > 0 violated");
  if (!(gamma_s - gamma_fs >= 0.0)) {
    throw MaterialError("gamma_s - gamma_fs >= 0 violated");
  }
  if (!(e0 >= 0.0)) throw MaterialError("e0 >= 0 violated");
  if (!C_f.is_symmetric() || !C_s.is_symmetric()) {
    throw MaterialError("elasticity tensors must be symmetric");
  }
  if (!(C_f.min_eigenvalue() > 0.0 && C_s.min_eigenvalue() > 0.0)) {
    throw MaterialError("elasticity tensors must be positive definite");
  }
}

double phi(const Materials& m, double y) {
  if (y > 0.0) return m.gamma_f;
  return std::min(m.gamma_f, m.gamma_s - m.gamma_fs);
}

double phi0(const Materials& m, double y) {
  if (y < 0.0) throw MaterialError("phi0 is defined only for y >= 0");
  return y > 0.0 ? m.gamma_f : m.gamma_s;
}

double phi_delta(const Materials& m, const TransitionParams& t, double y) {
  const double f = t.f_at(y);
  return m.gamma_f * f + (m.gamma_s - m.gamma_fs) * (1.0 - f);
}

Tensor4 c_delta(const Materials& m, const TransitionParams& t, double y) {
  const double f = t.f_at(y);
  return m.C_f * (0.5 * (1.0 + f)) + m.C_s * (0.5 * (1.0 - f)) +
         (m.C_s - m.C_f) * (0.5 * (1.0 + f) * (1.0 - f));
}

const Tensor4& c_sharp(const Materials& m, double y) {
  return y > 0.0 ? m.C_f : m.C_s;
}

double w0(const Materials& m, double y, const Sym2& e) {
  return 0.5 * quad(c_sharp(m, y), e);
}

double w_delta(const Materials& m, const TransitionParams& t, double y,
               const Sym2& e) {
  return 0.5 * quad(c_delta(m, t, y), e);
}

Sym2 mismatch_sharp(const Materials& m, double y) {
  if (y >= 0.0) return Sym2::e1_dyadic_e1() * m.e0;
  return {};
}

Sym2 mismatch_delta(const Materials& m, const TransitionParams& t, double y) {
  return Sym2::e1_dyadic_e1() * (0.5 * m.e0 * (1.0 + t.f_at(y)));
}

double beta(const Materials& m) {
  return std::min(m.gamma_f, m.gamma_s - m.gamma_fs) / m.gamma_f;
}

double perimeter_bound(const Materials& m, double C) {
  if (C < 0.0) throw MaterialError("perimeter bound requires C >= 0");
  const double b = beta(m);
  if (b != 0.0) return C / (b * m.gamma_f);
  return C / std::min(m.gamma_f, m.gamma_fs);
}

}  // namespace stratum::mat
