#pragma once

// Reference computations shared by the tests. Each one is written
// independently of the library code it checks.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

#include "hybridyn/oscillator_rep.hpp"
#include "hybridyn/rng.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Composite Simpson rule on [a, b] with an even number of panels.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  cplx s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3.0);
}

// exp(-i H t) v by a truncated Taylor series with scaling and squaring.
inline Eigen::VectorXcd propagate_taylor(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v,
                                         double t) {
  const double norm = h.cwiseAbs().rowwise().sum().maxCoeff() * std::fabs(t);
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.1) ++squarings;
  const Eigen::MatrixXcd a = cplx(0.0, -t / std::pow(2.0, squarings)) * h;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
  Eigen::MatrixXcd term = u;
  for (int k = 1; k <= 20; ++k) {
    term = term * a / static_cast<double>(k);
    u += term;
  }
  for (int i = 0; i < squarings; ++i) u = u * u;
  return u * v;
}

inline Eigen::MatrixXcd dense(const hybridyn::HermitianMatrix& g) {
  const auto n = static_cast<Eigen::Index>(g.dim());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = g(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

// <psi|G|psi> with psi_i = (X_i + i P_i)/sqrt(2).
inline double expectation(const hybridyn::HermitianMatrix& g, const hybridyn::QmPhasePoint& q) {
  const auto n = static_cast<Eigen::Index>(q.dim());
  Eigen::VectorXcd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) psi(i) = cplx(q.X[i], q.P[i]) / std::sqrt(2.0);
  return (psi.adjoint() * dense(g) * psi)(0, 0).real();
}

inline hybridyn::QmPhasePoint sphere_point(std::size_t n, hybridyn::Philox& rng) {
  hybridyn::QmPhasePoint q;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q.X.push_back(rng.normal());
    q.P.push_back(rng.normal());
    s += q.X.back() * q.X.back() + q.P.back() * q.P.back();
  }
  const double scale = std::sqrt(2.0 / s);
  for (std::size_t i = 0; i < n; ++i) {
    q.X[i] *= scale;
    q.P[i] *= scale;
  }
  return q;
}

inline hybridyn::HermitianMatrix hermitian(std::size_t n, hybridyn::Philox& rng) {
  Eigen::MatrixXcd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
  return hybridyn::HermitianMatrix::from_dense(0.5 * (a + a.adjoint()));
}

}  // namespace oracle
