#include "hybridyn/oscillator_rep.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "hybridyn/errors.hpp"
#include "hybridyn/simd/kernels.hpp"

namespace hybridyn {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void require_well_formed(const QmPhasePoint& p) {
  if (p.X.size() != p.P.size()) {
    throw DimensionError("phase point has " + std::to_string(p.X.size()) +
                         " coordinates but " + std::to_string(p.P.size()) +
                         " momenta");
  }
}

// Scratch for w = G z; dimensions here are small, so a local vector is fine.
struct MatVec {
  std::vector<double> re;
  std::vector<double> im;
};

MatVec apply(const HermitianMatrix& g, const QmPhasePoint& point) {
  const std::size_t n = g.dim();
  MatVec w{std::vector<double>(n), std::vector<double>(n)};
  simd::active().complex_matvec(n, g.re_data(), g.im_data(), point.X.data(),
                                point.P.data(), w.re.data(), w.im.data());
  return w;
}

}  // namespace

double QuantumState::norm_squared() const noexcept {
  double s = 0.0;
  for (const cplx& c : amplitudes) s += std::norm(c);
  return s;
}

HermitianMatrix::HermitianMatrix(std::size_t n)
    : n_(n), re_(n * n, 0.0), im_(n * n, 0.0) {}

HermitianMatrix HermitianMatrix::from_dense(const Eigen::MatrixXcd& m,
                                            double tolerance) {
  if (m.rows() != m.cols()) {
    throw DimensionError("Hermitian matrix must be square");
  }
  const auto n = static_cast<std::size_t>(m.rows());
  double scale = 0.0;
  double skew = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      skew = std::max(skew, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  if (skew > tolerance * std::max(1.0, scale)) {
    throw HermiticityError("matrix is not Hermitian (max |G_ij - conj(G_ji)| = " +
                           std::to_string(skew) + ")");
  }
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h.re_[i * n + i] = m(ii, ii).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const cplx v = 0.5 * (m(ii, jj) + std::conj(m(jj, ii)));
      h.set(i, j, v);
    }
  }
  return h;
}

HermitianMatrix HermitianMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows, double tolerance) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw DimensionError("Hermitian matrix rows must all have length " +
                           std::to_string(n));
    }
    Eigen::Index j = 0;
    for (const cplx& v : row) m(i, j++) = v;
    ++i;
  }
  return from_dense(m, tolerance);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) h.re_[i * n + i] = 1.0;
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix h(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) h.re_[i * d.size() + i] = d[i];
  return h;
}

HermitianMatrix HermitianMatrix::pauli_x() {
  HermitianMatrix h(2);
  h.set(0, 1, 1.0);
  return h;
}

HermitianMatrix HermitianMatrix::pauli_y() {
  HermitianMatrix h(2);
  h.set(0, 1, cplx(0.0, -1.0));
  return h;
}

HermitianMatrix HermitianMatrix::pauli_z() {
  const double d[] = {1.0, -1.0};
  return diagonal(d);
}

void HermitianMatrix::set(std::size_t i, std::size_t j, cplx value) {
  if (i >= n_ || j >= n_) throw DimensionError("Hermitian matrix index out of range");
  if (i == j) {
    if (value.imag() != 0.0) {
      throw HermiticityError("diagonal entry of a Hermitian matrix must be real");
    }
    re_[i * n_ + i] = value.real();
    im_[i * n_ + i] = 0.0;
    return;
  }
  re_[i * n_ + j] = value.real();
  im_[i * n_ + j] = value.imag();
  re_[j * n_ + i] = value.real();
  im_[j * n_ + i] = -value.imag();
}

Eigen::MatrixXcd HermitianMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j);
    }
  }
  return m;
}

bool HermitianMatrix::is_zero(double tolerance) const noexcept {
  return max_abs_entry() <= tolerance;
}

double HermitianMatrix::max_abs_entry() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < re_.size(); ++k) {
    m = std::max(m, std::hypot(re_[k], im_[k]));
  }
  return m;
}

HermitianMatrix HermitianMatrix::squared() const {
  const Eigen::MatrixXcd d = to_dense();
  const Eigen::MatrixXcd sq = d * d;
  HermitianMatrix h(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h.re_[i * n_ + i] = sq(ii, ii).real();
    for (std::size_t j = i + 1; j < n_; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      h.set(i, j, 0.5 * (sq(ii, jj) + std::conj(sq(jj, ii))));
    }
  }
  return h;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  require_same_dim(n_, other.n_, "matrix sum");
  for (std::size_t k = 0; k < re_.size(); ++k) {
    re_[k] += other.re_[k];
    im_[k] += other.im_[k];
  }
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  require_same_dim(n_, other.n_, "matrix difference");
  for (std::size_t k = 0; k < re_.size(); ++k) {
    re_[k] -= other.re_[k];
    im_[k] -= other.im_[k];
  }
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) noexcept {
  for (double& v : re_) v *= s;
  for (double& v : im_) v *= s;
  return *this;
}

HermitianMatrix commutator_over_i(const HermitianMatrix& a,
                                  const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "commutator");
  const Eigen::MatrixXcd da = a.to_dense();
  const Eigen::MatrixXcd db = b.to_dense();
  const Eigen::MatrixXcd c = (da * db - db * da) * cplx(0.0, -1.0);
  return HermitianMatrix::from_dense(c, 1e-10);
}

double constraint(const QmPhasePoint& point) noexcept {
  double s = 0.0;
  for (double v : point.X) s += v * v;
  for (double v : point.P) s += v * v;
  return 0.5 * s;
}

QmPhasePoint state_to_phase(const QuantumState& state, double tolerance) {
  const double norm = state.norm_squared();
  if (!(std::fabs(norm - 1.0) <= tolerance)) {
    throw NormalizationError("state is not normalized: <psi|psi> = " +
                             std::to_string(norm));
  }
  QmPhasePoint p;
  p.X.reserve(state.dim());
  p.P.reserve(state.dim());
  for (const cplx& c : state.amplitudes) {
    p.X.push_back(std::numbers::sqrt2 * c.real());
    p.P.push_back(std::numbers::sqrt2 * c.imag());
  }
  return p;
}

QuantumState phase_to_state(const QmPhasePoint& point, double tolerance) {
  require_well_formed(point);
  const double c = constraint(point);
  if (!(std::fabs(c - 1.0) <= tolerance)) {
    throw NormalizationError("phase point is off the constraint sphere: C = " +
                             std::to_string(c));
  }
  QuantumState s;
  s.amplitudes.reserve(point.dim());
  const double inv = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < point.dim(); ++i) {
    s.amplitudes.emplace_back(point.X[i] * inv, point.P[i] * inv);
  }
  return s;
}

cplx quadratic_form(const HermitianMatrix& g, const QmPhasePoint& point) {
  require_well_formed(point);
  require_same_dim(g.dim(), point.dim(), "quadratic form");
  const MatVec w = apply(g, point);
  const auto& k = simd::active();
  const std::size_t n = g.dim();
  // conj(z) . w with z = X + iP
  const double re = k.dot(n, point.X.data(), w.re.data()) +
                    k.dot(n, point.P.data(), w.im.data());
  const double im = k.dot(n, point.X.data(), w.im.data()) -
                    k.dot(n, point.P.data(), w.re.data());
  return 0.5 * cplx(re, im);
}

double eval_observable(const HermitianMatrix& g, const QmPhasePoint& point) {
  return quadratic_form(g, point).real();
}

PhaseGradient observable_gradient(const HermitianMatrix& g,
                                  const QmPhasePoint& point) {
  require_well_formed(point);
  require_same_dim(g.dim(), point.dim(), "observable gradient");
  MatVec w = apply(g, point);
  return {std::move(w.re), std::move(w.im)};
}

double qm_poisson(const HermitianMatrix& f, const HermitianMatrix& g,
                  const QmPhasePoint& point) {
  const PhaseGradient df = observable_gradient(f, point);
  const PhaseGradient dg = observable_gradient(g, point);
  const auto& k = simd::active();
  const std::size_t n = point.dim();
  return k.dot(n, df.dX.data(), dg.dP.data()) - k.dot(n, df.dP.data(), dg.dX.data());
}

QuantumState schrodinger_reference(const HermitianMatrix& h,
                                   const QuantumState& state0, double t) {
  require_same_dim(h.dim(), state0.dim(), "Schrodinger propagation");
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.to_dense());
  if (eig.info() != Eigen::Success) {
    throw HermiticityError("eigendecomposition of the Hamiltonian failed");
  }
  Eigen::VectorXcd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) psi(i) = state0.amplitudes[static_cast<std::size_t>(i)];
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  Eigen::VectorXcd coeff = v.adjoint() * psi;
  for (Eigen::Index i = 0; i < n; ++i) {
    coeff(i) *= std::exp(cplx(0.0, -eig.eigenvalues()(i) * t));
  }
  const Eigen::VectorXcd out = v * coeff;
  QuantumState s;
  s.amplitudes.assign(out.data(), out.data() + n);
  return s;
}

QmPhasePoint apply_unitary(const Eigen::MatrixXcd& u, const QmPhasePoint& point) {
  require_well_formed(point);
  require_same_dim(static_cast<std::size_t>(u.rows()), point.dim(), "unitary map");
  require_same_dim(static_cast<std::size_t>(u.cols()), point.dim(), "unitary map");
  const auto n = static_cast<Eigen::Index>(point.dim());
  Eigen::VectorXcd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = cplx(point.X[static_cast<std::size_t>(i)], point.P[static_cast<std::size_t>(i)]);
  }
  const Eigen::VectorXcd w = u * z;
  QmPhasePoint out;
  out.X.resize(point.dim());
  out.P.resize(point.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.X[static_cast<std::size_t>(i)] = w(i).real();
    out.P[static_cast<std::size_t>(i)] = w(i).imag();
  }
  return out;
}

}  // namespace hybridyn
