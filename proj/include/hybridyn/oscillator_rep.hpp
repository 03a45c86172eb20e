#pragma once

// Oscillator representation of a finite-dimensional quantum system.
//
// A state |psi> = sum_i c_i |phi_i> is coordinatized by real canonical pairs
// (X_i, P_i) with c_i = (X_i + i P_i) / sqrt(2). Normalization becomes the
// constraint C = 1/2 sum_i (X_i^2 + P_i^2) = 1, and every observable G is the
// quadratic form 1/2 sum_ij G_ij (X_i - i P_i)(X_j + i P_j) = <psi|G|psi>.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hybridyn {

using cplx = std::complex<double>;

inline constexpr double kDefaultConstraintTolerance = 1e-9;

struct QuantumState {
  std::vector<cplx> amplitudes;

  std::size_t dim() const noexcept { return amplitudes.size(); }
  double norm_squared() const noexcept;
};

struct QmPhasePoint {
  std::vector<double> X;
  std::vector<double> P;

  std::size_t dim() const noexcept { return X.size(); }
};

// Self-adjoint N x N matrix in a fixed orthonormal basis, stored row-major as
// separate real and imaginary planes. The stored entries satisfy
// G(i,j) == conj(G(j,i)) exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t n);

  // Rejects input whose anti-Hermitian part exceeds `tolerance` (absolute,
  // scaled by the largest entry), then stores the Hermitian part exactly.
  static HermitianMatrix from_dense(const Eigen::MatrixXcd& m,
                                    double tolerance = 1e-12);
  static HermitianMatrix from_rows(
      std::initializer_list<std::initializer_list<cplx>> rows,
      double tolerance = 1e-12);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix pauli_x();
  static HermitianMatrix pauli_y();
  static HermitianMatrix pauli_z();

  std::size_t dim() const noexcept { return n_; }
  cplx operator()(std::size_t i, std::size_t j) const noexcept {
    return {re_[i * n_ + j], im_[i * n_ + j]};
  }

  // Sets G(i,j) and its mirror G(j,i) = conj(value). Diagonal entries must be
  // real.
  void set(std::size_t i, std::size_t j, cplx value);

  const double* re_data() const noexcept { return re_.data(); }
  const double* im_data() const noexcept { return im_.data(); }

  Eigen::MatrixXcd to_dense() const;
  bool is_zero(double tolerance = 0.0) const noexcept;
  double max_abs_entry() const noexcept;

  // Matrix product A * A, which is again Hermitian.
  HermitianMatrix squared() const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s) noexcept;

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
    return a += b;
  }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
    return a -= b;
  }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

// (A B - B A) / i, the Hermitian operator whose expectation equals the
// phase-space bracket {A, B}.
HermitianMatrix commutator_over_i(const HermitianMatrix& a,
                                  const HermitianMatrix& b);

double constraint(const QmPhasePoint& point) noexcept;

QmPhasePoint state_to_phase(const QuantumState& state,
                            double tolerance = kDefaultConstraintTolerance);
QuantumState phase_to_state(const QmPhasePoint& point,
                            double tolerance = kDefaultConstraintTolerance);

// Complex value of 1/2 z^H G z. The imaginary part is roundoff only.
cplx quadratic_form(const HermitianMatrix& g, const QmPhasePoint& point);

double eval_observable(const HermitianMatrix& g, const QmPhasePoint& point);

struct PhaseGradient {
  std::vector<double> dX;
  std::vector<double> dP;
};

// dG/dX_i = Re (G z)_i and dG/dP_i = Im (G z)_i.
PhaseGradient observable_gradient(const HermitianMatrix& g,
                                  const QmPhasePoint& point);

// sum_i (dF/dX_i dG/dP_i - dF/dP_i dG/dX_i)
double qm_poisson(const HermitianMatrix& f, const HermitianMatrix& g,
                  const QmPhasePoint& point);

// exp(-i H t) |psi0> by eigendecomposition of H.
QuantumState schrodinger_reference(const HermitianMatrix& h,
                                   const QuantumState& state0, double t);

// Canonical map induced by a unitary U acting on the amplitudes. U is not
// checked for unitarity.
QmPhasePoint apply_unitary(const Eigen::MatrixXcd& u, const QmPhasePoint& point);

}  // namespace hybridyn
