#pragma once

// Hybrid observables on the product of a classical phase space (x_k, p_k)
// and the quantum constraint sphere (X_i, P_i), and the generalized bracket
// {A, B} = {A, B}_CL + {A, B}_QM acting on them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hybridyn/oscillator_rep.hpp"

namespace hybridyn {

struct ClPhasePoint {
  std::vector<double> x;
  std::vector<double> p;

  std::size_t dim() const noexcept { return x.size(); }
};

struct HybridPoint {
  ClPhasePoint cl;
  QmPhasePoint qm;

  std::size_t cl_dim() const noexcept { return cl.dim(); }
  std::size_t qm_dim() const noexcept { return qm.dim(); }
};

// Flat layout used by the integrators: x(n), p(n), X(N), P(N).
std::vector<double> flatten(const HybridPoint& point);
HybridPoint unflatten(std::span<const double> flat, std::size_t n, std::size_t N);

// Classical scalar and its partial derivatives at a point.
struct ScalarPart {
  double value = 0.0;
  std::vector<double> d_dx;  // empty means identically zero
  std::vector<double> d_dp;
};

// Hermitian coefficient matrix A(x, p) and its partial derivative matrices.
struct MatrixPart {
  HermitianMatrix value;
  std::vector<HermitianMatrix> d_dx;  // empty means identically zero
  std::vector<HermitianMatrix> d_dp;
};

enum class Sector { cl, qm, hybrid };

const char* sector_name(Sector s) noexcept;

// A(x, p; X, P) = s(x, p) + 1/2 sum_ij A_ij(x, p) (X_i - i P_i)(X_j + i P_j).
//
// Both parts carry analytic derivatives. Either part may be absent, which
// means identically zero. Immutable after construction.
class HybridObservable {
 public:
  using ScalarFn = std::function<ScalarPart(const ClPhasePoint&)>;
  using MatrixFn = std::function<MatrixPart(const ClPhasePoint&)>;

  HybridObservable(std::size_t n, std::size_t N, ScalarFn scalar, MatrixFn matrix,
                   std::optional<Sector> declared = std::nullopt);

  // Pure classical observable.
  static HybridObservable classical(std::size_t n, std::size_t N, ScalarFn scalar);
  // Constant quadratic form <G>.
  static HybridObservable quantum(std::size_t n, const HermitianMatrix& g);
  // The canonical coordinate x_k or momentum p_k.
  static HybridObservable position(std::size_t n, std::size_t N, std::size_t k);
  static HybridObservable momentum(std::size_t n, std::size_t N, std::size_t k);
  // coeff * x_k * <G> (or p_k when `momentum` is set).
  static HybridObservable coordinate_times(std::size_t n, std::size_t k,
                                           bool momentum, const HermitianMatrix& g,
                                           double coeff = 1.0);

  std::size_t cl_dim() const noexcept { return n_; }
  std::size_t qm_dim() const noexcept { return N_; }
  std::optional<Sector> declared_sector() const noexcept { return declared_; }

  bool has_scalar() const noexcept { return static_cast<bool>(scalar_); }
  bool has_matrix() const noexcept { return static_cast<bool>(matrix_); }

  ScalarPart scalar_part(const ClPhasePoint& cl) const;
  MatrixPart matrix_part(const ClPhasePoint& cl) const;

  HybridObservable with_declared_sector(Sector s) const;

  friend HybridObservable operator+(const HybridObservable& a, const HybridObservable& b);
  friend HybridObservable operator*(double s, const HybridObservable& a);

 private:
  std::size_t n_;
  std::size_t N_;
  ScalarFn scalar_;
  MatrixFn matrix_;
  std::optional<Sector> declared_;
};

double eval_hybrid(const HybridObservable& obs, const HybridPoint& point);

// Full phase-space gradient of a hybrid observable.
struct HybridGradient {
  std::vector<double> dx, dp;  // classical partials, including d<A>/dx_k
  std::vector<double> dX, dP;  // quantum partials
};

HybridGradient hybrid_gradient(const HybridObservable& obs, const HybridPoint& point);

double classical_bracket(const HybridGradient& a, const HybridGradient& b);
double quantum_bracket(const HybridGradient& a, const HybridGradient& b);

double hybrid_poisson(const HybridObservable& a, const HybridObservable& b,
                      const HybridPoint& point);

// Coefficients of the quartic form generated by the matrix parts in the
// classical part of the bracket:
//   M_{i j i' j'} = 1/4 sum_k (dA_ij/dx_k dB_i'j'/dp_k - dA_ij/dp_k dB_i'j'/dx_k)
// The form sum M (X-iP)_i (X+iP)_j (X-iP)_i' (X+iP)_j' is real.
class QuarticTensor {
 public:
  QuarticTensor() = default;
  explicit QuarticTensor(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) noexcept {
    return m_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  cplx operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const noexcept {
    return m_[((i * n_ + j) * n_ + k) * n_ + l];
  }

  double evaluate(const QmPhasePoint& point) const;
  bool is_zero(double tolerance = 0.0) const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> m_;
};

QuarticTensor quartic_terms(const HybridObservable& a, const HybridObservable& b,
                            const ClPhasePoint& cl);

// Least-squares fit of the quartic form against the N^2 real quadratic
// monomials Re/Im (X-iP)_i (X+iP)_j on random sphere points.
struct QuadraticFitReport {
  double relative_residual = 0.0;  // ||residual|| / ||values||
  std::size_t samples = 0;
  bool is_quadratic = false;
};

QuadraticFitReport quadratic_fit(const QuarticTensor& m, std::size_t samples,
                                 std::uint64_t seed, double threshold = 1e-6);

// Probes the observable at random classical points (two length scales) and
// classifies it. A declared sector takes precedence. An observable that is
// constant everywhere is reported as classical.
Sector sector_membership(const HybridObservable& obs, std::uint64_t seed = 0x5ec7u,
                         std::size_t probes = 16);

}  // namespace hybridyn
