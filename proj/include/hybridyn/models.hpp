#pragma once

// Hybrid Hamiltonians H = H_CL(x, p) + <H_QM> + <I(x, p)> and their
// equations of motion on the flat state [x(n), p(n), X(N), P(N)].
//
// The interaction is a sum of terms c_r(x, p) * G_r with fixed Hermitian
// G_r, which covers every shipped model and keeps the right-hand side free of
// allocations. A general matrix-valued function can be attached as well.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridyn/hybrid_bracket.hpp"
#include "hybridyn/oscillator_rep.hpp"

namespace hybridyn {

// Scalar function of the classical coordinates. Returns the value and
// overwrites d_dx, d_dp (each of length n) with its partial derivatives.
using ScalarField = std::function<double(std::span<const double> x, std::span<const double> p,
                                         std::span<double> d_dx, std::span<double> d_dp)>;

struct InteractionTerm {
  ScalarField coefficient;
  HermitianMatrix op;
};

enum class ModelKind { generic, bilinear_oscillators, qbit_environment, two_body };

struct ModelParameters {
  std::vector<double> m;       // classical masses
  std::vector<double> omega;   // classical frequencies
  std::vector<double> lambda;  // couplings
  double M = 1.0;              // quantum mass
  double Omega = 1.0;          // quantum frequency
  double E1 = 0.0;
  double E2 = 0.0;
  double basis_scale = 1.0;    // oscillator length of the truncation basis
  std::size_t n_trunc = 0;
};

class HybridModel {
 public:
  HybridModel(std::size_t n, std::size_t N, ScalarField h_cl, HermitianMatrix h_qm,
              std::vector<InteractionTerm> terms, ModelKind kind = ModelKind::generic,
              ModelParameters params = {});

  std::size_t cl_dim() const noexcept { return n_; }
  std::size_t qm_dim() const noexcept { return N_; }
  std::size_t state_dim() const noexcept { return 2 * (n_ + N_); }
  ModelKind kind() const noexcept { return kind_; }
  const ModelParameters& params() const noexcept { return params_; }

  const HermitianMatrix& h_qm() const noexcept { return h_qm_; }
  const ScalarField& h_cl() const noexcept { return h_cl_; }
  const std::vector<InteractionTerm>& terms() const noexcept { return terms_; }

  // Additional interaction given as a general matrix function. Ordering of
  // any momentum dependence is the caller's responsibility.
  HybridModel with_matrix_interaction(HybridObservable::MatrixFn fn) const;
  const HybridObservable::MatrixFn& matrix_interaction() const noexcept { return extra_; }

  // Quadrature operators of the truncated oscillator basis, when the model
  // has one. X^2 and P^2 are the matrix squares of the truncated X, P.
  HybridModel with_oscillator_operators(HermitianMatrix x_op, HermitianMatrix p_op) const;
  bool has_oscillator_operators() const noexcept { return x_op_.has_value(); }
  const HermitianMatrix& position_operator() const;
  const HermitianMatrix& momentum_operator() const;
  const HermitianMatrix& position_squared() const;
  const HermitianMatrix& momentum_squared() const;

  // I(x, p) with its derivative matrices.
  MatrixPart interaction(const ClPhasePoint& cl) const;

  // H as a hybrid observable, for use with the bracket.
  HybridObservable hamiltonian_observable() const;

 private:
  std::size_t n_;
  std::size_t N_;
  ScalarField h_cl_;
  HermitianMatrix h_qm_;
  std::vector<InteractionTerm> terms_;
  HybridObservable::MatrixFn extra_;
  ModelKind kind_;
  ModelParameters params_;
  std::optional<HermitianMatrix> x_op_, p_op_, x2_op_, p2_op_;
};

double total_hamiltonian(const HybridModel& model, const HybridPoint& point);
double total_hamiltonian_flat(const HybridModel& model, std::span<const double> y);

std::vector<double> equations_of_motion(const HybridModel& model, const HybridPoint& point);

// out = dy/dt. out must not alias y. Allocation-free after the first call on
// a thread unless a general matrix interaction is attached.
void equations_of_motion_flat(const HybridModel& model, std::span<const double> y,
                              std::span<double> out);

// Truncated ladder-operator quadratures in the number basis with oscillator
// length `ell`: X = ell (a + a^+)/sqrt(2), P = i (a^+ - a)/(sqrt(2) ell).
HermitianMatrix truncated_position(std::size_t n_trunc, double ell);
HermitianMatrix truncated_momentum(std::size_t n_trunc, double ell);

HybridModel make_bilinear_oscillators(const std::vector<double>& m,
                                      const std::vector<double>& omega,
                                      const std::vector<double>& lambda, double M,
                                      double Omega, std::size_t n_trunc);

HybridModel make_qbit_environment(double E1, double E2, const HermitianMatrix& sigma,
                                  const std::vector<double>& m,
                                  const std::vector<double>& omega,
                                  const std::vector<double>& lambda);

HybridModel make_two_body_harmonic(double m, double M, double lambda, std::size_t n_trunc,
                                   double basis_scale);

// State preparation.
QmPhasePoint basis_state(std::size_t N, std::size_t i);
QmPhasePoint uniform_superposition(std::size_t N);
// Ground state of the construction basis displaced to mean position x0 and
// mean momentum p0 (exp(-i(x0 P - p0 X)) applied to level 0), renormalized
// within the truncated space.
QmPhasePoint coherent_state(const HybridModel& model, double x0, double p0);

struct EhrenfestRecord {
  double X_mean = 0.0;
  double P_mean = 0.0;
  std::vector<double> x;
  std::vector<double> p;
  double var_X = 0.0;
  double t = 0.0;
};

EhrenfestRecord ehrenfest_observables(const HybridModel& model, const HybridPoint& point,
                                      double t = 0.0);

struct ComRelative {
  double s = 0.0;
  double p_s = 0.0;
  double r = 0.0;
  double p_r = 0.0;
};

ComRelative com_relative_transform(double x, double p, double X_mean, double P_mean,
                                   double m, double M);

// s, p_s, r, p_r as hybrid observables of a two-body model.
struct ComRelativeObservables {
  HybridObservable s, p_s, r, p_r;
};

ComRelativeObservables com_relative_observables(const HybridModel& model);

// (<P^2> - <P>^2)/2M + lambda (<X^2> - <X>^2) for the two-body model.
double fluctuation_energy(const HybridModel& model, const HybridPoint& point);
// Mean-value Hamiltonian p_s^2/2 sigma + p_r^2/2 mu + lambda r^2.
double mean_value_energy(const HybridModel& model, const HybridPoint& point);

struct ConservedQuantity {
  std::string name;
  std::function<double(const HybridPoint&)> value;
};

// Closed-form mean-value solution of two bilinearly coupled oscillators
// m x'' = -m w^2 x - lambda X,  M X'' = -M W^2 X - lambda x.
class CoupledOscillatorSolution {
 public:
  CoupledOscillatorSolution(double m, double omega, double M, double Omega, double lambda,
                            double x0, double p0, double X0, double P0);

  // (x, p, X, P) at time t.
  std::array<double, 4> at(double t) const;
  std::array<double, 2> normal_frequencies() const noexcept { return {w_[0], w_[1]}; }

 private:
  double m_, M_;
  std::array<double, 2> w_{};
  std::array<std::array<double, 2>, 2> modes_{};  // columns in mass-weighted coordinates
  std::array<double, 2> a_{}, b_{};
};

}  // namespace hybridyn
