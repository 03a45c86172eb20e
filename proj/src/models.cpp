#include "hybridyn/models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "hybridyn/errors.hpp"
#include "hybridyn/simd/kernels.hpp"

namespace hybridyn {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive and finite, got " +
                         std::to_string(v));
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
}

void check_environment(const std::vector<double>& m, const std::vector<double>& omega,
                       const std::vector<double>& lambda) {
  if (m.size() != omega.size() || m.size() != lambda.size()) {
    throw ParameterError("masses, frequencies and couplings must have equal length");
  }
  for (double v : m) require_positive(v, "classical mass");
  for (double v : omega) require_positive(v, "classical frequency");
  for (double v : lambda) require_finite(v, "coupling");
}

ScalarField harmonic_chain(std::vector<double> m, std::vector<double> omega) {
  return [m = std::move(m), omega = std::move(omega)](
             std::span<const double> x, std::span<const double> p, std::span<double> dx,
             std::span<double> dp) {
    double h = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double k2 = m[k] * omega[k] * omega[k];
      h += 0.5 * p[k] * p[k] / m[k] + 0.5 * k2 * x[k] * x[k];
      dx[k] = k2 * x[k];
      dp[k] = p[k] / m[k];
    }
    return h;
  };
}

// sum_k lambda_k x_k
ScalarField linear_coupling(std::vector<double> lambda) {
  return [lambda = std::move(lambda)](std::span<const double> x, std::span<const double>,
                                      std::span<double> dx, std::span<double> dp) {
    double c = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
      c += lambda[k] * x[k];
      dx[k] = lambda[k];
      dp[k] = 0.0;
    }
    return c;
  };
}

struct Workspace {
  std::vector<double> gx, gp, tx, tp, w_re, w_im, u_re, u_im;

  void resize(std::size_t n, std::size_t N) {
    gx.resize(n);
    gp.resize(n);
    tx.resize(n);
    tp.resize(n);
    w_re.resize(N);
    w_im.resize(N);
    u_re.resize(N);
    u_im.resize(N);
  }
};

Workspace& workspace(std::size_t n, std::size_t N) {
  thread_local Workspace ws;
  ws.resize(n, N);
  return ws;
}

void check_flat(const HybridModel& model, std::size_t size) {
  if (size != model.state_dim()) {
    throw DimensionError("state has length " + std::to_string(size) + ", model expects " +
                         std::to_string(model.state_dim()));
  }
}

ClPhasePoint classical_part(std::span<const double> y, std::size_t n) {
  return {std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(n),
                              y.begin() + static_cast<std::ptrdiff_t>(2 * n))};
}

QmPhasePoint quantum_part(std::span<const double> y, std::size_t n, std::size_t N) {
  const auto off = static_cast<std::ptrdiff_t>(2 * n);
  const auto NN = static_cast<std::ptrdiff_t>(N);
  return {std::vector<double>(y.begin() + off, y.begin() + off + NN),
          std::vector<double>(y.begin() + off + NN, y.begin() + off + 2 * NN)};
}

}  // namespace

HybridModel::HybridModel(std::size_t n, std::size_t N, ScalarField h_cl, HermitianMatrix h_qm,
                         std::vector<InteractionTerm> terms, ModelKind kind,
                         ModelParameters params)
    : n_(n), N_(N), h_cl_(std::move(h_cl)), h_qm_(std::move(h_qm)), terms_(std::move(terms)),
      kind_(kind), params_(std::move(params)) {
  if (N_ == 0) throw DimensionError("quantum dimension must be positive");
  if (h_qm_.dim() != N_) throw DimensionError("quantum Hamiltonian has wrong dimension");
  for (const auto& t : terms_) {
    if (t.op.dim() != N_) throw DimensionError("interaction operator has wrong dimension");
    if (!t.coefficient) throw ParameterError("interaction term without coefficient");
  }
  if (!h_cl_) {
    h_cl_ = [](std::span<const double>, std::span<const double>, std::span<double> dx,
               std::span<double> dp) {
      std::fill(dx.begin(), dx.end(), 0.0);
      std::fill(dp.begin(), dp.end(), 0.0);
      return 0.0;
    };
  }
}

HybridModel HybridModel::with_matrix_interaction(HybridObservable::MatrixFn fn) const {
  HybridModel copy = *this;
  copy.extra_ = std::move(fn);
  return copy;
}

HybridModel HybridModel::with_oscillator_operators(HermitianMatrix x_op,
                                                   HermitianMatrix p_op) const {
  if (x_op.dim() != N_ || p_op.dim() != N_) {
    throw DimensionError("oscillator operators have wrong dimension");
  }
  HybridModel copy = *this;
  copy.x2_op_ = x_op.squared();
  copy.p2_op_ = p_op.squared();
  copy.x_op_ = std::move(x_op);
  copy.p_op_ = std::move(p_op);
  return copy;
}

const HermitianMatrix& HybridModel::position_operator() const {
  if (!x_op_) throw ParameterError("model has no position operator");
  return *x_op_;
}

const HermitianMatrix& HybridModel::momentum_operator() const {
  if (!p_op_) throw ParameterError("model has no momentum operator");
  return *p_op_;
}

const HermitianMatrix& HybridModel::position_squared() const {
  if (!x2_op_) throw ParameterError("model has no position operator");
  return *x2_op_;
}

const HermitianMatrix& HybridModel::momentum_squared() const {
  if (!p2_op_) throw ParameterError("model has no momentum operator");
  return *p2_op_;
}

MatrixPart HybridModel::interaction(const ClPhasePoint& cl) const {
  if (cl.x.size() != n_ || cl.p.size() != n_) {
    throw DimensionError("classical point has wrong dimension");
  }
  MatrixPart out{HermitianMatrix(N_), std::vector<HermitianMatrix>(n_, HermitianMatrix(N_)),
                 std::vector<HermitianMatrix>(n_, HermitianMatrix(N_))};
  std::vector<double> tx(n_), tp(n_);
  for (const auto& term : terms_) {
    const double c = term.coefficient(cl.x, cl.p, tx, tp);
    out.value += c * term.op;
    for (std::size_t k = 0; k < n_; ++k) {
      if (tx[k] != 0.0) out.d_dx[k] += tx[k] * term.op;
      if (tp[k] != 0.0) out.d_dp[k] += tp[k] * term.op;
    }
  }
  if (extra_) {
    const MatrixPart e = extra_(cl);
    out.value += e.value;
    for (std::size_t k = 0; k < e.d_dx.size(); ++k) out.d_dx[k] += e.d_dx[k];
    for (std::size_t k = 0; k < e.d_dp.size(); ++k) out.d_dp[k] += e.d_dp[k];
  }
  return out;
}

HybridObservable HybridModel::hamiltonian_observable() const {
  const HybridModel self = *this;
  auto scalar = [self](const ClPhasePoint& cl) {
    ScalarPart s{0.0, std::vector<double>(self.n_), std::vector<double>(self.n_)};
    s.value = self.h_cl_(cl.x, cl.p, s.d_dx, s.d_dp);
    return s;
  };
  auto matrix = [self](const ClPhasePoint& cl) {
    MatrixPart m = self.interaction(cl);
    m.value += self.h_qm_;
    return m;
  };
  return HybridObservable(n_, N_, scalar, matrix);
}

double total_hamiltonian(const HybridModel& model, const HybridPoint& point) {
  return total_hamiltonian_flat(model, flatten(point));
}

double total_hamiltonian_flat(const HybridModel& model, std::span<const double> y) {
  check_flat(model, y.size());
  const std::size_t n = model.cl_dim();
  const std::size_t N = model.qm_dim();
  Workspace& ws = workspace(n, N);
  const auto x = y.subspan(0, n);
  const auto p = y.subspan(n, n);
  const double* X = y.data() + 2 * n;
  const double* P = X + N;
  const auto& k = simd::active();

  auto form = [&](const HermitianMatrix& g) {
    k.complex_matvec(N, g.re_data(), g.im_data(), X, P, ws.u_re.data(), ws.u_im.data());
    return 0.5 * (k.dot(N, X, ws.u_re.data()) + k.dot(N, P, ws.u_im.data()));
  };

  double h = model.h_cl()(x, p, ws.gx, ws.gp);
  h += form(model.h_qm());
  for (const auto& term : model.terms()) {
    h += term.coefficient(x, p, ws.tx, ws.tp) * form(term.op);
  }
  if (model.matrix_interaction()) {
    const MatrixPart e = model.matrix_interaction()(classical_part(y, n));
    h += form(e.value);
  }
  return h;
}

void equations_of_motion_flat(const HybridModel& model, std::span<const double> y,
                              std::span<double> out) {
  check_flat(model, y.size());
  check_flat(model, out.size());
  const std::size_t n = model.cl_dim();
  const std::size_t N = model.qm_dim();
  Workspace& ws = workspace(n, N);
  const auto x = y.subspan(0, n);
  const auto p = y.subspan(n, n);
  const double* X = y.data() + 2 * n;
  const double* P = X + N;
  const auto& k = simd::active();

  model.h_cl()(x, p, ws.gx, ws.gp);
  const HermitianMatrix& h = model.h_qm();
  k.complex_matvec(N, h.re_data(), h.im_data(), X, P, ws.w_re.data(), ws.w_im.data());

  for (const auto& term : model.terms()) {
    const double c = term.coefficient(x, p, ws.tx, ws.tp);
    const HermitianMatrix& g = term.op;
    k.complex_matvec(N, g.re_data(), g.im_data(), X, P, ws.u_re.data(), ws.u_im.data());
    const double e = 0.5 * (k.dot(N, X, ws.u_re.data()) + k.dot(N, P, ws.u_im.data()));
    k.axpy(N, c, ws.u_re.data(), ws.w_re.data());
    k.axpy(N, c, ws.u_im.data(), ws.w_im.data());
    k.axpy(n, e, ws.tx.data(), ws.gx.data());
    k.axpy(n, e, ws.tp.data(), ws.gp.data());
  }

  if (model.matrix_interaction()) {
    const ClPhasePoint cl = classical_part(y, n);
    const QmPhasePoint qm = quantum_part(y, n, N);
    const MatrixPart e = model.matrix_interaction()(cl);
    const PhaseGradient g = observable_gradient(e.value, qm);
    k.axpy(N, 1.0, g.dX.data(), ws.w_re.data());
    k.axpy(N, 1.0, g.dP.data(), ws.w_im.data());
    for (std::size_t i = 0; i < e.d_dx.size(); ++i) ws.gx[i] += eval_observable(e.d_dx[i], qm);
    for (std::size_t i = 0; i < e.d_dp.size(); ++i) ws.gp[i] += eval_observable(e.d_dp[i], qm);
  }

  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ws.gp[i];
    out[n + i] = -ws.gx[i];
  }
  for (std::size_t i = 0; i < N; ++i) {
    out[2 * n + i] = ws.w_im[i];
    out[2 * n + N + i] = -ws.w_re[i];
  }
}

std::vector<double> equations_of_motion(const HybridModel& model, const HybridPoint& point) {
  const std::vector<double> y = flatten(point);
  std::vector<double> out(y.size());
  equations_of_motion_flat(model, y, out);
  return out;
}

HermitianMatrix truncated_position(std::size_t n_trunc, double ell) {
  if (n_trunc < 2) throw ParameterError("truncation must keep at least 2 levels");
  require_positive(ell, "oscillator length");
  HermitianMatrix x(n_trunc);
  for (std::size_t j = 1; j < n_trunc; ++j) {
    x.set(j - 1, j, ell * std::sqrt(static_cast<double>(j) / 2.0));
  }
  return x;
}

HermitianMatrix truncated_momentum(std::size_t n_trunc, double ell) {
  if (n_trunc < 2) throw ParameterError("truncation must keep at least 2 levels");
  require_positive(ell, "oscillator length");
  HermitianMatrix p(n_trunc);
  for (std::size_t j = 1; j < n_trunc; ++j) {
    p.set(j - 1, j, cplx(0.0, -std::sqrt(static_cast<double>(j) / 2.0) / ell));
  }
  return p;
}

HybridModel make_bilinear_oscillators(const std::vector<double>& m,
                                      const std::vector<double>& omega,
                                      const std::vector<double>& lambda, double M,
                                      double Omega, std::size_t n_trunc) {
  check_environment(m, omega, lambda);
  require_positive(M, "quantum mass M");
  require_positive(Omega, "quantum frequency Omega");
  const double ell = 1.0 / std::sqrt(M * Omega);
  HermitianMatrix x_op = truncated_position(n_trunc, ell);
  HermitianMatrix p_op = truncated_momentum(n_trunc, ell);
  const HermitianMatrix h_qm =
      (0.5 / M) * p_op.squared() + (0.5 * M * Omega * Omega) * x_op.squared();

  ModelParameters params{m, omega, lambda, M, Omega, 0.0, 0.0, ell, n_trunc};
  std::vector<InteractionTerm> terms{{linear_coupling(lambda), x_op}};
  return HybridModel(m.size(), n_trunc, harmonic_chain(m, omega), h_qm, std::move(terms),
                     ModelKind::bilinear_oscillators, std::move(params))
      .with_oscillator_operators(x_op, p_op);
}

HybridModel make_qbit_environment(double E1, double E2, const HermitianMatrix& sigma,
                                  const std::vector<double>& m,
                                  const std::vector<double>& omega,
                                  const std::vector<double>& lambda) {
  check_environment(m, omega, lambda);
  require_finite(E1, "E1");
  require_finite(E2, "E2");
  if (sigma.dim() != 2) throw DimensionError("q-bit coupling matrix must be 2x2");
  const std::vector<double> e{E1, E2};
  ModelParameters params{m, omega, lambda, 1.0, 1.0, E1, E2, 1.0, 2};
  std::vector<InteractionTerm> terms{{linear_coupling(lambda), sigma}};
  return HybridModel(m.size(), 2, harmonic_chain(m, omega), HermitianMatrix::diagonal(e),
                     std::move(terms), ModelKind::qbit_environment, std::move(params));
}

HybridModel make_two_body_harmonic(double m, double M, double lambda, std::size_t n_trunc,
                                   double basis_scale) {
  require_positive(m, "classical mass m");
  require_positive(M, "quantum mass M");
  require_finite(lambda, "coupling lambda");
  HermitianMatrix x_op = truncated_position(n_trunc, basis_scale);
  HermitianMatrix p_op = truncated_momentum(n_trunc, basis_scale);
  const HermitianMatrix h_qm = (0.5 / M) * p_op.squared();

  ScalarField kinetic = [m](std::span<const double>, std::span<const double> p,
                            std::span<double> dx, std::span<double> dp) {
    dx[0] = 0.0;
    dp[0] = p[0] / m;
    return 0.5 * p[0] * p[0] / m;
  };
  ScalarField c_identity = [lambda](std::span<const double> x, std::span<const double>,
                                    std::span<double> dx, std::span<double> dp) {
    dx[0] = 2.0 * lambda * x[0];
    dp[0] = 0.0;
    return lambda * x[0] * x[0];
  };
  ScalarField c_position = [lambda](std::span<const double> x, std::span<const double>,
                                    std::span<double> dx, std::span<double> dp) {
    dx[0] = -2.0 * lambda;
    dp[0] = 0.0;
    return -2.0 * lambda * x[0];
  };
  ScalarField c_constant = [lambda](std::span<const double>, std::span<const double>,
                                    std::span<double> dx, std::span<double> dp) {
    dx[0] = 0.0;
    dp[0] = 0.0;
    return lambda;
  };
  std::vector<InteractionTerm> terms{{c_identity, HermitianMatrix::identity(n_trunc)},
                                     {c_position, x_op},
                                     {c_constant, x_op.squared()}};
  ModelParameters params{{m}, {}, {lambda}, M, 0.0, 0.0, 0.0, basis_scale, n_trunc};
  return HybridModel(1, n_trunc, kinetic, h_qm, std::move(terms), ModelKind::two_body,
                     std::move(params))
      .with_oscillator_operators(x_op, p_op);
}

QmPhasePoint basis_state(std::size_t N, std::size_t i) {
  if (i >= N) throw DimensionError("basis index out of range");
  QmPhasePoint q{std::vector<double>(N, 0.0), std::vector<double>(N, 0.0)};
  q.X[i] = std::numbers::sqrt2;
  return q;
}

QmPhasePoint uniform_superposition(std::size_t N) {
  if (N == 0) throw DimensionError("dimension must be positive");
  const double a = std::sqrt(2.0 / static_cast<double>(N));
  return {std::vector<double>(N, a), std::vector<double>(N, 0.0)};
}

QmPhasePoint coherent_state(const HybridModel& model, double x0, double p0) {
  const Eigen::MatrixXcd k = x0 * model.momentum_operator().to_dense() -
                             p0 * model.position_operator().to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k);
  if (eig.info() != Eigen::Success) throw HermiticityError("displacement generator");
  const auto N = static_cast<Eigen::Index>(model.qm_dim());
  Eigen::VectorXcd phase(N);
  for (Eigen::Index i = 0; i < N; ++i) phase(i) = std::exp(cplx(0.0, -eig.eigenvalues()(i)));
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  Eigen::VectorXcd psi = v * phase.asDiagonal() * v.adjoint().col(0);
  psi /= psi.norm();
  QmPhasePoint q{std::vector<double>(model.qm_dim()), std::vector<double>(model.qm_dim())};
  for (Eigen::Index i = 0; i < N; ++i) {
    q.X[static_cast<std::size_t>(i)] = std::numbers::sqrt2 * psi(i).real();
    q.P[static_cast<std::size_t>(i)] = std::numbers::sqrt2 * psi(i).imag();
  }
  return q;
}

EhrenfestRecord ehrenfest_observables(const HybridModel& model, const HybridPoint& point,
                                      double t) {
  EhrenfestRecord r;
  r.X_mean = eval_observable(model.position_operator(), point.qm);
  r.P_mean = eval_observable(model.momentum_operator(), point.qm);
  r.var_X = eval_observable(model.position_squared(), point.qm) - r.X_mean * r.X_mean;
  r.x = point.cl.x;
  r.p = point.cl.p;
  r.t = t;
  return r;
}

ComRelative com_relative_transform(double x, double p, double X_mean, double P_mean, double m,
                                   double M) {
  const double sigma = M + m;
  const double mu = M * m / sigma;
  return {(M * X_mean + m * x) / sigma, P_mean + p, X_mean - x, mu * (P_mean / M - p / m)};
}

ComRelativeObservables com_relative_observables(const HybridModel& model) {
  if (model.kind() != ModelKind::two_body) {
    throw ParameterError("center-of-mass variables need a two-body model");
  }
  const double m = model.params().m.at(0);
  const double M = model.params().M;
  const double sigma = M + m;
  const double mu = M * m / sigma;
  const std::size_t N = model.qm_dim();
  const auto& X = model.position_operator();
  const auto& P = model.momentum_operator();
  const auto x = HybridObservable::position(1, N, 0);
  const auto p = HybridObservable::momentum(1, N, 0);
  return {(m / sigma) * x + HybridObservable::quantum(1, (M / sigma) * X),
          p + HybridObservable::quantum(1, P),
          HybridObservable::quantum(1, X) + (-1.0) * x,
          HybridObservable::quantum(1, (mu / M) * P) + (-mu / m) * p};
}

double fluctuation_energy(const HybridModel& model, const HybridPoint& point) {
  if (model.kind() != ModelKind::two_body) {
    throw ParameterError("fluctuation energy is defined for the two-body model");
  }
  const double M = model.params().M;
  const double lambda = model.params().lambda.at(0);
  const double X = eval_observable(model.position_operator(), point.qm);
  const double P = eval_observable(model.momentum_operator(), point.qm);
  const double X2 = eval_observable(model.position_squared(), point.qm);
  const double P2 = eval_observable(model.momentum_squared(), point.qm);
  return (P2 - P * P) / (2.0 * M) + lambda * (X2 - X * X);
}

double mean_value_energy(const HybridModel& model, const HybridPoint& point) {
  if (model.kind() != ModelKind::two_body) {
    throw ParameterError("mean-value energy is defined for the two-body model");
  }
  const double m = model.params().m.at(0);
  const double M = model.params().M;
  const double lambda = model.params().lambda.at(0);
  const double X = eval_observable(model.position_operator(), point.qm);
  const double P = eval_observable(model.momentum_operator(), point.qm);
  const ComRelative c = com_relative_transform(point.cl.x[0], point.cl.p[0], X, P, m, M);
  const double sigma = M + m;
  const double mu = M * m / sigma;
  return c.p_s * c.p_s / (2.0 * sigma) + c.p_r * c.p_r / (2.0 * mu) + lambda * c.r * c.r;
}

CoupledOscillatorSolution::CoupledOscillatorSolution(double m, double omega, double M,
                                                     double Omega, double lambda, double x0,
                                                     double p0, double X0, double P0)
    : m_(m), M_(M) {
  require_positive(m, "m");
  require_positive(M, "M");
  // Mass-weighted coordinates q = (sqrt(m) x, sqrt(M) X) obey q'' = -K q.
  Eigen::Matrix2d K;
  const double c = lambda / std::sqrt(m * M);
  K << omega * omega, c, c, Omega * Omega;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(K);
  const Eigen::Vector2d q0(std::sqrt(m) * x0, std::sqrt(M) * X0);
  const Eigen::Vector2d v0(p0 / std::sqrt(m), P0 / std::sqrt(M));
  for (int i = 0; i < 2; ++i) {
    const double w2 = eig.eigenvalues()(i);
    if (!(w2 > 0.0)) throw ParameterError("coupled oscillators are unstable");
    w_[static_cast<std::size_t>(i)] = std::sqrt(w2);
    const Eigen::Vector2d e = eig.eigenvectors().col(i);
    modes_[0][static_cast<std::size_t>(i)] = e(0);
    modes_[1][static_cast<std::size_t>(i)] = e(1);
    a_[static_cast<std::size_t>(i)] = e.dot(q0);
    b_[static_cast<std::size_t>(i)] = e.dot(v0) / w_[static_cast<std::size_t>(i)];
  }
}

std::array<double, 4> CoupledOscillatorSolution::at(double t) const {
  double q[2] = {0.0, 0.0};
  double v[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < 2; ++i) {
    const double c = std::cos(w_[i] * t);
    const double s = std::sin(w_[i] * t);
    const double eta = a_[i] * c + b_[i] * s;
    const double deta = w_[i] * (b_[i] * c - a_[i] * s);
    for (std::size_t r = 0; r < 2; ++r) {
      q[r] += modes_[r][i] * eta;
      v[r] += modes_[r][i] * deta;
    }
  }
  return {q[0] / std::sqrt(m_), v[0] * std::sqrt(m_), q[1] / std::sqrt(M_), v[1] * std::sqrt(M_)};
}

}  // namespace hybridyn
