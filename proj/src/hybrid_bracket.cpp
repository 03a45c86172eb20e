#include "hybridyn/hybrid_bracket.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "hybridyn/errors.hpp"
#include "hybridyn/sampling.hpp"
#include "hybridyn/simd/kernels.hpp"

namespace hybridyn {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

void check_point(const HybridObservable& obs, const HybridPoint& point) {
  require(point.cl.x.size() == obs.cl_dim() && point.cl.p.size() == obs.cl_dim(),
          "hybrid point has " + std::to_string(point.cl.x.size()) +
              " classical coordinates, observable expects " +
              std::to_string(obs.cl_dim()));
  require(point.qm.X.size() == obs.qm_dim() && point.qm.P.size() == obs.qm_dim(),
          "hybrid point has quantum dimension " + std::to_string(point.qm.X.size()) +
              ", observable expects " + std::to_string(obs.qm_dim()));
}

std::vector<double> sum_vectors(std::vector<double> a, const std::vector<double>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<HermitianMatrix> sum_matrices(std::vector<HermitianMatrix> a,
                                          const std::vector<HermitianMatrix>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

bool is_multiple_of_identity(const HermitianMatrix& a, double tol) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = a(i, j);
      if (i == j) {
        if (std::abs(v - a(0, 0)) > tol) return false;
      } else if (std::abs(v) > tol) {
        return false;
      }
    }
  }
  return true;
}

bool any_nonzero(const std::vector<double>& v, double tol) {
  for (double d : v) {
    if (std::fabs(d) > tol) return true;
  }
  return false;
}

bool any_nonzero(const std::vector<HermitianMatrix>& v, double tol) {
  for (const auto& m : v) {
    if (!m.is_zero(tol)) return true;
  }
  return false;
}

}  // namespace

const char* sector_name(Sector s) noexcept {
  switch (s) {
    case Sector::cl:
      return "CL";
    case Sector::qm:
      return "QM";
    case Sector::hybrid:
      return "HYBRID";
  }
  return "?";
}

std::vector<double> flatten(const HybridPoint& point) {
  std::vector<double> y;
  y.reserve(2 * (point.cl.dim() + point.qm.dim()));
  y.insert(y.end(), point.cl.x.begin(), point.cl.x.end());
  y.insert(y.end(), point.cl.p.begin(), point.cl.p.end());
  y.insert(y.end(), point.qm.X.begin(), point.qm.X.end());
  y.insert(y.end(), point.qm.P.begin(), point.qm.P.end());
  return y;
}

HybridPoint unflatten(std::span<const double> flat, std::size_t n, std::size_t N) {
  require(flat.size() == 2 * (n + N), "flat state has length " +
                                          std::to_string(flat.size()) + ", expected " +
                                          std::to_string(2 * (n + N)));
  HybridPoint p;
  auto it = flat.begin();
  p.cl.x.assign(it, it + static_cast<std::ptrdiff_t>(n));
  it += static_cast<std::ptrdiff_t>(n);
  p.cl.p.assign(it, it + static_cast<std::ptrdiff_t>(n));
  it += static_cast<std::ptrdiff_t>(n);
  p.qm.X.assign(it, it + static_cast<std::ptrdiff_t>(N));
  it += static_cast<std::ptrdiff_t>(N);
  p.qm.P.assign(it, it + static_cast<std::ptrdiff_t>(N));
  return p;
}

HybridObservable::HybridObservable(std::size_t n, std::size_t N, ScalarFn scalar,
                                   MatrixFn matrix, std::optional<Sector> declared)
    : n_(n), N_(N), scalar_(std::move(scalar)), matrix_(std::move(matrix)),
      declared_(declared) {}

HybridObservable HybridObservable::classical(std::size_t n, std::size_t N,
                                             ScalarFn scalar) {
  return HybridObservable(n, N, std::move(scalar), nullptr);
}

HybridObservable HybridObservable::quantum(std::size_t n, const HermitianMatrix& g) {
  return HybridObservable(n, g.dim(), nullptr,
                          [g](const ClPhasePoint&) { return MatrixPart{g, {}, {}}; });
}

HybridObservable HybridObservable::position(std::size_t n, std::size_t N,
                                            std::size_t k) {
  require(k < n, "classical coordinate index out of range");
  return classical(n, N, [n, k](const ClPhasePoint& cl) {
    ScalarPart s{cl.x[k], std::vector<double>(n, 0.0), {}};
    s.d_dx[k] = 1.0;
    return s;
  });
}

HybridObservable HybridObservable::momentum(std::size_t n, std::size_t N,
                                            std::size_t k) {
  require(k < n, "classical momentum index out of range");
  return classical(n, N, [n, k](const ClPhasePoint& cl) {
    ScalarPart s{cl.p[k], {}, std::vector<double>(n, 0.0)};
    s.d_dp[k] = 1.0;
    return s;
  });
}

HybridObservable HybridObservable::coordinate_times(std::size_t n, std::size_t k,
                                                    bool momentum,
                                                    const HermitianMatrix& g,
                                                    double coeff) {
  require(k < n, "classical coordinate index out of range");
  return HybridObservable(
      n, g.dim(), nullptr, [n, k, momentum, g, coeff](const ClPhasePoint& cl) {
        const double q = momentum ? cl.p[k] : cl.x[k];
        MatrixPart m{(coeff * q) * g, {}, {}};
        std::vector<HermitianMatrix> d(n, HermitianMatrix(g.dim()));
        d[k] = coeff * g;
        (momentum ? m.d_dp : m.d_dx) = std::move(d);
        return m;
      });
}

ScalarPart HybridObservable::scalar_part(const ClPhasePoint& cl) const {
  if (!scalar_) return {};
  ScalarPart s = scalar_(cl);
  require(s.d_dx.empty() || s.d_dx.size() == n_, "scalar gradient has wrong length");
  require(s.d_dp.empty() || s.d_dp.size() == n_, "scalar gradient has wrong length");
  return s;
}

MatrixPart HybridObservable::matrix_part(const ClPhasePoint& cl) const {
  if (!matrix_) return {HermitianMatrix(N_), {}, {}};
  MatrixPart m = matrix_(cl);
  require(m.value.dim() == N_, "matrix part has dimension " +
                                   std::to_string(m.value.dim()) + ", expected " +
                                   std::to_string(N_));
  require(m.d_dx.empty() || m.d_dx.size() == n_, "matrix gradient has wrong length");
  require(m.d_dp.empty() || m.d_dp.size() == n_, "matrix gradient has wrong length");
  return m;
}

HybridObservable HybridObservable::with_declared_sector(Sector s) const {
  HybridObservable copy = *this;
  copy.declared_ = s;
  return copy;
}

HybridObservable operator+(const HybridObservable& a, const HybridObservable& b) {
  require(a.n_ == b.n_ && a.N_ == b.N_, "cannot add observables of different shape");
  HybridObservable::ScalarFn scalar;
  if (a.scalar_ || b.scalar_) {
    scalar = [a, b](const ClPhasePoint& cl) {
      ScalarPart sa = a.scalar_part(cl);
      const ScalarPart sb = b.scalar_part(cl);
      sa.value += sb.value;
      sa.d_dx = sum_vectors(std::move(sa.d_dx), sb.d_dx);
      sa.d_dp = sum_vectors(std::move(sa.d_dp), sb.d_dp);
      return sa;
    };
  }
  HybridObservable::MatrixFn matrix;
  if (a.matrix_ || b.matrix_) {
    matrix = [a, b](const ClPhasePoint& cl) {
      MatrixPart ma = a.matrix_part(cl);
      const MatrixPart mb = b.matrix_part(cl);
      ma.value += mb.value;
      ma.d_dx = sum_matrices(std::move(ma.d_dx), mb.d_dx);
      ma.d_dp = sum_matrices(std::move(ma.d_dp), mb.d_dp);
      return ma;
    };
  }
  return HybridObservable(a.n_, a.N_, std::move(scalar), std::move(matrix));
}

HybridObservable operator*(double s, const HybridObservable& a) {
  HybridObservable::ScalarFn scalar;
  if (a.scalar_) {
    scalar = [s, a](const ClPhasePoint& cl) {
      ScalarPart p = a.scalar_part(cl);
      p.value *= s;
      for (double& d : p.d_dx) d *= s;
      for (double& d : p.d_dp) d *= s;
      return p;
    };
  }
  HybridObservable::MatrixFn matrix;
  if (a.matrix_) {
    matrix = [s, a](const ClPhasePoint& cl) {
      MatrixPart m = a.matrix_part(cl);
      m.value *= s;
      for (auto& d : m.d_dx) d *= s;
      for (auto& d : m.d_dp) d *= s;
      return m;
    };
  }
  return HybridObservable(a.n_, a.N_, std::move(scalar), std::move(matrix), a.declared_);
}

double eval_hybrid(const HybridObservable& obs, const HybridPoint& point) {
  check_point(obs, point);
  double v = obs.has_scalar() ? obs.scalar_part(point.cl).value : 0.0;
  if (obs.has_matrix()) v += eval_observable(obs.matrix_part(point.cl).value, point.qm);
  return v;
}

HybridGradient hybrid_gradient(const HybridObservable& obs, const HybridPoint& point) {
  check_point(obs, point);
  const std::size_t n = obs.cl_dim();
  const std::size_t N = obs.qm_dim();
  HybridGradient g{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                   std::vector<double>(N, 0.0), std::vector<double>(N, 0.0)};
  if (obs.has_scalar()) {
    const ScalarPart s = obs.scalar_part(point.cl);
    if (!s.d_dx.empty()) g.dx = s.d_dx;
    if (!s.d_dp.empty()) g.dp = s.d_dp;
  }
  if (obs.has_matrix()) {
    const MatrixPart m = obs.matrix_part(point.cl);
    PhaseGradient q = observable_gradient(m.value, point.qm);
    g.dX = std::move(q.dX);
    g.dP = std::move(q.dP);
    for (std::size_t k = 0; k < m.d_dx.size(); ++k) {
      g.dx[k] += eval_observable(m.d_dx[k], point.qm);
    }
    for (std::size_t k = 0; k < m.d_dp.size(); ++k) {
      g.dp[k] += eval_observable(m.d_dp[k], point.qm);
    }
  }
  return g;
}

double classical_bracket(const HybridGradient& a, const HybridGradient& b) {
  const auto& k = simd::active();
  const std::size_t n = a.dx.size();
  return k.dot(n, a.dx.data(), b.dp.data()) - k.dot(n, a.dp.data(), b.dx.data());
}

double quantum_bracket(const HybridGradient& a, const HybridGradient& b) {
  const auto& k = simd::active();
  const std::size_t n = a.dX.size();
  return k.dot(n, a.dX.data(), b.dP.data()) - k.dot(n, a.dP.data(), b.dX.data());
}

double hybrid_poisson(const HybridObservable& a, const HybridObservable& b,
                      const HybridPoint& point) {
  require(a.cl_dim() == b.cl_dim() && a.qm_dim() == b.qm_dim(),
          "bracket of observables with different shapes");
  const HybridGradient ga = hybrid_gradient(a, point);
  const HybridGradient gb = hybrid_gradient(b, point);
  return classical_bracket(ga, gb) + quantum_bracket(ga, gb);
}

QuarticTensor::QuarticTensor(std::size_t n) : n_(n), m_(n * n * n * n) {}

double QuarticTensor::evaluate(const QmPhasePoint& point) const {
  require(point.dim() == n_, "quartic form dimension mismatch");
  std::vector<cplx> pair(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const cplx zi_bar(point.X[i], -point.P[i]);
    for (std::size_t j = 0; j < n_; ++j) {
      pair[i * n_ + j] = zi_bar * cplx(point.X[j], point.P[j]);
    }
  }
  cplx acc = 0.0;
  const std::size_t nn = n_ * n_;
  for (std::size_t a = 0; a < nn; ++a) {
    cplx row = 0.0;
    for (std::size_t b = 0; b < nn; ++b) row += m_[a * nn + b] * pair[b];
    acc += pair[a] * row;
  }
  return acc.real();
}

bool QuarticTensor::is_zero(double tolerance) const noexcept {
  for (const cplx& v : m_) {
    if (std::abs(v) > tolerance) return false;
  }
  return true;
}

QuarticTensor quartic_terms(const HybridObservable& a, const HybridObservable& b,
                            const ClPhasePoint& cl) {
  require(a.cl_dim() == b.cl_dim() && a.qm_dim() == b.qm_dim(),
          "quartic terms of observables with different shapes");
  require(cl.x.size() == a.cl_dim() && cl.p.size() == a.cl_dim(),
          "classical point dimension mismatch");
  const std::size_t N = a.qm_dim();
  const std::size_t n = a.cl_dim();
  QuarticTensor m(N);
  if (!a.has_matrix() || !b.has_matrix()) return m;
  const MatrixPart ma = a.matrix_part(cl);
  const MatrixPart mb = b.matrix_part(cl);
  auto accumulate = [&](const std::vector<HermitianMatrix>& da,
                        const std::vector<HermitianMatrix>& db, double sign) {
    if (da.empty() || db.empty()) return;
    for (std::size_t k = 0; k < n; ++k) {
      const HermitianMatrix& ak = da[k];
      const HermitianMatrix& bk = db[k];
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          const cplx aij = ak(i, j);
          if (aij == cplx(0.0)) continue;
          for (std::size_t i2 = 0; i2 < N; ++i2)
            for (std::size_t j2 = 0; j2 < N; ++j2) {
              m(i, j, i2, j2) += 0.25 * sign * aij * bk(i2, j2);
            }
        }
    }
  };
  accumulate(ma.d_dx, mb.d_dp, 1.0);
  accumulate(ma.d_dp, mb.d_dx, -1.0);
  return m;
}

QuadraticFitReport quadratic_fit(const QuarticTensor& m, std::size_t samples,
                                 std::uint64_t seed, double threshold) {
  const std::size_t N = m.dim();
  const std::size_t basis = N * N;
  const std::size_t rows = std::max(samples, 4 * basis);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(basis));
  Eigen::VectorXd values(static_cast<Eigen::Index>(rows));
  Philox rng(seed, 0x9f17u);
  for (std::size_t r = 0; r < rows; ++r) {
    const QmPhasePoint pt = random_sphere_point(N, rng);
    const auto rr = static_cast<Eigen::Index>(r);
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i; j < N; ++j) {
        const cplx q = cplx(pt.X[i], -pt.P[i]) * cplx(pt.X[j], pt.P[j]);
        design(rr, c++) = q.real();
        if (j != i) design(rr, c++) = q.imag();
      }
    }
    values(rr) = m.evaluate(pt);
  }
  QuadraticFitReport report;
  report.samples = rows;
  const double norm = values.norm();
  if (norm == 0.0) {
    report.is_quadratic = true;
    return report;
  }
  const Eigen::VectorXd coeff = design.colPivHouseholderQr().solve(values);
  report.relative_residual = (design * coeff - values).norm() / norm;
  report.is_quadratic = report.relative_residual < threshold;
  return report;
}

Sector sector_membership(const HybridObservable& obs, std::uint64_t seed,
                         std::size_t probes) {
  if (auto declared = obs.declared_sector()) return *declared;
  const std::size_t n = obs.cl_dim();
  Philox rng(seed, 0x5ec7u);
  constexpr double kTol = 1e-12;

  bool scalar_varies = false;
  bool matrix_varies = false;
  bool quantum_trivial = true;
  std::optional<double> scalar_ref;
  std::optional<HermitianMatrix> matrix_ref;

  for (std::size_t probe = 0; probe < probes; ++probe) {
    const double scale = probe < probes / 2 ? 1.0 : 10.0;
    ClPhasePoint cl{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) {
      cl.x[k] = scale * rng.normal();
      cl.p[k] = scale * rng.normal();
    }
    if (obs.has_scalar()) {
      const ScalarPart s = obs.scalar_part(cl);
      if (any_nonzero(s.d_dx, kTol) || any_nonzero(s.d_dp, kTol)) scalar_varies = true;
      if (!scalar_ref) {
        scalar_ref = s.value;
      } else if (std::fabs(s.value - *scalar_ref) > kTol * (1.0 + std::fabs(*scalar_ref))) {
        scalar_varies = true;
      }
    }
    if (obs.has_matrix()) {
      const MatrixPart mp = obs.matrix_part(cl);
      const double tol = kTol * (1.0 + mp.value.max_abs_entry());
      if (!is_multiple_of_identity(mp.value, tol)) quantum_trivial = false;
      if (any_nonzero(mp.d_dx, kTol) || any_nonzero(mp.d_dp, kTol)) matrix_varies = true;
      if (!matrix_ref) {
        matrix_ref = mp.value;
      } else if (!(mp.value - *matrix_ref).is_zero(tol)) {
        matrix_varies = true;
      }
    }
  }
  if (quantum_trivial) return Sector::cl;
  if (!scalar_varies && !matrix_varies) return Sector::qm;
  return Sector::hybrid;
}

}  // namespace hybridyn
