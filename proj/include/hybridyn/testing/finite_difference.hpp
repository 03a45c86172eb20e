#pragma once

// Central-difference gradients and brackets, used as independent checks by
// the tests and the bracket-closure diagnostic. Library code always uses the
// analytic derivatives carried by observables and models.

#include <cstddef>
#include <functional>

#include "hybridyn/hybrid_bracket.hpp"
#include "hybridyn/oscillator_rep.hpp"

namespace hybridyn::testing {

inline constexpr double kDefaultStep = 1e-5;

// Gradient of f over the flat coordinates (x, p, X, P) of a hybrid point.
inline HybridGradient fd_gradient(const std::function<double(const HybridPoint&)>& f,
                                  const HybridPoint& point, double h = kDefaultStep) {
  const std::size_t n = point.cl_dim();
  const std::size_t N = point.qm_dim();
  std::vector<double> y = flatten(point);
  std::vector<double> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double keep = y[i];
    y[i] = keep + h;
    const double up = f(unflatten(y, n, N));
    y[i] = keep - h;
    const double down = f(unflatten(y, n, N));
    y[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  HybridGradient out;
  out.dx.assign(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
  out.dp.assign(g.begin() + static_cast<std::ptrdiff_t>(n), g.begin() + static_cast<std::ptrdiff_t>(2 * n));
  out.dX.assign(g.begin() + static_cast<std::ptrdiff_t>(2 * n),
                g.begin() + static_cast<std::ptrdiff_t>(2 * n + N));
  out.dP.assign(g.begin() + static_cast<std::ptrdiff_t>(2 * n + N), g.end());
  return out;
}

inline HybridGradient fd_gradient(const HybridObservable& obs, const HybridPoint& point,
                                  double h = kDefaultStep) {
  return fd_gradient([&obs](const HybridPoint& q) { return eval_hybrid(obs, q); }, point, h);
}

inline double fd_bracket(const std::function<double(const HybridPoint&)>& a,
                         const std::function<double(const HybridPoint&)>& b,
                         const HybridPoint& point, double h = kDefaultStep) {
  const HybridGradient ga = fd_gradient(a, point, h);
  const HybridGradient gb = fd_gradient(b, point, h);
  return classical_bracket(ga, gb) + quantum_bracket(ga, gb);
}

inline double fd_bracket(const HybridObservable& a, const HybridObservable& b,
                         const HybridPoint& point, double h = kDefaultStep) {
  const HybridGradient ga = fd_gradient(a, point, h);
  const HybridGradient gb = fd_gradient(b, point, h);
  return classical_bracket(ga, gb) + quantum_bracket(ga, gb);
}

inline double fd_classical_bracket(const HybridObservable& a, const HybridObservable& b,
                                   const HybridPoint& point, double h = kDefaultStep) {
  return classical_bracket(fd_gradient(a, point, h), fd_gradient(b, point, h));
}

inline PhaseGradient fd_qm_gradient(const HermitianMatrix& g, const QmPhasePoint& point,
                                    double h = kDefaultStep) {
  HybridPoint hp{{}, point};
  const HybridGradient fg = fd_gradient(
      [&g](const HybridPoint& q) { return eval_observable(g, q.qm); }, hp, h);
  return {fg.dX, fg.dP};
}

}  // namespace hybridyn::testing
