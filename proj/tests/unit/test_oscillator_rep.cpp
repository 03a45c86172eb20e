#include <doctest.h>

#include <cmath>

#include "hybridyn/errors.hpp"
#include "hybridyn/oscillator_rep.hpp"
#include "hybridyn/testing/finite_difference.hpp"
#include "oracles.hpp"

using namespace hybridyn;

TEST_CASE("phase point and state round trip") {
  Philox rng(11);
  for (std::size_t n : {1u, 3u, 8u}) {
    const QmPhasePoint q = oracle::sphere_point(n, rng);
    CHECK(constraint(q) == doctest::Approx(1.0).epsilon(1e-14));
    const QuantumState s = phase_to_state(q);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    const QmPhasePoint back = state_to_phase(s);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(back.X[i] == doctest::Approx(q.X[i]).epsilon(1e-15));
      CHECK(back.P[i] == doctest::Approx(q.P[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("unnormalized states are rejected") {
  QuantumState s{{cplx(1.0, 0.0), cplx(1.0, 0.0)}};
  CHECK_THROWS_AS(state_to_phase(s), NormalizationError);
  QmPhasePoint q{{1.0, 1.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(phase_to_state(q), NormalizationError);
}

TEST_CASE("non-Hermitian input is rejected") {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 2.0;
  CHECK_THROWS_AS(HermitianMatrix::from_dense(m), HermiticityError);
  HermitianMatrix g(2);
  CHECK_THROWS(g.set(0, 0, cplx(1.0, 0.5)));
}

TEST_CASE("set mirrors the conjugate entry") {
  HermitianMatrix g(3);
  g.set(0, 2, cplx(1.5, -2.0));
  CHECK(g(2, 0) == cplx(1.5, 2.0));
}

TEST_CASE("quadratic form equals the matrix expectation") {
  Philox rng(12);
  for (std::size_t n : {1u, 2u, 5u, 16u}) {
    const HermitianMatrix g = oracle::hermitian(n, rng);
    const QmPhasePoint q = oracle::sphere_point(n, rng);
    const cplx v = quadratic_form(g, q);
    CHECK(v.real() == doctest::Approx(oracle::expectation(g, q)).epsilon(1e-13));
    CHECK(std::fabs(v.imag()) < 1e-13);
    CHECK(eval_observable(g, q) == doctest::Approx(v.real()).epsilon(1e-15));
  }
}

TEST_CASE("observable gradient matches finite differences") {
  Philox rng(13);
  for (std::size_t n : {2u, 4u, 7u}) {
    const HermitianMatrix g = oracle::hermitian(n, rng);
    const QmPhasePoint q = oracle::sphere_point(n, rng);
    const PhaseGradient a = observable_gradient(g, q);
    const PhaseGradient f = testing::fd_qm_gradient(g, q);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(a.dX[i] == doctest::Approx(f.dX[i]).epsilon(1e-8));
      CHECK(a.dP[i] == doctest::Approx(f.dP[i]).epsilon(1e-8));
    }
  }
}

// The phase-space bracket of two quadratic forms is the expectation of their
// commutator divided by i.
TEST_CASE("qm bracket equals commutator expectation") {
  Philox rng(14);
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    for (int k = 0; k < 10; ++k) {
      const HermitianMatrix f = oracle::hermitian(n, rng);
      const HermitianMatrix g = oracle::hermitian(n, rng);
      const QmPhasePoint q = oracle::sphere_point(n, rng);
      const Eigen::MatrixXcd fd = oracle::dense(f);
      const Eigen::MatrixXcd gd = oracle::dense(g);
      const Eigen::MatrixXcd c = (fd * gd - gd * fd) / cplx(0.0, 1.0);
      const double expected = oracle::expectation(HermitianMatrix::from_dense(c), q);
      CHECK(std::fabs(qm_poisson(f, g, q) - expected) < 1e-10);
      CHECK(std::fabs(eval_observable(commutator_over_i(f, g), q) - expected) < 1e-10);
    }
  }
}

TEST_CASE("qm bracket is antisymmetric and the constraint is a Casimir") {
  Philox rng(15);
  const std::size_t n = 5;
  const HermitianMatrix f = oracle::hermitian(n, rng);
  const HermitianMatrix g = oracle::hermitian(n, rng);
  const QmPhasePoint q = oracle::sphere_point(n, rng);
  CHECK(qm_poisson(f, g, q) == doctest::Approx(-qm_poisson(g, f, q)).epsilon(1e-14));
  CHECK(std::fabs(qm_poisson(HermitianMatrix::identity(n), g, q)) < 1e-13);
}

TEST_CASE("schrodinger reference agrees with a Taylor propagator") {
  Philox rng(16);
  const std::size_t n = 6;
  const HermitianMatrix h = oracle::hermitian(n, rng);
  const QuantumState s0 = phase_to_state(oracle::sphere_point(n, rng));
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = s0.amplitudes[i];
  for (double t : {0.0, 0.3, 2.0, 7.5}) {
    const QuantumState s = schrodinger_reference(h, s0, t);
    const Eigen::VectorXcd ref = oracle::propagate_taylor(oracle::dense(h), v, t);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(s.amplitudes[i] - ref(static_cast<Eigen::Index>(i))) < 1e-11);
    }
  }
}

TEST_CASE("unitary maps preserve the constraint and transform expectations") {
  Philox rng(17);
  const std::size_t n = 4;
  const HermitianMatrix k = oracle::hermitian(n, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(oracle::dense(k));
  const Eigen::MatrixXcd u = eig.eigenvectors() *
                             eig.eigenvalues()
                                 .unaryExpr([](double e) { return std::exp(cplx(0.0, e)); })
                                 .asDiagonal() *
                             eig.eigenvectors().adjoint();
  const QmPhasePoint q = oracle::sphere_point(n, rng);
  const QmPhasePoint r = apply_unitary(u, q);
  CHECK(constraint(r) == doctest::Approx(1.0).epsilon(1e-14));
  const HermitianMatrix g = oracle::hermitian(n, rng);
  const Eigen::MatrixXcd rotated = u.adjoint() * oracle::dense(g) * u;
  CHECK(eval_observable(g, r) ==
        doctest::Approx(oracle::expectation(HermitianMatrix::from_dense(rotated), q))
            .epsilon(1e-12));
}

TEST_CASE("standard matrices") {
  const HermitianMatrix y = HermitianMatrix::pauli_y();
  CHECK(y(0, 1) == cplx(0.0, -1.0));
  CHECK(y(1, 0) == cplx(0.0, 1.0));
  CHECK(HermitianMatrix::pauli_z()(1, 1) == cplx(-1.0, 0.0));
  const HermitianMatrix sq = HermitianMatrix::pauli_x().squared();
  CHECK(sq == HermitianMatrix::identity(2));
}
