#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "qew/error.hpp"
#include "qew/qstate.hpp"
#include "qew/rng.hpp"

using namespace qew;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d * d, d * d); }

}  // namespace

TEST_CASE("swap operator") {
  SUBCASE("d=2 permutes |12> and |21>") {
    const ComplexMatrix f = swap_operator(2);
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(1, 2) = 1.0;
    expected(2, 1) = 1.0;
    expected(3, 3) = 1.0;
    CHECK(max_abs(f - expected) == 0.0);
  }
  for (int d = 2; d <= 6; ++d) {
    const ComplexMatrix f = swap_operator(d);
    // Tr F counts the a == b diagonal positions.
    int diag = 0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) diag += (a == b);
    CHECK(f.trace().real() == doctest::Approx(diag));
    CHECK(max_abs(f * f - identity(d)) == 0.0);
    CHECK(max_abs(f - f.adjoint()) == 0.0);
  }
  CHECK_THROWS_AS(swap_operator(1), Error);
}

TEST_CASE("G operator") {
  const ComplexMatrix g2 = gproj_operator(2);
  CHECK(g2(0, 0) == Complex(1.0));
  CHECK(g2(0, 3) == Complex(1.0));
  CHECK(g2(3, 0) == Complex(1.0));
  CHECK(g2(3, 3) == Complex(1.0));
  CHECK(g2.cwiseAbs().sum() == 4.0);
  for (int d = 2; d <= 6; ++d) {
    const ComplexMatrix g = gproj_operator(d);
    CHECK(g.trace().real() == doctest::Approx(d));
    CHECK(max_abs(g * g - double(d) * g) == 0.0);
    // partial transpose on B maps F <-> G exactly
    CHECK(max_abs(partial_transpose_b(swap_operator(d), d) - g) == 0.0);
    CHECK(max_abs(partial_transpose_b(g, d) - swap_operator(d)) == 0.0);
  }
  CHECK_THROWS_AS(gproj_operator(0), Error);
}

TEST_CASE("werner family") {
  SUBCASE("singlet at f=-1, d=2") {
    const DensityMatrix rho = werner_state(2, -1.0);
    Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    CHECK(max_abs(rho.matrix() - singlet * singlet.adjoint()) < 1e-12);
  }
  SUBCASE("f = 1/d is maximally mixed") {
    for (int d = 2; d <= 5; ++d) {
      const DensityMatrix rho = werner_state(d, 1.0 / d);
      CHECK(max_abs(rho.matrix() - identity(d) / double(d * d)) < 1e-12);
    }
  }
  CHECK(expectation(swap_operator(3), werner_state(3, 0.4)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(werner_state(3, 1.5), Error);
  CHECK_THROWS_AS(werner_state(3, -1.0000001), Error);
  try {
    werner_state(2, 2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
}

TEST_CASE("isotropic family") {
  for (int d = 2; d <= 5; ++d) {
    CHECK(max_abs(isotropic_state(d, d).matrix() - gproj_operator(d) / double(d)) < 1e-12);
    CHECK(max_abs(isotropic_state(d, 1.0 / d).matrix() - identity(d) / double(d * d)) < 1e-12);
  }
  CHECK(expectation(gproj_operator(4), isotropic_state(4, 2.5)) ==
        doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(isotropic_state(3, 3.5), Error);
  CHECK_THROWS_AS(isotropic_state(3, -0.1), Error);
}

TEST_CASE("expectation") {
  for (double f : {-1.0, 0.0, 1.0}) {
    CHECK(expectation(swap_operator(3), werner_state(3, f)) == doctest::Approx(f));
  }
  CHECK(expectation(gproj_operator(3), isotropic_state(3, 1.7)) == doctest::Approx(1.7));
  CHECK(expectation(identity(3), random_density_matrix(3, 4, 11)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(expectation(identity(2), werner_state(3, 0.0)), Error);

  ComplexMatrix skew = ComplexMatrix::Zero(4, 4);
  skew(0, 1) = 1.0;
  try {
    expectation(skew, maximally_mixed_state(2));
    FAIL("expected non-Hermitian error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitian);
  }
}

TEST_CASE("density matrix validation names the failed invariant") {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4) / 2.0;
  CHECK(density_matrix_violation(2, m).rfind("trace", 0) == 0);
  m = ComplexMatrix::Identity(4, 4) / 4.0;
  m(0, 1) = 0.1;
  CHECK(density_matrix_violation(2, m).rfind("hermitian", 0) == 0);
  m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK(density_matrix_violation(2, m).rfind("positive", 0) == 0);
  CHECK(density_matrix_violation(2, ComplexMatrix::Identity(3, 3)).rfind("shape", 0) == 0);
  CHECK(density_matrix_violation(2, ComplexMatrix::Identity(4, 4) / 4.0).empty());
}

TEST_CASE("closed-form twirls") {
  SUBCASE("idempotent on the families") {
    const DensityMatrix w = werner_state(3, -0.3);
    CHECK(max_abs(twirl_uu(w).matrix() - w.matrix()) < 1e-12);
    const DensityMatrix iso = isotropic_state(3, 2.2);
    CHECK(max_abs(twirl_uustar(iso).matrix() - iso.matrix()) < 1e-12);
    CHECK(max_abs(twirl_uustar(isotropic_state(3, 3.0)).matrix() -
                  isotropic_state(3, 3.0).matrix()) < 1e-12);
  }
  SUBCASE("product state |11>") {
    ComplexMatrix m = ComplexMatrix::Zero(9, 9);
    m(0, 0) = 1.0;
    const DensityMatrix rho(3, m);
    CHECK(max_abs(twirl_uu(rho).matrix() - werner_state(3, 1.0).matrix()) < 1e-12);
    CHECK(max_abs(twirl_uustar(rho).matrix() - isotropic_state(3, 1.0).matrix()) < 1e-12);
  }
  SUBCASE("maximally mixed") {
    CHECK(max_abs(twirl_uu(maximally_mixed_state(4)).matrix() -
                  werner_state(4, 0.25).matrix()) < 1e-12);
  }
  SUBCASE("idempotent, trace preserving, preserves Tr[F rho] on random states") {
    for (int k = 0; k < 100; ++k) {
      const int d = 2 + k % 3;
      const DensityMatrix rho = random_density_matrix(d, 1 + k % (d * d), 1000 + k);
      const DensityMatrix t = twirl_uu(rho);
      CHECK(std::abs(t.matrix().trace().real() - 1.0) < 1e-12);
      CHECK(std::abs(expectation(swap_operator(d), rho) - expectation(swap_operator(d), t)) <
            1e-12);
      CHECK(max_abs(twirl_uu(t).matrix() - t.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("families are invariant under their symmetry groups") {
  for (int d = 2; d <= 4; ++d) {
    for (double f : {-1.0, -0.4, 0.3, 1.0}) {
      const DensityMatrix rho = werner_state(d, f);
      for (std::uint64_t s = 0; s < 20; ++s) {
        const ComplexMatrix u = haar_unitary(d, 77 + s);
        const ComplexMatrix w = kron(u, u);
        CHECK(max_abs(w * rho.matrix() * w.adjoint() - rho.matrix()) < 1e-9);
      }
    }
    for (double g : {0.0, 0.5, 1.0, double(d)}) {
      const DensityMatrix rho = isotropic_state(d, g);
      for (std::uint64_t s = 0; s < 20; ++s) {
        const ComplexMatrix u = haar_unitary(d, 177 + s);
        const ComplexMatrix w = kron(u, ComplexMatrix(u.conjugate()));
        CHECK(max_abs(w * rho.matrix() * w.adjoint() - rho.matrix()) < 1e-9);
      }
    }
  }
}

TEST_CASE("spectral ranges of F and G expectations") {
  for (int k = 0; k < 60; ++k) {
    const int d = 2 + k % 4;
    const DensityMatrix rho = random_density_matrix(d, 1 + k % 3, 500 + k);
    const double f = expectation(swap_operator(d), rho);
    const double g = expectation(gproj_operator(d), rho);
    CHECK(f >= -1.0 - 1e-12);
    CHECK(f <= 1.0 + 1e-12);
    CHECK(g >= -1e-12);
    CHECK(g <= d + 1e-12);
  }
}

TEST_CASE("haar unitary") {
  CHECK(max_abs(haar_unitary(4, 9) - haar_unitary(4, 9)) == 0.0);
  CHECK(max_abs(haar_unitary(4, 9) - haar_unitary(4, 10)) > 0.0);
  for (int d = 1; d <= 6; ++d) {
    const ComplexMatrix u = haar_unitary(d, 3 + d);
    CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(d, d)) < 1e-9);
  }
  SUBCASE("second moment E|U_11|^2 = 1/d") {
    const int d = 3;
    const int n = 10000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = std::norm(haar_unitary(d, 40000 + k)(0, 0));
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0 / d) < 5.0 * se);
  }
  SUBCASE("phase-corrected QR: diagonal phases are uniform, not pinned") {
    // Without the correction, Householder QR leaves U_11 with a biased phase.
    double re = 0.0;
    double im = 0.0;
    const int n = 4000;
    for (int k = 0; k < n; ++k) {
      const Complex u = haar_unitary(2, 9000 + k)(0, 0);
      re += u.real();
      im += u.imag();
    }
    CHECK(std::abs(re / n) < 0.05);
    CHECK(std::abs(im / n) < 0.05);
  }
}

TEST_CASE("monte-carlo twirl") {
  const DensityMatrix rho = random_density_matrix(2, 2, 5);
  SUBCASE("single sample is one conjugation") {
    const ComplexMatrix u = haar_unitary(2, derive_seed(17, 0));
    const ComplexMatrix w = kron(u, u);
    const DensityMatrix single = twirl_monte_carlo(rho, 1, 17, false);
    CHECK(max_abs(single.matrix() - w * rho.matrix() * w.adjoint()) < 1e-12);
  }
  const DensityMatrix one = twirl_monte_carlo(rho, 1, 17, false);
  CHECK(std::abs(one.matrix().trace().real() - 1.0) < 1e-12);
  const DensityMatrix many = twirl_monte_carlo(rho, 200, 17, true);
  CHECK(std::abs(many.matrix().trace().real() - 1.0) < 1e-12);
  CHECK_THROWS_AS(twirl_monte_carlo(rho, 0, 1, false), Error);
}

TEST_CASE("random density matrices") {
  const DensityMatrix pure = random_density_matrix(3, 1, 2);
  CHECK(max_abs(pure.matrix() * pure.matrix() - pure.matrix()) < 1e-9);
  const DensityMatrix full = random_density_matrix(3, 9, 2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(full.matrix());
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(max_abs(random_density_matrix(3, 4, 8).matrix() - random_density_matrix(3, 4, 8).matrix()) ==
        0.0);
  CHECK_THROWS_AS(random_density_matrix(2, 0, 1), Error);
  CHECK_THROWS_AS(random_density_matrix(2, 5, 1), Error);
}
