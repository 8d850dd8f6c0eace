#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle_utils.hpp"
#include "qwit/matcore.hpp"

using namespace qwit;
using qwit_test::dense_expectation;
using qwit_test::jacobi_eigs;

namespace {

// Entries of the bundled golden triple: the off-diagonal of A and the lower
// eigenvalue of B are the exact active-constraint values at (0.724, 0.0854).
const double kXi = std::sqrt(0.724 * 0.0854);
const double kB = 0.0854 / 0.276;
const Hermitian2 kA{0.724, 0.0854, Complex(kXi, 0.0)};
const Hermitian2 kBMat = Hermitian2::diagonal(1.0, kB);
const QubitState kPhi = QubitState::pure(0.391, 0.920);

Hermitian2 random_hermitian(std::mt19937_64& g, double scale = 1.0) {
  return {qwit_test::uniform(g, -scale, scale), qwit_test::uniform(g, -scale, scale),
          Complex(qwit_test::uniform(g, -scale, scale), qwit_test::uniform(g, -scale, scale))};
}

QubitState random_pure(std::mt19937_64& g) {
  return QubitState::pure(Complex(qwit_test::uniform(g, -1, 1), qwit_test::uniform(g, -1, 1)),
                          Complex(qwit_test::uniform(g, -1, 1), qwit_test::uniform(g, -1, 1)));
}

}  // namespace

TEST_CASE("eig_herm2: identity and diagonal matrices") {
  const EigenPair2 e = eig_herm2(Hermitian2::identity());
  CHECK(e.lo == doctest::Approx(1.0));
  CHECK(e.hi == doctest::Approx(1.0));
  CHECK(std::abs(dot(e.vec_lo, e.vec_hi)) < 1e-12);

  const EigenPair2 d = eig_herm2(Hermitian2::diagonal(1.0, 0.309));
  CHECK(d.lo == doctest::Approx(0.309).epsilon(1e-12));
  CHECK(d.hi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig_herm2: golden A has eigenvalues 0 and 0.8094") {
  const EigenPair2 e = eig_herm2(kA);
  CHECK(std::abs(e.lo) < 1e-12);
  CHECK(e.hi == doctest::Approx(0.8094).epsilon(1e-12));
  // paper-quoted eigenvector (0.946, 0.325) up to 5e-3 per component
  Complex x = e.vec_hi[0];
  Complex y = e.vec_hi[1];
  if (x.real() < 0) {
    x = -x;
    y = -y;
  }
  CHECK(std::abs(x - Complex(0.946, 0.0)) < 5e-3);
  CHECK(std::abs(y - Complex(0.325, 0.0)) < 5e-3);
  CHECK(std::abs(x.real() - 0.9457746800853187) < 1e-12);
  CHECK(std::abs(y.real() - 0.32482342050645496) < 1e-12);
}

TEST_CASE("eig_herm2: degenerate input returns the canonical basis") {
  const EigenPair2 e = eig_herm2(Hermitian2::diagonal(0.5, 0.5));
  CHECK(e.lo == 0.5);
  CHECK(e.hi == 0.5);
  CHECK(e.vec_lo[0] == Complex(1.0, 0.0));
  CHECK(e.vec_hi[1] == Complex(1.0, 0.0));
}

TEST_CASE("eig_herm2: residual, orthonormality and reconstruction on random input") {
  std::mt19937_64 g(7);
  for (int it = 0; it < 2000; ++it) {
    const Hermitian2 m = random_hermitian(g);
    const EigenPair2 e = eig_herm2(m);
    CHECK(e.lo <= e.hi);
    CHECK(std::abs(norm(e.vec_lo) - 1.0) < 1e-12);
    CHECK(std::abs(norm(e.vec_hi) - 1.0) < 1e-12);
    CHECK(std::abs(dot(e.vec_lo, e.vec_hi)) < 1e-12);

    const Vec2 rlo = apply(m, e.vec_lo);
    const Vec2 rhi = apply(m, e.vec_hi);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(rlo[i] - e.lo * e.vec_lo[i]) < 1e-10);
      CHECK(std::abs(rhi[i] - e.hi * e.vec_hi[i]) < 1e-10);
    }

    // sum_i lambda_i v_i v_i^dag reproduces the matrix
    const double r11 = e.lo * std::norm(e.vec_lo[0]) + e.hi * std::norm(e.vec_hi[0]);
    const double r22 = e.lo * std::norm(e.vec_lo[1]) + e.hi * std::norm(e.vec_hi[1]);
    const Complex r12 = e.lo * e.vec_lo[0] * std::conj(e.vec_lo[1]) +
                        e.hi * e.vec_hi[0] * std::conj(e.vec_hi[1]);
    CHECK(std::abs(r11 - m.a11) < 1e-10);
    CHECK(std::abs(r22 - m.a22) < 1e-10);
    CHECK(std::abs(r12 - m.a12) < 1e-10);

    // independent route: Jacobi rotation
    const auto [jlo, jhi] = jacobi_eigs(m);
    CHECK(std::abs(e.lo - jlo) < 1e-10);
    CHECK(std::abs(e.hi - jhi) < 1e-10);
  }
}

TEST_CASE("eig_herm2 rejects non-finite input") {
  CHECK_THROWS_AS(eig_herm2({std::nan(""), 0.0, {0.0, 0.0}}), InvalidMatrixError);
}

TEST_CASE("square: diagonal, zero and golden cases") {
  const Hermitian2 d = square(Hermitian2::diagonal(1.0, 0.4));
  CHECK(d.a11 == 1.0);
  CHECK(d.a22 == doctest::Approx(0.16).epsilon(1e-15));

  const Hermitian2 z = square(Hermitian2{});
  CHECK(z.a11 == 0.0);
  CHECK(z.a22 == 0.0);
  CHECK(z.a12 == Complex(0.0, 0.0));

  const Hermitian2 a2 = square(kA);
  CHECK(std::abs(a2.a11 - 0.586) < 1e-3);
  CHECK(std::abs(a2.a12.real() - 0.202) < 1e-3);
  CHECK(std::abs(a2.a22 - 0.069) < 1e-3);
  CHECK(std::abs(a2.a11 - 0.5860056) < 1e-12);
  CHECK(std::abs(a2.a12.real() - 0.20126183057762342) < 1e-12);
  CHECK(std::abs(a2.a22 - 0.06912276) < 1e-12);
}

TEST_CASE("square matches the functional calculus on random input") {
  std::mt19937_64 g(11);
  for (int it = 0; it < 2000; ++it) {
    const Hermitian2 m = random_hermitian(g);
    const EigenPair2 em = eig_herm2(m);
    const EigenPair2 es = eig_herm2(square(m));
    const double s1 = em.lo * em.lo;
    const double s2 = em.hi * em.hi;
    CHECK(std::abs(es.lo - std::min(s1, s2)) < 1e-10);
    CHECK(std::abs(es.hi - std::max(s1, s2)) < 1e-10);
  }
}

TEST_CASE("is_psd: spectral and minor checks") {
  CHECK(is_psd(Hermitian2::diagonal(0.5, 0.5), 1e-9));
  // symmetric matrix with eigenvalues -0.1 and 1.1
  CHECK_FALSE(is_psd({0.5, 0.5, Complex(0.6, 0.0)}, 1e-9));
  CHECK(is_psd(kBMat - kA, 1e-9));
  CHECK_THROWS_AS(is_psd(Hermitian2::identity(), -1.0), ParamError);

  std::mt19937_64 g(13);
  for (int it = 0; it < 2000; ++it) {
    const Hermitian2 m = random_hermitian(g);
    if (std::abs(eig_herm2(m).lo) < 1e-6) continue;  // skip boundary cases
    CHECK(is_psd(m, 1e-9) == is_psd_minors(m, 1e-9));
  }
}

TEST_CASE("expectation: identity, golden gaps, dense-arithmetic oracle") {
  std::mt19937_64 g(17);
  for (int it = 0; it < 200; ++it) {
    CHECK(expectation(Hermitian2::identity(), random_pure(g)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  const double first = expectation(kBMat, kPhi) - expectation(kA, kPhi);
  const double second = expectation(square(kBMat), kPhi) - expectation(square(kA), kPhi);
  CHECK(std::abs(first - 0.0528) < 5e-4);    // paper-quoted value
  CHECK(std::abs(second - (-0.0590)) < 5e-4);  // paper-quoted value
  CHECK(std::abs(first - 0.05295122712335015) < 1e-12);
  CHECK(std::abs(second - (-0.05901675952735447)) < 1e-12);

  for (int it = 0; it < 1000; ++it) {
    const Hermitian2 m = random_hermitian(g);
    const QubitState s = random_pure(g);
    CHECK(std::abs(expectation(m, s) - dense_expectation(m, s)) < 1e-12);
  }
}

TEST_CASE("expectation is linear and bounded by the spectrum") {
  std::mt19937_64 g(19);
  for (int it = 0; it < 1000; ++it) {
    const Hermitian2 m = random_hermitian(g);
    const Hermitian2 n = random_hermitian(g);
    const QubitState s = random_pure(g);
    CHECK(std::abs(expectation(m + n, s) - expectation(m, s) - expectation(n, s)) < 1e-12);
    const EigenPair2 e = eig_herm2(m);
    const double v = expectation(m, s);
    CHECK(v >= e.lo - 1e-10);
    CHECK(v <= e.hi + 1e-10);
  }
}

TEST_CASE("QubitState: normalization contract") {
  const QubitState s = QubitState::pure(0.391, 0.920);
  CHECK(std::abs(std::norm(s.alpha()) + std::norm(s.beta()) - 1.0) < 1e-12);
  CHECK(s.alpha().real() == doctest::Approx(0.39114064034485163).epsilon(1e-15));
  CHECK_THROWS_AS(QubitState::pure(0.0, 0.0), NormalizationError);
  CHECK_THROWS_AS(QubitState::pure(std::nan(""), 1.0), NormalizationError);
}

TEST_CASE("Density2 validates its invariants") {
  CHECK_THROWS_AS(Density2::from(Hermitian2::diagonal(0.6, 0.6)), NormalizationError);
  CHECK_THROWS_AS(Density2::from({1.2, -0.2, Complex(0.0, 0.0)}), NormalizationError);
  const Density2 ok = Density2::from(Hermitian2::diagonal(0.25, 0.75));
  CHECK(ok.matrix().trace() == 1.0);
}

TEST_CASE("depolarize: endpoints and the golden p=0.5 gap") {
  const Density2 unchanged = depolarize(kPhi, 0.0);
  const Density2 phi_rho = kPhi.to_density();
  CHECK(unchanged.matrix().a11 == phi_rho.matrix().a11);
  CHECK(unchanged.matrix().a12 == phi_rho.matrix().a12);

  const Density2 mixed = depolarize(kPhi, 1.0);
  CHECK(mixed.matrix().a11 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mixed.matrix().a22 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(mixed.matrix().a12) < 1e-15);

  const Hermitian2 gap2 = square(kBMat) - square(kA);
  const double g05 = expectation(gap2, QubitState::mixed(depolarize(kPhi, 0.5)));
  CHECK(std::abs(g05 - 0.08064475917982203) < 1e-12);
  CHECK(g05 > 0.0);  // the violation is washed out

  CHECK_THROWS_AS(depolarize(kPhi, -0.1), ParamError);
  CHECK_THROWS_AS(depolarize(kPhi, 1.1), ParamError);
}

TEST_CASE("depolarize preserves trace and positivity across p") {
  std::mt19937_64 g(23);
  for (int it = 0; it < 500; ++it) {
    const QubitState s = random_pure(g);
    const double p = qwit_test::uniform(g, 0.0, 1.0);
    const Density2 d = depolarize(s, p);
    CHECK(std::abs(d.matrix().trace() - 1.0) < 1e-12);
    CHECK(eig_herm2(d.matrix()).lo >= -1e-12);
  }
}
