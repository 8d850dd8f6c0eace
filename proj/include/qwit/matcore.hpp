#pragma once

#include <array>
#include <complex>

#include "qwit/errors.hpp"

namespace qwit {

using Complex = std::complex<double>;

/// 2x2 complex Hermitian matrix. Only the upper triangle is stored; a21 is
/// implied as conj(a12), so hermiticity is structural.
struct Hermitian2 {
  double a11 = 0.0;
  double a22 = 0.0;
  Complex a12{0.0, 0.0};

  static Hermitian2 diagonal(double d1, double d2) { return {d1, d2, {0.0, 0.0}}; }
  static Hermitian2 identity() { return diagonal(1.0, 1.0); }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - std::norm(a12); }
  bool finite() const;

  friend Hermitian2 operator+(const Hermitian2& x, const Hermitian2& y) {
    return {x.a11 + y.a11, x.a22 + y.a22, x.a12 + y.a12};
  }
  friend Hermitian2 operator-(const Hermitian2& x, const Hermitian2& y) {
    return {x.a11 - y.a11, x.a22 - y.a22, x.a12 - y.a12};
  }
  friend Hermitian2 operator*(double s, const Hermitian2& x) {
    return {s * x.a11, s * x.a22, s * x.a12};
  }
};

using Vec2 = std::array<Complex, 2>;

/// Hermitian inner product, conjugate-linear in the first argument.
Complex dot(const Vec2& u, const Vec2& v);
double norm(const Vec2& v);
Vec2 apply(const Hermitian2& m, const Vec2& v);

/// Eigendecomposition of a Hermitian2, eigenvalues ascending, eigenvectors
/// orthonormal.
struct EigenPair2 {
  double lo = 0.0;
  double hi = 0.0;
  Vec2 vec_lo{};
  Vec2 vec_hi{};
};

/// Unit-trace positive-semidefinite Hermitian2. Construction validates the
/// invariants (trace within 1e-12 of 1, eigenvalues >= -1e-12).
class Density2 {
 public:
  static Density2 from(const Hermitian2& h);
  static Density2 maximally_mixed() { return Density2(Hermitian2::diagonal(0.5, 0.5)); }

  const Hermitian2& matrix() const { return h_; }

 private:
  explicit Density2(const Hermitian2& h) : h_(h) {}
  Hermitian2 h_;
};

/// A qubit state: either a pure amplitude pair or a density matrix.
/// Pure factories rescale to unit norm, so stored states always satisfy
/// |alpha|^2 + |beta|^2 = 1; a zero or non-finite amplitude vector throws
/// NormalizationError.
class QubitState {
 public:
  static QubitState pure(Complex alpha, Complex beta);
  static QubitState mixed(const Density2& rho);

  bool is_pure() const { return pure_; }
  Complex alpha() const;
  Complex beta() const;
  const Density2& rho() const;
  Density2 to_density() const;

 private:
  QubitState(Complex a, Complex b) : pure_(true), alpha_(a), beta_(b), rho_(Density2::maximally_mixed()) {}
  explicit QubitState(const Density2& r) : pure_(false), rho_(r) {}

  bool pure_;
  Complex alpha_{0.0, 0.0};
  Complex beta_{0.0, 0.0};
  Density2 rho_;
};

/// Analytic eigendecomposition: trace/2 +- sqrt((delta/2)^2 + |a12|^2).
/// Near-degenerate input (delta^2 + |a12|^2 < 1e-24) returns lo = hi =
/// trace/2 with the canonical basis, avoiding 0/0 in the eigenvector
/// formulas. Throws InvalidMatrixError on non-finite input.
EigenPair2 eig_herm2(const Hermitian2& m);

/// M*M, Hermitian by construction.
Hermitian2 square(const Hermitian2& m);

/// True iff the smaller eigenvalue is >= -tol.
bool is_psd(const Hermitian2& m, double tol = 1e-9);

/// Equivalent positivity test from the principal minors:
/// a11 >= -tol, a22 >= -tol, det >= -tol*(|trace|+1).
bool is_psd_minors(const Hermitian2& m, double tol = 1e-9);

/// <phi|M|phi> for pure states, Tr(rho*M) for mixed. Exactly real by
/// construction of the Hermitian quadratic form.
double expectation(const Hermitian2& m, const QubitState& s);

/// (1-p)*rho + p*I/2 on the density form of s. p outside [0,1] throws
/// ParamError.
Density2 depolarize(const QubitState& s, double p);

}  // namespace qwit
