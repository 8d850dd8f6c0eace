#include "qwit/matcore.hpp"

#include <cmath>

namespace qwit {

namespace {

constexpr double kDegenerate = 1e-24;   // threshold on delta^2 + |a12|^2
constexpr double kDensityTol = 1e-12;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

bool Hermitian2::finite() const {
  return std::isfinite(a11) && std::isfinite(a22) && qwit::finite(a12);
}

Complex dot(const Vec2& u, const Vec2& v) {
  return std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
}

double norm(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

Vec2 apply(const Hermitian2& m, const Vec2& v) {
  return {m.a11 * v[0] + m.a12 * v[1], std::conj(m.a12) * v[0] + m.a22 * v[1]};
}

EigenPair2 eig_herm2(const Hermitian2& m) {
  if (!m.finite()) throw InvalidMatrixError("eig_herm2: non-finite matrix entry");
  const double mean = 0.5 * (m.a11 + m.a22);
  const double delta = m.a11 - m.a22;
  const double off2 = std::norm(m.a12);
  if (delta * delta + off2 < kDegenerate) {
    return {mean, mean, {Complex(1.0, 0.0), Complex(0.0, 0.0)}, {Complex(0.0, 0.0), Complex(1.0, 0.0)}};
  }
  const double r = std::sqrt(0.25 * delta * delta + off2);
  const double lo = mean - r;
  const double hi = mean + r;
  // Both (hi - a22, conj(a12)) and (a12, hi - a11) solve the eigenproblem
  // exactly; pick the branch whose leading entry is r + |delta|/2 so the
  // vector's norm is bounded below by r and no cancellation occurs.
  Vec2 vhi;
  if (delta >= 0.0) {
    vhi = {Complex(hi - m.a22, 0.0), std::conj(m.a12)};
  } else {
    vhi = {m.a12, Complex(hi - m.a11, 0.0)};
  }
  const double s = 1.0 / norm(vhi);
  vhi = {s * vhi[0], s * vhi[1]};
  const Vec2 vlo = {-std::conj(vhi[1]), std::conj(vhi[0])};
  return {lo, hi, vlo, vhi};
}

Hermitian2 square(const Hermitian2& m) {
  if (!m.finite()) throw InvalidMatrixError("square: non-finite matrix entry");
  const double off2 = std::norm(m.a12);
  return {m.a11 * m.a11 + off2, m.a22 * m.a22 + off2, m.a12 * (m.a11 + m.a22)};
}

bool is_psd(const Hermitian2& m, double tol) {
  if (tol < 0.0) throw ParamError("is_psd: tol must be nonnegative");
  return eig_herm2(m).lo >= -tol;
}

bool is_psd_minors(const Hermitian2& m, double tol) {
  if (tol < 0.0) throw ParamError("is_psd_minors: tol must be nonnegative");
  if (!m.finite()) throw InvalidMatrixError("is_psd_minors: non-finite matrix entry");
  return m.a11 >= -tol && m.a22 >= -tol && m.det() >= -tol * (std::abs(m.trace()) + 1.0);
}

Density2 Density2::from(const Hermitian2& h) {
  if (!h.finite()) throw InvalidMatrixError("Density2: non-finite matrix entry");
  if (std::abs(h.trace() - 1.0) > kDensityTol) {
    throw NormalizationError("Density2: trace must equal 1 within 1e-12");
  }
  if (eig_herm2(h).lo < -kDensityTol) {
    throw NormalizationError("Density2: matrix has a negative eigenvalue");
  }
  return Density2(h);
}

QubitState QubitState::pure(Complex alpha, Complex beta) {
  if (!finite(alpha) || !finite(beta)) {
    throw NormalizationError("QubitState: non-finite amplitude");
  }
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (!(n2 > 1e-300)) throw NormalizationError("QubitState: amplitudes have zero norm");
  // idempotent: already-normalized amplitudes pass through bit-exactly
  if (std::abs(n2 - 1.0) <= 1e-15) return QubitState(alpha, beta);
  const double s = 1.0 / std::sqrt(n2);
  return QubitState(s * alpha, s * beta);
}

QubitState QubitState::mixed(const Density2& rho) { return QubitState(rho); }

Complex QubitState::alpha() const {
  if (!pure_) throw PureStateRequiredError("QubitState: alpha() on a mixed state");
  return alpha_;
}

Complex QubitState::beta() const {
  if (!pure_) throw PureStateRequiredError("QubitState: beta() on a mixed state");
  return beta_;
}

const Density2& QubitState::rho() const {
  if (pure_) throw Error("QubitState: rho() on a pure state");
  return rho_;
}

Density2 QubitState::to_density() const {
  if (!pure_) return rho_;
  return Density2::from({std::norm(alpha_), std::norm(beta_), alpha_ * std::conj(beta_)});
}

double expectation(const Hermitian2& m, const QubitState& s) {
  if (!m.finite()) throw InvalidMatrixError("expectation: non-finite matrix entry");
  if (s.is_pure()) {
    const Complex a = s.alpha();
    const Complex b = s.beta();
    return m.a11 * std::norm(a) + m.a22 * std::norm(b) +
           2.0 * std::real(std::conj(a) * m.a12 * b);
  }
  const Hermitian2& r = s.rho().matrix();
  return r.a11 * m.a11 + r.a22 * m.a22 + 2.0 * std::real(r.a12 * std::conj(m.a12));
}

Density2 depolarize(const QubitState& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParamError("depolarize: p must lie in [0,1]");
  const Hermitian2 rho = s.to_density().matrix();
  const double q = 1.0 - p;
  return Density2::from({q * rho.a11 + 0.5 * p, q * rho.a22 + 0.5 * p, q * rho.a12});
}

}  // namespace qwit
