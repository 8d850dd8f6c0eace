#include "qwit/witness.hpp"

#include <cmath>
#include <numbers>

namespace qwit {

namespace {

constexpr double kDefaultTol = 1e-9;
constexpr double kPhaseTol = 1e-12;

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double d) { return d * std::numbers::pi / 180.0; }

// Entries of m in the orthonormal basis (e0, e1).
Hermitian2 in_basis(const Hermitian2& m, const Vec2& e0, const Vec2& e1) {
  const Vec2 me0 = apply(m, e0);
  const Vec2 me1 = apply(m, e1);
  return {std::real(dot(e0, me0)), std::real(dot(e1, me1)), dot(e0, me1)};
}

// Phase factor that makes the first component (falling back to the second)
// of v real nonnegative.
Complex gauge_phase(const Vec2& v) {
  const Complex pivot = std::abs(v[0]) > kPhaseTol ? v[0] : v[1];
  const double a = std::abs(pivot);
  return a > 0.0 ? std::conj(pivot) / a : Complex(1.0, 0.0);
}

}  // namespace

OrderingReport check_ordering(const WitnessTriple& t, double tol) {
  if (!(tol >= 0.0)) throw ParamError("check_ordering: tol must be nonnegative");
  const double ea = eig_herm2(t.A.m).lo;
  const double eba = eig_herm2(t.B.m - t.A.m).lo;
  const double eib = eig_herm2(Hermitian2::identity() - t.B.m).lo;
  return {ea, eba, eib, ea >= -tol && eba >= -tol && eib >= -tol, tol};
}

ViolationReport violation_report(const WitnessTriple& t) {
  const bool ordered = check_ordering(t, kDefaultTol).ordered;
  const double first = expectation(t.B.m, t.state) - expectation(t.A.m, t.state);
  const double second =
      expectation(square(t.B.m), t.state) - expectation(square(t.A.m), t.state);
  const double min_eig = eig_herm2(square(t.B.m) - square(t.A.m)).lo;
  return {first, second, min_eig, ordered && second < 0.0};
}

ClosedFormEigs violation_eigs_closed_form(double a1, double a2, double b, double xi_abs) {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(b) || !std::isfinite(xi_abs)) {
    throw ParamError("violation_eigs_closed_form: non-finite parameter");
  }
  const double xi2 = xi_abs * xi_abs;
  const double s = b * b + 1.0 - a1 * a1 - a2 * a2 - 2.0 * xi2;
  const double u = b * b - 1.0 + a1 * a1 - a2 * a2;
  const double d = std::sqrt(u * u + 4.0 * (a1 + a2) * (a1 + a2) * xi2);
  return {0.5 * (s - d), 0.5 * (s + d)};
}

ClassicalCheckResult classical_second_moment_check(const ClassicalModel& c) {
  const std::size_t n = c.f.size();
  if (n == 0 || c.g.size() != n || c.rho.size() != n) {
    throw ModelError("classical model: f, g, rho must be nonempty and equal-length");
  }
  double lhs = 0.0;
  double rhs = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(c.f[i]) || !std::isfinite(c.g[i]) || !std::isfinite(c.rho[i])) {
      throw ModelError("classical model: non-finite entry");
    }
    if (c.rho[i] < 0.0) throw ModelError("classical model: negative probability");
    if (!(0.0 <= c.f[i] && c.f[i] <= c.g[i])) {
      throw ModelError("classical model: needs 0 <= f_i <= g_i");
    }
    lhs += c.rho[i] * c.f[i] * c.f[i];
    rhs += c.rho[i] * c.g[i] * c.g[i];
    total += c.rho[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ModelError("classical model: probabilities must sum to 1 within 1e-12");
  }
  return {lhs, rhs, lhs <= rhs + 1e-12};
}

PolarizationSetup photon_angles(const WitnessTriple& t) {
  if (!t.state.is_pure()) {
    throw PureStateRequiredError("photon_angles: a pure state is required");
  }

  PolarizationSetup out;
  Hermitian2 a = t.A.m;
  Hermitian2 b = t.B.m;
  Vec2 phi = {t.state.alpha(), t.state.beta()};

  // Move to the eigenbasis of B with the larger eigenvalue on the H port.
  if (std::abs(b.a12) > kPhaseTol || b.a11 < b.a22) {
    const EigenPair2 eb = eig_herm2(b);
    Vec2 e0 = eb.vec_hi;
    Vec2 e1 = eb.vec_lo;
    const Complex p0 = gauge_phase(e0);
    const Complex p1 = gauge_phase(e1);
    e0 = {p0 * e0[0], p0 * e0[1]};
    e1 = {p1 * e1[0], p1 * e1[1]};
    a = in_basis(a, e0, e1);
    phi = {dot(e0, phi), dot(e1, phi)};
    b = Hermitian2::diagonal(eb.hi, eb.lo);
    out.frame_rotation_deg = deg(std::atan2(std::abs(e0[1]), std::abs(e0[0])));
    if (std::abs(e0[0].imag()) > kPhaseTol || std::abs(e0[1].imag()) > kPhaseTol) {
      out.warning += "B eigenbasis is complex; reported frame rotation uses magnitudes. ";
    }
  }

  // Remove the off-diagonal phase of A with diag(1, e^{-i arg a12}); the
  // state picks up the inverse phase on its second component.
  if (std::abs(a.a12.imag()) > kPhaseTol) {
    const double g = std::arg(a.a12);
    a.a12 = std::abs(a.a12);
    phi[1] *= std::polar(1.0, g);
    out.warning += "gauge rotation applied to make A's off-diagonal real. ";
  } else {
    a.a12 = a.a12.real();
  }

  // Global phase: leading component of the state real nonnegative.
  const Complex gp = gauge_phase(phi);
  phi = {gp * phi[0], gp * phi[1]};
  double beta_planar = phi[1].real();
  if (std::abs(phi[1].imag()) > 1e-9 * (std::abs(phi[1]) + 1.0)) {
    beta_planar = std::abs(phi[1]);
    out.warning += "state keeps a relative phase; its magnitude was used for the angle. ";
  }
  out.state_angle_deg = deg(std::atan2(beta_planar, phi[0].real()));

  // A is now real symmetric; its hi-eigenvector fixes the polarizer angle.
  const EigenPair2 ea = eig_herm2(a);
  Vec2 v = ea.vec_hi;
  const Complex pv = gauge_phase(v);
  v = {pv * v[0], pv * v[1]};
  double theta = deg(std::atan2(v[1].real(), v[0].real()));
  out.outcome_values_B = {b.a11, b.a22};
  if (theta < 0.0) {
    // The same basis arises from a rotation by theta + 90 with the ports
    // exchanged; keep the reported rotation in [0, 90).
    out.basis_rotation_deg = theta + 90.0;
    out.outcome_values_A = {ea.lo, ea.hi};
  } else if (theta >= 90.0 - 1e-12) {
    out.basis_rotation_deg = 0.0;
    out.outcome_values_A = {ea.lo, ea.hi};
  } else {
    out.basis_rotation_deg = theta;
    out.outcome_values_A = {ea.hi, ea.lo};
  }
  return out;
}

WitnessTriple triple_from_polarization(const PolarizationSetup& s) {
  const double c = std::cos(rad(s.basis_rotation_deg));
  const double sn = std::sin(rad(s.basis_rotation_deg));
  const double vh = s.outcome_values_A[0];
  const double vv = s.outcome_values_A[1];
  const Hermitian2 a{c * c * vh + sn * sn * vv, sn * sn * vh + c * c * vv,
                     Complex(c * sn * (vh - vv), 0.0)};
  const Hermitian2 b = Hermitian2::diagonal(s.outcome_values_B[0], s.outcome_values_B[1]);
  const QubitState state = QubitState::pure(std::cos(rad(s.state_angle_deg)),
                                            std::sin(rad(s.state_angle_deg)));
  return {{a, "A"}, {b, "B"}, state};
}

}  // namespace qwit
