#pragma once

#include <array>
#include <string>
#include <vector>

#include "qwit/matcore.hpp"

namespace qwit {

/// A bounded observable together with the label used in shot records.
struct Observable {
  Hermitian2 m;
  std::string label;
};

/// The object under test: a pair of observables and the state they are
/// evaluated in.
struct WitnessTriple {
  Observable A;
  Observable B;
  QubitState state;
};

/// Minimum eigenvalues of A, B-A and I-B; `ordered` iff all three clear -tol.
struct OrderingReport {
  double eig_A_min = 0.0;
  double eig_BminusA_min = 0.0;
  double eig_IminusB_min = 0.0;
  bool ordered = false;
  double tol = 0.0;
};

/// First- and second-moment gaps in the triple's state, plus the
/// state-optimal bound min_eig(B^2 - A^2). `witnessed` iff the triple is
/// ordered and the state-specific second-moment gap is negative.
struct ViolationReport {
  double first_gap = 0.0;
  double second_gap = 0.0;
  double min_eig_B2A2 = 0.0;
  bool witnessed = false;
};

/// Finite-support commutative model: outcome functions f <= g and a
/// probability vector rho over the same points.
struct ClassicalModel {
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> rho;
};

struct ClassicalCheckResult {
  double lhs = 0.0;  // sum rho_i f_i^2
  double rhs = 0.0;  // sum rho_i g_i^2
  bool holds = false;
};

/// Measurement-bench description of a triple: polarizer rotation for the
/// A basis, preparation angle of the state, and the outcome value attached
/// to each port. Angles are degrees; the H port of B carries its larger
/// eigenvalue.
struct PolarizationSetup {
  double basis_rotation_deg = 0.0;
  double state_angle_deg = 0.0;
  std::array<double, 2> outcome_values_B{};  // (H, V) ports
  std::array<double, 2> outcome_values_A{};  // (H', V') ports
  double frame_rotation_deg = 0.0;           // rotation used to diagonalize B
  std::string warning;                       // nonempty if a gauge fix was needed
};

OrderingReport check_ordering(const WitnessTriple& t, double tol = 1e-9);

ViolationReport violation_report(const WitnessTriple& t);

struct ClosedFormEigs {
  double lo = 0.0;
  double hi = 0.0;
};

/// Eigenvalues of B^2 - A^2 for the two-parameter-per-matrix family
/// A = [[a1, xi], [xi, a2]], B = diag(1, b):
///   (b^2 + 1 - a1^2 - a2^2 - 2 xi^2 -+ sqrt((b^2 - 1 + a1^2 - a2^2)^2
///                                          + 4 (a1+a2)^2 xi^2)) / 2.
/// Only |xi| enters, so the result is even in xi.
ClosedFormEigs violation_eigs_closed_form(double a1, double a2, double b, double xi_abs);

/// The commutative-side oracle: for any valid model, sum rho f^2 never
/// exceeds sum rho g^2. Invariant breaches throw ModelError.
ClassicalCheckResult classical_second_moment_check(const ClassicalModel& c);

/// Translates an ordered triple with a pure state into polarizer settings.
/// B is diagonalized first if needed (rotation reported); complex phases are
/// gauge-fixed so that the leading components are real nonnegative, with a
/// warning recorded whenever a fix was applied.
PolarizationSetup photon_angles(const WitnessTriple& t);

/// Rebuilds the (gauge-fixed, B-diagonal-frame) triple described by a setup.
WitnessTriple triple_from_polarization(const PolarizationSetup& s);

}  // namespace qwit
