#pragma once

#include <array>
#include <cstdint>

#include "qwit/witness.hpp"

namespace qwit {

/// Execution policy for the scan kernels. `serial` is the reference
/// implementation; `parallel` partitions rows across OpenMP threads. Both
/// produce bit-identical results: row contents are independent of the
/// schedule and the reduction walks rows in index order.
enum class Execution { serial, parallel };

/// Point of the two-parameter family obtained by making both determinant
/// constraints active: b = a2/(1-a1), xi = sqrt(a1*a2). Feasible iff
/// 0 <= a1 < 1 and 0 <= a2 <= 1-a1.
struct ReducedParams {
  double a1 = 0.0;
  double a2 = 0.0;
};

struct FullParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;
  double xi = 0.0;
};

/// Result of a search: parameters, the lower eigenvalue of B^2 - A^2 (more
/// negative = stronger violation), the witnessing triple evaluated at the
/// lo-eigenvector state, the slacks of the two determinant constraints, and
/// the number of objective evaluations spent.
struct Optimum {
  FullParams params;
  double objective = 0.0;
  WitnessTriple triple;
  std::array<double, 2> constraint_slacks{};
  std::uint64_t evaluations = 0;
};

/// refine_local exhausted its sweep cap; carries the best point found.
class IterationCapError : public Error {
 public:
  IterationCapError(const std::string& msg, Optimum best)
      : Error(msg), best_(std::move(best)) {}
  const Optimum& best() const { return best_; }

 private:
  Optimum best_;
};

bool reduced_feasible(const ReducedParams& p);
bool full_feasible(const FullParams& p);

/// A = [[a1, sqrt(a1*a2)], [sqrt(a1*a2), a2]], B = diag(1, a2/(1-a1)),
/// state = lo-eigenvector of B^2 - A^2. Ordered by construction (both
/// determinants vanish). Infeasible parameters throw ParamError.
WitnessTriple build_reduced_triple(const ReducedParams& p);

/// Lower closed-form eigenvalue of B^2 - A^2 at the reduced point.
double reduced_objective(const ReducedParams& p);

/// Exhaustive scan of the reduced rectangle a1 in [1e-6, 1-1e-6],
/// a2 in [0, 1-a1] at the given step (valid range (0, 0.1]). Ties break to
/// the first point in row-major order (a1 outer, a2 inner).
Optimum grid_search(double step, Execution exec = Execution::parallel);

/// Golden-section coordinate descent on (a1, a2), accepting only strict
/// improvements, until the parameter change of a sweep drops below tol.
/// Throws IterationCapError once max_sweeps sweeps are exhausted.
Optimum refine_local(const ReducedParams& start, double tol, int max_sweeps = 10000);

/// Exhaustive scan of the four-parameter feasible set (diagonals and
/// determinants of A, B, B-A nonnegative, b <= 1) at the given step (valid
/// range (0, 0.05]). Ties break by the total order (objective, a1, a2, b,
/// xi), so the result is independent of worker count.
Optimum full_search(double step, Execution exec = Execution::parallel);

}  // namespace qwit
