#include "qwit/optimizer.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qwit {

namespace {

constexpr double kEdgeEps = 1e-6;  // keeps a1 away from the b = a2/(1-a1) pole
constexpr double kInf = std::numeric_limits<double>::infinity();

double reduced_b(double a1, double a2) { return a2 / (1.0 - a1); }
double reduced_xi(double a1, double a2) { return std::sqrt(a1 * a2); }

// Hot path shared by reduced_objective and the scan kernels; feasibility is
// the caller's responsibility.
double eval_reduced(double a1, double a2) {
  return violation_eigs_closed_form(a1, a2, reduced_b(a1, a2), reduced_xi(a1, a2)).lo;
}

double eval_full(const FullParams& p) {
  return violation_eigs_closed_form(p.a1, p.a2, p.b, p.xi).lo;
}

Optimum make_optimum(const FullParams& p, const Hermitian2& a, const Hermitian2& b,
                     double objective, std::uint64_t evaluations) {
  const EigenPair2 e = eig_herm2(square(b) - square(a));
  WitnessTriple triple{{a, "A"}, {b, "B"}, QubitState::pure(e.vec_lo[0], e.vec_lo[1])};
  const double xi2 = p.xi * p.xi;
  return {p,
          objective,
          std::move(triple),
          {p.a1 * p.a2 - xi2, (1.0 - p.a1) * (p.b - p.a2) - xi2},
          evaluations};
}

Optimum make_reduced_optimum(double a1, double a2, std::uint64_t evaluations) {
  const double xi = reduced_xi(a1, a2);
  const double b = reduced_b(a1, a2);
  const Hermitian2 ma{a1, a2, Complex(xi, 0.0)};
  const Hermitian2 mb = Hermitian2::diagonal(1.0, b);
  return make_optimum({a1, a2, b, xi}, ma, mb, eval_reduced(a1, a2), evaluations + 1);
}

// Golden-section minimum of f over [lo, hi]; returns the best probed point.
// Fully deterministic: fixed shrink schedule, strict-improvement tracking.
struct LinePoint {
  double x = 0.0;
  double f = kInf;
};

template <typename F>
LinePoint golden_min(F&& f, double lo, double hi, double xtol) {
  const double invphi = 0.6180339887498949;
  const double invphi2 = 0.3819660112501051;
  LinePoint best;
  auto probe = [&](double x) {
    const double v = f(x);
    if (v < best.f) best = {x, v};
    return v;
  };
  if (!(hi > lo)) return {lo, f(lo)};
  double a = lo;
  double b = hi;
  double c = a + invphi2 * (b - a);
  double d = a + invphi * (b - a);
  double fc = probe(c);
  double fd = probe(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = a + invphi2 * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = probe(d);
    }
  }
  return best;
}

}  // namespace

bool reduced_feasible(const ReducedParams& p) {
  return std::isfinite(p.a1) && std::isfinite(p.a2) && p.a1 >= 0.0 && p.a1 < 1.0 &&
         p.a2 >= 0.0 && p.a2 <= 1.0 - p.a1;
}

bool full_feasible(const FullParams& p) {
  if (!std::isfinite(p.a1) || !std::isfinite(p.a2) || !std::isfinite(p.b) ||
      !std::isfinite(p.xi)) {
    return false;
  }
  const double xi2 = p.xi * p.xi;
  return 0.0 <= p.a1 && p.a1 <= 1.0 && 0.0 <= p.b && p.b <= 1.0 && 0.0 <= p.a2 &&
         p.a2 <= p.b && p.a1 * p.a2 >= xi2 && (1.0 - p.a1) * (p.b - p.a2) >= xi2;
}

WitnessTriple build_reduced_triple(const ReducedParams& p) {
  if (!reduced_feasible(p)) {
    throw ParamError("build_reduced_triple: parameters outside the reduced feasible set");
  }
  return make_reduced_optimum(p.a1, p.a2, 0).triple;
}

double reduced_objective(const ReducedParams& p) {
  if (!reduced_feasible(p)) {
    throw ParamError("reduced_objective: parameters outside the reduced feasible set");
  }
  return eval_reduced(p.a1, p.a2);
}

Optimum grid_search(double step, Execution exec) {
  if (!(step > 0.0 && step <= 0.1)) throw ParamError("grid_search: step must lie in (0, 0.1]");

  const std::int64_t n1 = static_cast<std::int64_t>(std::floor((1.0 - 2.0 * kEdgeEps) / step)) + 1;
  struct RowBest {
    double f = kInf;
    double a2 = 0.0;
    std::uint64_t evals = 0;
  };
  std::vector<RowBest> rows(static_cast<std::size_t>(n1));

  const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static, 1) if (par)
  for (std::int64_t i = 0; i < n1; ++i) {
    const double a1 = kEdgeEps + static_cast<double>(i) * step;
    RowBest row;
    for (std::int64_t j = 0;; ++j) {
      const double a2 = static_cast<double>(j) * step;
      if (a2 > 1.0 - a1) break;
      const double f = eval_reduced(a1, a2);
      ++row.evals;
      if (f < row.f) row = {f, a2, row.evals};
    }
    rows[static_cast<std::size_t>(i)].f = row.f;
    rows[static_cast<std::size_t>(i)].a2 = row.a2;
    rows[static_cast<std::size_t>(i)].evals = row.evals;
  }

  // Fixed-order reduction: first strict minimum in row-major order, exactly
  // the serial scan's tie-breaking regardless of thread count.
  double best_f = kInf;
  double best_a1 = kEdgeEps;
  double best_a2 = 0.0;
  std::uint64_t evals = 0;
  for (std::int64_t i = 0; i < n1; ++i) {
    const RowBest& row = rows[static_cast<std::size_t>(i)];
    evals += row.evals;
    if (row.f < best_f) {
      best_f = row.f;
      best_a1 = kEdgeEps + static_cast<double>(i) * step;
      best_a2 = row.a2;
    }
  }
  return make_reduced_optimum(best_a1, best_a2, evals);
}

Optimum refine_local(const ReducedParams& start, double tol, int max_sweeps) {
  if (!reduced_feasible(start)) {
    throw ParamError("refine_local: start lies outside the reduced feasible set");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ParamError("refine_local: tol must be positive");
  if (max_sweeps < 1) throw ParamError("refine_local: max_sweeps must be positive");

  std::uint64_t evals = 0;
  auto f = [&evals](double a1, double a2) {
    ++evals;
    return eval_reduced(a1, a2);
  };

  double a1 = start.a1;
  double a2 = start.a2;
  double fc = f(a1, a2);
  const double xtol = std::max(tol * 0.1, 1e-13);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double p1 = a1;
    const double p2 = a2;

    const double hi1 = std::min(1.0 - kEdgeEps, 1.0 - a2);
    if (hi1 > kEdgeEps) {
      const LinePoint lp = golden_min([&](double x) { return f(x, a2); }, kEdgeEps, hi1, xtol);
      if (lp.f < fc) {
        a1 = lp.x;
        fc = lp.f;
      }
    }
    const double hi2 = 1.0 - a1;
    if (hi2 > 0.0) {
      const LinePoint lp = golden_min([&](double x) { return f(a1, x); }, 0.0, hi2, xtol);
      if (lp.f < fc) {
        a2 = lp.x;
        fc = lp.f;
      }
    }

    if (std::max(std::abs(a1 - p1), std::abs(a2 - p2)) < tol) {
      return make_reduced_optimum(a1, a2, evals);
    }
  }
  throw IterationCapError(
      "refine_local: no convergence within " + std::to_string(max_sweeps) + " sweeps",
      make_reduced_optimum(a1, a2, evals));
}

Optimum full_search(double step, Execution exec) {
  if (!(step > 0.0 && step <= 0.05)) throw ParamError("full_search: step must lie in (0, 0.05]");

  const std::int64_t n = std::llround(1.0 / step) + 1;
  auto grid = [step](std::int64_t k) { return std::min(static_cast<double>(k) * step, 1.0); };

  struct RowBest {
    double f = kInf;
    double a2 = 0.0;
    double b = 0.0;
    double xi = 0.0;
    std::uint64_t evals = 0;
  };
  // Candidate order within a row follows the spec's total order
  // (objective, a2, b, xi); across rows a1 ascends, completing the order.
  auto better = [](double f, double a2, double b, double xi, const RowBest& cur) {
    if (f != cur.f) return f < cur.f;
    if (a2 != cur.a2) return a2 < cur.a2;
    if (b != cur.b) return b < cur.b;
    return xi < cur.xi;
  };
  std::vector<RowBest> rows(static_cast<std::size_t>(n));

  const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static, 1) if (par)
  for (std::int64_t i = 0; i < n; ++i) {
    const double a1 = grid(i);
    RowBest row;
    for (std::int64_t ib = 0; ib < n; ++ib) {
      const double b = grid(ib);
      for (std::int64_t j = 0;; ++j) {
        const double a2 = grid(j);
        if (a2 > b) break;
        const double ximax2 = std::min(a1 * a2, (1.0 - a1) * (b - a2));
        if (ximax2 < 0.0) continue;
        const std::int64_t nxi =
            static_cast<std::int64_t>(std::floor(std::sqrt(ximax2) / step)) + 1;
        for (std::int64_t k = 0; k < nxi; ++k) {
          const double xi = static_cast<double>(k) * step;
          const double f = eval_full({a1, a2, b, xi});
          ++row.evals;
          if (better(f, a2, b, xi, row)) {
            row.f = f;
            row.a2 = a2;
            row.b = b;
            row.xi = xi;
          }
        }
        if (a2 >= b) break;
      }
    }
    rows[static_cast<std::size_t>(i)] = row;
  }

  double best_f = kInf;
  FullParams best{};
  std::uint64_t evals = 0;
  bool found = false;
  for (std::int64_t i = 0; i < n; ++i) {
    const RowBest& row = rows[static_cast<std::size_t>(i)];
    evals += row.evals;
    if (row.f < best_f) {
      best_f = row.f;
      best = {grid(i), row.a2, row.b, row.xi};
      found = true;
    }
  }
  if (!found) throw ParamError("full_search: empty feasible grid");

  const Hermitian2 ma{best.a1, best.a2, Complex(best.xi, 0.0)};
  const Hermitian2 mb = Hermitian2::diagonal(1.0, best.b);
  return make_optimum(best, ma, mb, best_f, evals);
}

}  // namespace qwit
