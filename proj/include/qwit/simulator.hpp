#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qwit/optimizer.hpp"
#include "qwit/witness.hpp"

namespace qwit {

/// Noise applied to prepared states before measurement.
struct NoiseModel {
  enum class Kind { none, depolarizing, state_angle_jitter };

  Kind kind = Kind::none;
  double p = 0.0;          // depolarizing mixing weight
  double sigma_deg = 0.0;  // jitter standard deviation
  int jitter_batches = 1;  // preparation batches per record, one angle draw each

  static NoiseModel none() { return {}; }
  static NoiseModel depolarizing(double p);
  static NoiseModel state_angle_jitter(double sigma_deg, int batches = 1);

  /// Accepts "none", "depolarizing:P", "jitter:SIGMA_DEG" or
  /// "jitter:SIGMA_DEG:BATCHES". Anything else throws ParamError.
  static NoiseModel parse(const std::string& text);
};

struct BornOutcome {
  double value = 0.0;
  double prob = 0.0;
};

/// Result of repeated projective measurement of one observable: one
/// eigenvalue per shot.
struct ShotRecord {
  std::string observable_label;
  std::vector<double> outcomes;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

/// First and second sample moments of a record; the second moment comes
/// from the same shots (squared outcomes), and each standard error is the
/// sample standard deviation over sqrt(n).
struct MomentEstimate {
  double mean = 0.0;
  double mean_sq = 0.0;
  double se_mean = 0.0;
  double se_mean_sq = 0.0;
  std::uint64_t n = 0;
};

/// Per-probe-state measurement summary inside a Verdict.
struct StateResult {
  std::size_t state_index = 0;
  MomentEstimate a;
  MomentEstimate b;
  double first_gap = 0.0;   // <B> - <A>
  double first_gap_se = 0.0;
  double second_gap = 0.0;  // <B^2> - <A^2>
  double second_gap_se = 0.0;
  double z_order = 0.0;      // evidence that <A> > <B> (stage-1 failure)
  double z_violation = 0.0;  // evidence that the second gap is negative
};

/// Outcome of the two-stage protocol. Stage 1 passes when no probe state
/// shows <A> > <B> at the significance threshold; stage 2 reports a
/// violation when the most negative estimated second gap clears the same
/// threshold.
struct Verdict {
  bool stage1_pass = false;
  bool stage2_violation = false;
  double z_score = 0.0;  // z_violation of the best state
  QubitState best_state = QubitState::mixed(Density2::maximally_mixed());
  std::vector<StateResult> details;
};

struct ExperimentPlan {
  WitnessTriple triple;
  std::vector<QubitState> probe_states;
  std::uint64_t shots_per_observable = 0;
  NoiseModel noise;
  std::uint64_t seed = 0;
  double significance = 5.0;
  // Replace sampling with exact expectations (se = 0, z = +-inf). Jitter
  // noise is statistical and has no exact counterpart; it is skipped here.
  bool exact = false;
};

/// Outcome distribution of measuring obs on s, values ascending; the
/// probabilities are the Born weights of the eigenvectors.
std::vector<BornOutcome> born_probabilities(const Observable& obs, const QubitState& s);

/// n independent Born draws. The outcome stream splits into fixed 2^16-shot
/// batches whose generators are seeded by a hash of (seed, batch index), so
/// results are identical for any worker count and reproducible per seed.
ShotRecord sample_shots(const Observable& obs, const QubitState& s, std::uint64_t n,
                        std::uint64_t seed, Execution exec = Execution::parallel);

/// Sample moments with standard errors; n < 2 throws ParamError.
MomentEstimate estimate_moments(const ShotRecord& r);

Verdict run_protocol(const ExperimentPlan& plan, Execution exec = Execution::parallel);

/// Exact depolarizing threshold: the second-moment gap is affine in p, so
/// it crosses zero at p* = g0 / (g0 - Tr(B^2-A^2)/2); the result is clamped
/// to [0,1]. Non-witnessing triples throw NoThresholdError.
double noise_threshold(const WitnessTriple& t, const NoiseModel& family);

struct SweepRow {
  double p = 0.0;
  double first_gap = 0.0;
  double first_gap_se = 0.0;
  double second_gap = 0.0;
  double second_gap_se = 0.0;
  double z = 0.0;
  bool stage1_pass = false;
  bool stage2_violation = false;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Runs the protocol at `steps` evenly spaced depolarizing levels in
/// [from, to], ascending, with per-row seeds derived from (plan.seed, row).
SweepTable sweep(const ExperimentPlan& plan, double from, double to, int steps,
                 Execution exec = Execution::parallel);

/// Writes `table` with the fixed header
/// p,first_gap,first_gap_se,second_gap,second_gap_se,z,stage1_pass,stage2_violation
void write_sweep_csv(std::ostream& os, const SweepTable& table);

/// Least-squares zero crossing of second_gap(p); NaN when the fitted slope
/// is not positive.
double estimate_zero_crossing(const SweepTable& table);

}  // namespace qwit
