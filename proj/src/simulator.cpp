#include "qwit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace qwit {

namespace {

constexpr std::uint64_t kBatchShots = 1 << 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Documented stream split: every independent stream is keyed by the user
// seed and up to three role/index words, chained through splitmix64.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// z = num / den with sign-preserving limits when den collapses to zero.
double guarded_z(double num, double den) {
  if (den > 0.0) return num / den;
  if (num > 0.0) return kInf;
  if (num < 0.0) return -kInf;
  return 0.0;
}

double rss(double x, double y) { return std::sqrt(x * x + y * y); }

// Real rotation by `angle_rad` applied to a state (unitary conjugation for
// densities).
QubitState rotate_state(const QubitState& s, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double sn = std::sin(angle_rad);
  if (s.is_pure()) {
    const Complex a = s.alpha();
    const Complex b = s.beta();
    return QubitState::pure(c * a - sn * b, sn * a + c * b);
  }
  const Hermitian2& r = s.rho().matrix();
  const double r11 = c * c * r.a11 + sn * sn * r.a22 - 2.0 * c * sn * std::real(r.a12);
  const double r22 = sn * sn * r.a11 + c * c * r.a22 + 2.0 * c * sn * std::real(r.a12);
  const Complex r12 = c * sn * (r.a11 - r.a22) + c * c * r.a12 - sn * sn * std::conj(r.a12);
  return QubitState::mixed(Density2::from({r11, r22, r12}));
}

MomentEstimate exact_moments(const Observable& obs, const QubitState& s) {
  MomentEstimate m;
  m.mean = expectation(obs.m, s);
  m.mean_sq = expectation(square(obs.m), s);
  m.se_mean = 0.0;
  m.se_mean_sq = 0.0;
  m.n = 0;
  return m;
}

void fill_batch(std::vector<double>& out, std::uint64_t begin, std::uint64_t end,
                std::uint64_t batch_seed, double p_hi, double lo, double hi) {
  std::mt19937_64 gen(batch_seed);
  for (std::uint64_t t = begin; t < end; ++t) {
    out[t] = uniform01(gen) < p_hi ? hi : lo;
  }
}

}  // namespace

NoiseModel NoiseModel::depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParamError("noise: depolarizing p must lie in [0,1]");
  NoiseModel m;
  m.kind = Kind::depolarizing;
  m.p = p;
  return m;
}

NoiseModel NoiseModel::state_angle_jitter(double sigma_deg, int batches) {
  if (!(sigma_deg >= 0.0) || !std::isfinite(sigma_deg)) {
    throw ParamError("noise: jitter sigma must be nonnegative");
  }
  if (batches < 1) throw ParamError("noise: jitter needs at least one batch");
  NoiseModel m;
  m.kind = Kind::state_angle_jitter;
  m.sigma_deg = sigma_deg;
  m.jitter_batches = batches;
  return m;
}

NoiseModel NoiseModel::parse(const std::string& text) {
  if (text == "none" || text.empty()) return none();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  try {
    if (head == "depolarizing") {
      std::size_t used = 0;
      const double p = std::stod(rest, &used);
      if (used != rest.size()) throw ParamError("noise: trailing characters");
      return depolarizing(p);
    }
    if (head == "jitter" || head == "state_angle_jitter") {
      const auto colon2 = rest.find(':');
      int batches = 1;
      std::string sig = rest;
      if (colon2 != std::string::npos) {
        sig = rest.substr(0, colon2);
        const std::string bt = rest.substr(colon2 + 1);
        std::size_t used = 0;
        batches = std::stoi(bt, &used);
        if (used != bt.size()) throw ParamError("noise: trailing characters");
      }
      std::size_t used = 0;
      const double sigma = std::stod(sig, &used);
      if (used != sig.size()) throw ParamError("noise: trailing characters");
      return state_angle_jitter(sigma, batches);
    }
  } catch (const std::logic_error&) {
    throw ParamError("noise: malformed spec '" + text + "'");
  }
  throw ParamError("noise: unknown model '" + text + "'");
}

std::vector<BornOutcome> born_probabilities(const Observable& obs, const QubitState& s) {
  const EigenPair2 e = eig_herm2(obs.m);
  const Hermitian2 rho = s.to_density().matrix();
  const auto weight = [&rho](const Vec2& v) {
    return std::real(dot(v, apply(rho, v)));
  };
  return {{e.lo, weight(e.vec_lo)}, {e.hi, weight(e.vec_hi)}};
}

ShotRecord sample_shots(const Observable& obs, const QubitState& s, std::uint64_t n,
                        std::uint64_t seed, Execution exec) {
  if (n == 0) throw ParamError("sample_shots: need at least one shot");
  const auto born = born_probabilities(obs, s);
  const double lo = born[0].value;
  const double hi = born[1].value;
  const double p_hi = born[1].prob;

  std::vector<double> outcomes(n);
  const std::int64_t batches = static_cast<std::int64_t>((n + kBatchShots - 1) / kBatchShots);
  const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t bidx = 0; bidx < batches; ++bidx) {
    const std::uint64_t begin = static_cast<std::uint64_t>(bidx) * kBatchShots;
    const std::uint64_t end = std::min(n, begin + kBatchShots);
    fill_batch(outcomes, begin, end, stream_seed(seed, static_cast<std::uint64_t>(bidx)),
               p_hi, lo, hi);
  }
  return {obs.label, std::move(outcomes), n, seed};
}

MomentEstimate estimate_moments(const ShotRecord& r) {
  const std::uint64_t n = r.outcomes.size();
  if (n < 2) throw ParamError("estimate_moments: need at least two shots");
  const double dn = static_cast<double>(n);

  double sum = 0.0;
  double sum2 = 0.0;
  for (double x : r.outcomes) {
    sum += x;
    sum2 += x * x;
  }
  MomentEstimate m;
  m.n = n;
  m.mean = sum / dn;
  m.mean_sq = sum2 / dn;

  double dev = 0.0;
  double dev2 = 0.0;
  for (double x : r.outcomes) {
    const double d1 = x - m.mean;
    const double d2 = x * x - m.mean_sq;
    dev += d1 * d1;
    dev2 += d2 * d2;
  }
  m.se_mean = std::sqrt(dev / (dn - 1.0)) / std::sqrt(dn);
  m.se_mean_sq = std::sqrt(dev2 / (dn - 1.0)) / std::sqrt(dn);
  return m;
}

namespace {

// One (probe, observable) measurement: applies the noise model, samples
// (jitter draws one preparation angle per batch), and reduces to moments.
MomentEstimate measure(const ExperimentPlan& plan, const QubitState& probe,
                       const Observable& obs, std::size_t probe_index,
                       std::uint64_t obs_tag, Execution exec) {
  QubitState prepared = probe;
  if (plan.noise.kind == NoiseModel::Kind::depolarizing) {
    prepared = QubitState::mixed(depolarize(probe, plan.noise.p));
  }

  if (plan.exact) return exact_moments(obs, prepared);

  if (plan.noise.kind == NoiseModel::Kind::state_angle_jitter && plan.noise.sigma_deg > 0.0) {
    const int nb = plan.noise.jitter_batches;
    ShotRecord all;
    all.observable_label = obs.label;
    all.seed = stream_seed(plan.seed, probe_index, obs_tag);
    all.outcomes.reserve(plan.shots_per_observable);
    std::uint64_t done = 0;
    for (int k = 0; k < nb; ++k) {
      const std::uint64_t quota =
          plan.shots_per_observable * static_cast<std::uint64_t>(k + 1) / nb - done;
      if (quota == 0) continue;
      std::mt19937_64 gen(stream_seed(plan.seed, probe_index, obs_tag, 0x6a69747400ULL + k));
      std::normal_distribution<double> jitter(0.0, plan.noise.sigma_deg);
      const double delta = jitter(gen) * std::numbers::pi / 180.0;
      const ShotRecord part =
          sample_shots(obs, rotate_state(probe, delta), quota,
                       stream_seed(plan.seed, probe_index, obs_tag, k), exec);
      all.outcomes.insert(all.outcomes.end(), part.outcomes.begin(), part.outcomes.end());
      done += quota;
    }
    all.n = all.outcomes.size();
    return estimate_moments(all);
  }

  const ShotRecord rec = sample_shots(obs, prepared, plan.shots_per_observable,
                                      stream_seed(plan.seed, probe_index, obs_tag), exec);
  return estimate_moments(rec);
}

}  // namespace

Verdict run_protocol(const ExperimentPlan& plan, Execution exec) {
  if (plan.probe_states.empty()) throw ParamError("run_protocol: probe state list is empty");
  if (!plan.exact && plan.shots_per_observable < 1) {
    throw ParamError("run_protocol: need at least one shot per observable");
  }
  if (!(plan.significance > 0.0) || !std::isfinite(plan.significance)) {
    throw ParamError("run_protocol: significance must be positive");
  }

  Verdict v;
  v.stage1_pass = true;
  v.details.reserve(plan.probe_states.size());

  std::size_t best = 0;
  for (std::size_t i = 0; i < plan.probe_states.size(); ++i) {
    StateResult row;
    row.state_index = i;
    row.a = measure(plan, plan.probe_states[i], plan.triple.A, i, 0, exec);
    row.b = measure(plan, plan.probe_states[i], plan.triple.B, i, 1, exec);
    row.first_gap = row.b.mean - row.a.mean;
    row.first_gap_se = rss(row.a.se_mean, row.b.se_mean);
    row.second_gap = row.b.mean_sq - row.a.mean_sq;
    row.second_gap_se = rss(row.a.se_mean_sq, row.b.se_mean_sq);
    row.z_order = guarded_z(row.a.mean - row.b.mean, row.first_gap_se);
    row.z_violation = guarded_z(row.a.mean_sq - row.b.mean_sq, row.second_gap_se);
    if (row.z_order > plan.significance) v.stage1_pass = false;
    v.details.push_back(row);
    if (row.second_gap < v.details[best].second_gap) best = i;
  }

  const StateResult& br = v.details[best];
  v.z_score = br.z_violation;
  v.stage2_violation = br.second_gap < 0.0 && br.z_violation >= plan.significance;
  v.best_state = plan.probe_states[best];
  return v;
}

double noise_threshold(const WitnessTriple& t, const NoiseModel& family) {
  if (family.kind != NoiseModel::Kind::depolarizing) {
    throw ParamError("noise_threshold: only the depolarizing family is supported");
  }
  const ViolationReport v = violation_report(t);
  if (!v.witnessed) {
    throw NoThresholdError("noise_threshold: triple shows no violation at zero noise");
  }
  const Hermitian2 gap2 = square(t.B.m) - square(t.A.m);
  const double mixed_gap = 0.5 * gap2.trace();
  const double p = v.second_gap / (v.second_gap - mixed_gap);
  return std::clamp(p, 0.0, 1.0);
}

SweepTable sweep(const ExperimentPlan& plan, double from, double to, int steps,
                 Execution exec) {
  if (!(from >= 0.0 && to <= 1.0 && from <= to)) {
    throw ParamError("sweep: range must satisfy 0 <= from <= to <= 1");
  }
  if (steps < 2) throw ParamError("sweep: need at least two steps");

  SweepTable table;
  table.rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double p = from + (to - from) * static_cast<double>(i) / (steps - 1);
    ExperimentPlan row_plan = plan;
    row_plan.noise = NoiseModel::depolarizing(p);
    row_plan.seed = stream_seed(plan.seed, static_cast<std::uint64_t>(i), 0x73776565ULL);
    const Verdict v = run_protocol(row_plan, exec);
    std::size_t best = 0;
    for (std::size_t j = 1; j < v.details.size(); ++j) {
      if (v.details[j].second_gap < v.details[best].second_gap) best = j;
    }
    const StateResult& r = v.details[best];
    table.rows.push_back({p, r.first_gap, r.first_gap_se, r.second_gap, r.second_gap_se,
                          v.z_score, v.stage1_pass, v.stage2_violation});
  }
  return table;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "p,first_gap,first_gap_se,second_gap,second_gap_se,z,stage1_pass,stage2_violation\n";
  char buf[32];
  const auto num = [&buf](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  for (const SweepRow& r : table.rows) {
    os << num(r.p) << ',' << num(r.first_gap) << ',' << num(r.first_gap_se) << ','
       << num(r.second_gap) << ',' << num(r.second_gap_se) << ',' << num(r.z) << ','
       << (r.stage1_pass ? 1 : 0) << ',' << (r.stage2_violation ? 1 : 0) << '\n';
  }
}

double estimate_zero_crossing(const SweepTable& table) {
  const std::size_t n = table.rows.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const SweepRow& r : table.rows) {
    sx += r.p;
    sy += r.second_gap;
    sxx += r.p * r.p;
    sxy += r.p * r.second_gap;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double slope = (dn * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / dn;
  if (!(slope > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return -intercept / slope;
}

}  // namespace qwit
