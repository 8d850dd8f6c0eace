#include "qwit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "qwit/triple_io.hpp"

namespace qwit {

namespace {

using json = nlohmann::ordered_json;

// Reports quantize every number through %.12g before emission, so repeated
// runs are byte-identical and values carry 12 significant digits.
double quant12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json ordering_json(const OrderingReport& r) {
  json j = json::object();
  j["eig_A_min"] = quant12(r.eig_A_min);
  j["eig_BminusA_min"] = quant12(r.eig_BminusA_min);
  j["eig_IminusB_min"] = quant12(r.eig_IminusB_min);
  j["ordered"] = r.ordered;
  j["tol"] = quant12(r.tol);
  return j;
}

json violation_json(const ViolationReport& r) {
  json j = json::object();
  j["first_gap"] = quant12(r.first_gap);
  j["second_gap"] = quant12(r.second_gap);
  j["min_eig_B2A2"] = quant12(r.min_eig_B2A2);
  j["witnessed"] = r.witnessed;
  return j;
}

json moments_json(const MomentEstimate& m) {
  json j = json::object();
  j["mean"] = quant12(m.mean);
  j["mean_sq"] = quant12(m.mean_sq);
  j["se_mean"] = quant12(m.se_mean);
  j["se_mean_sq"] = quant12(m.se_mean_sq);
  j["n"] = m.n;
  return j;
}

json verdict_json(const Verdict& v, const ExperimentPlan& plan) {
  json j = json::object();
  j["stage1_pass"] = v.stage1_pass;
  j["stage2_violation"] = v.stage2_violation;
  j["z_score"] = quant12(v.z_score);
  j["significance"] = quant12(plan.significance);
  j["shots_per_observable"] = plan.shots_per_observable;
  j["seed"] = plan.seed;
  j["best_state"] = state_to_json(v.best_state);
  json rows = json::array();
  for (const StateResult& r : v.details) {
    json row = json::object();
    row["state_index"] = r.state_index;
    row["A"] = moments_json(r.a);
    row["B"] = moments_json(r.b);
    row["first_gap"] = quant12(r.first_gap);
    row["first_gap_se"] = quant12(r.first_gap_se);
    row["second_gap"] = quant12(r.second_gap);
    row["second_gap_se"] = quant12(r.second_gap_se);
    row["z_order"] = quant12(r.z_order);
    row["z_violation"] = quant12(r.z_violation);
    rows.push_back(std::move(row));
  }
  j["details"] = std::move(rows);
  return j;
}

json setup_json(const PolarizationSetup& s) {
  json j = json::object();
  j["basis_rotation_deg"] = quant12(s.basis_rotation_deg);
  j["state_angle_deg"] = quant12(s.state_angle_deg);
  j["outcome_values_B"] = {quant12(s.outcome_values_B[0]), quant12(s.outcome_values_B[1])};
  j["outcome_values_A"] = {quant12(s.outcome_values_A[0]), quant12(s.outcome_values_A[1])};
  j["frame_rotation_deg"] = quant12(s.frame_rotation_deg);
  j["warning"] = s.warning;
  return j;
}

// Writes `text` to --out or standard output; open/write failures are IO
// errors (status 3).
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw ParseError("cannot open output path " + cfg.out_path);
  f << text;
  if (!f) throw ParseError("failed writing to " + cfg.out_path);
}

TripleDocument load_input(const RunConfig& cfg) {
  if (cfg.triple_path.empty()) throw ParamError("a triple document path is required");
  return load_triple_document(cfg.triple_path);
}

std::vector<QubitState> probes_for(const RunConfig& cfg, const TripleDocument& doc) {
  std::vector<QubitState> probes{doc.triple.state};
  for (QubitState& s : fibonacci_probe_states(cfg.probe_grid)) probes.push_back(std::move(s));
  return probes;
}

template <typename F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParamError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PureStateRequiredError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NoThresholdError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NormalizationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

std::vector<QubitState> fibonacci_probe_states(int n) {
  std::vector<QubitState> out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phase = golden_angle * static_cast<double>(i);
    out.push_back(QubitState::pure(std::cos(0.5 * theta),
                                   std::polar(std::sin(0.5 * theta), phase)));
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const TripleDocument doc = load_input(cfg);
        const OrderingReport ord = check_ordering(doc.triple, cfg.ordering_tol);
        const ViolationReport vio = violation_report(doc.triple);
        json j = json::object();
        j["ordering"] = ordering_json(ord);
        j["violation"] = violation_json(vio);
        emit(cfg, out, j.dump(2) + "\n");
        if (!ord.ordered) {
          err << "triple is not ordered (some minimum eigenvalue < -tol)\n";
          return kExitValidation;
        }
        return kExitOk;
      },
      err);
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 0.1)) {
          throw ParamError("optimize: --grid must lie in (0, 0.1]");
        }
        if (!(cfg.tolerance > 0.0)) throw ParamError("optimize: --tol must be positive");

        const Optimum coarse = grid_search(cfg.grid_step, cfg.exec);
        const Optimum best =
            refine_local({coarse.params.a1, coarse.params.a2}, cfg.tolerance);

        json meta = json::object();
        json opt = json::object();
        opt["grid_step"] = quant12(cfg.grid_step);
        opt["tol"] = quant12(cfg.tolerance);
        opt["evaluations"] = coarse.evaluations + best.evaluations;
        opt["objective"] = quant12(best.objective);
        opt["params"] = {{"a1", quant12(best.params.a1)},
                         {"a2", quant12(best.params.a2)},
                         {"b", quant12(best.params.b)},
                         {"xi", quant12(best.params.xi)}};
        opt["slacks"] = {quant12(best.constraint_slacks[0]), quant12(best.constraint_slacks[1])};
        meta["optimizer"] = std::move(opt);

        if (cfg.run_full) {
          const Optimum full = full_search(cfg.full_step, cfg.exec);
          json fj = json::object();
          fj["step"] = quant12(cfg.full_step);
          fj["objective"] = quant12(full.objective);
          fj["params"] = {{"a1", quant12(full.params.a1)},
                          {"a2", quant12(full.params.a2)},
                          {"b", quant12(full.params.b)},
                          {"xi", quant12(full.params.xi)}};
          fj["slacks"] = {quant12(full.constraint_slacks[0]),
                          quant12(full.constraint_slacks[1])};
          fj["evaluations"] = full.evaluations;
          meta["full_search"] = std::move(fj);
          err << "full_search objective = " << fmt12(full.objective) << ", slacks = ["
              << fmt12(full.constraint_slacks[0]) << ", " << fmt12(full.constraint_slacks[1])
              << "]\n";
        }

        TripleDocument doc;
        doc.triple = best.triple;
        doc.metadata = std::move(meta);
        emit(cfg, out, serialize_triple_document(doc));
        err << "objective = " << fmt12(best.objective) << "\n";
        return kExitOk;
      },
      err);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const TripleDocument doc = load_input(cfg);
        if (cfg.shots < 1) throw ParamError("simulate: --shots must be at least 1");
        ExperimentPlan plan{doc.triple,       probes_for(cfg, doc), cfg.shots,
                            NoiseModel::parse(cfg.noise_spec),      cfg.seed,
                            cfg.significance, cfg.exact};
        const Verdict v = run_protocol(plan, cfg.exec);
        emit(cfg, out, verdict_json(v, plan).dump(2) + "\n");
        return v.stage2_violation ? kExitOk : kExitNoViolation;
      },
      err);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const TripleDocument doc = load_input(cfg);
        if (cfg.shots < 1) throw ParamError("sweep: --shots must be at least 1");
        ExperimentPlan plan{doc.triple,       probes_for(cfg, doc), cfg.shots,
                            NoiseModel::none(),                     cfg.seed,
                            cfg.significance, cfg.exact};
        const SweepTable table =
            sweep(plan, cfg.sweep_from, cfg.sweep_to, cfg.sweep_steps, cfg.exec);
        std::ostringstream csv;
        write_sweep_csv(csv, table);
        emit(cfg, out, csv.str());
        const double pstar = estimate_zero_crossing(table);
        if (std::isfinite(pstar)) {
          err << "p_star = " << fmt12(pstar) << "\n";
          return kExitOk;
        }
        err << "p_star = none (no positive-slope zero crossing in the fitted gap)\n";
        return kExitNoViolation;
      },
      err);
}

int cmd_angles(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const TripleDocument doc = load_input(cfg);
        const OrderingReport ord = check_ordering(doc.triple, cfg.ordering_tol);
        if (!ord.ordered) {
          err << "error: triple is not ordered; polarizer settings are undefined\n";
          return kExitValidation;
        }
        const PolarizationSetup s = photon_angles(doc.triple);
        emit(cfg, out, setup_json(s).dump(2) + "\n");
        if (!s.warning.empty()) err << "warning: " << s.warning << "\n";
        return kExitOk;
      },
      err);
}

int run_cli(int argc, char** argv) {
  RunConfig cfg;
  bool serial = false;

  CLI::App app{"quantumness-witness toolkit: ordered observable pairs whose second moments "
               "certify that no classical model fits"};
  app.require_subcommand(1);

  const auto add_triple = [&cfg](CLI::App* sub) {
    sub->add_option("triple,--triple", cfg.triple_path, "path to a triple document (JSON)")
        ->required();
  };
  const auto add_out = [&cfg, &serial](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "write machine output to this path instead of stdout");
    sub->add_flag("--serial", serial, "single-threaded scans and sampling");
  };

  CLI::App* verify = app.add_subcommand("verify", "check ordering and report the moment gaps");
  add_triple(verify);
  add_out(verify);
  verify->add_option("--tol", cfg.ordering_tol, "PSD tolerance")->capture_default_str();

  CLI::App* optimize =
      app.add_subcommand("optimize", "search for the maximally violating triple");
  add_out(optimize);
  optimize->add_option("--grid", cfg.grid_step, "coarse scan step")->capture_default_str();
  optimize->add_option("--tol", cfg.tolerance, "refinement convergence tolerance")
      ->capture_default_str();
  optimize->add_flag("--full", cfg.run_full,
                     "also scan all four parameters to check constraint activity");
  optimize->add_option("--full-step", cfg.full_step, "step for the four-parameter scan")
      ->capture_default_str();

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the two-stage statistical test on sampled shots");
  add_triple(simulate);
  add_out(simulate);
  simulate->add_option("--shots", cfg.shots, "shots per observable")->capture_default_str();
  simulate->add_option("--seed", cfg.seed, "RNG seed (required for reproducibility)")
      ->required();
  simulate->add_option("--noise", cfg.noise_spec,
                       "none | depolarizing:P | jitter:SIGMA_DEG[:BATCHES]")
      ->capture_default_str();
  simulate->add_option("--z", cfg.significance, "significance threshold")->capture_default_str();
  simulate->add_option("--probes", cfg.probe_grid,
                       "extra probe states on the pure-state sphere")
      ->capture_default_str();
  simulate->add_flag("--exact", cfg.exact, "replace sampling with exact expectations");

  CLI::App* sweepc =
      app.add_subcommand("sweep", "scan the depolarizing level and emit a CSV table");
  add_triple(sweepc);
  add_out(sweepc);
  sweepc->add_option("--from", cfg.sweep_from, "lowest depolarizing p")->capture_default_str();
  sweepc->add_option("--to", cfg.sweep_to, "highest depolarizing p")->capture_default_str();
  sweepc->add_option("--steps", cfg.sweep_steps, "number of grid points")->capture_default_str();
  sweepc->add_option("--shots", cfg.shots, "shots per observable per point")
      ->capture_default_str();
  sweepc->add_option("--seed", cfg.seed, "RNG seed")->required();
  sweepc->add_option("--z", cfg.significance, "significance threshold")->capture_default_str();
  int sweep_probes = 0;
  sweepc->add_option("--probes", sweep_probes, "extra probe states per point")
      ->capture_default_str();

  CLI::App* angles =
      app.add_subcommand("angles", "translate a triple into polarizer settings");
  add_triple(angles);
  add_out(angles);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.exec = serial ? Execution::serial : Execution::parallel;
  if (app.got_subcommand(verify)) return cmd_verify(cfg, std::cout, std::cerr);
  if (app.got_subcommand(optimize)) return cmd_optimize(cfg, std::cout, std::cerr);
  if (app.got_subcommand(simulate)) return cmd_simulate(cfg, std::cout, std::cerr);
  if (app.got_subcommand(sweepc)) {
    cfg.probe_grid = sweep_probes;
    return cmd_sweep(cfg, std::cout, std::cerr);
  }
  if (app.got_subcommand(angles)) return cmd_angles(cfg, std::cout, std::cerr);
  return kExitUsage;
}

}  // namespace qwit
