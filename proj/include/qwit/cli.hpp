#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qwit/simulator.hpp"

namespace qwit {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;          // success / violation witnessed
inline constexpr int kExitNoViolation = 1; // completed without a violation
inline constexpr int kExitValidation = 2;  // input failed a domain check
inline constexpr int kExitUsage = 3;       // bad flags, parse or IO failure

struct RunConfig {
  std::string subcommand;
  std::string triple_path;
  std::string out_path;  // empty = standard output

  std::uint64_t seed = 0;
  std::uint64_t shots = 100000;
  std::string noise_spec = "none";
  double grid_step = 1e-3;
  double tolerance = 1e-8;      // refine_local convergence (optimize)
  double ordering_tol = 1e-9;   // PSD tolerance (verify / angles)
  double significance = 5.0;
  double sweep_from = 0.0;
  double sweep_to = 0.4;
  int sweep_steps = 81;
  int probe_grid = 102;  // extra probe states on the pure-state sphere
  bool run_full = false;
  double full_step = 0.02;
  bool exact = false;
  Execution exec = Execution::parallel;
};

/// Evenly distributed pure states on the Bloch sphere (golden-angle
/// spiral); deterministic in n.
std::vector<QubitState> fibonacci_probe_states(int n);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_angles(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses flags and dispatches; all diagnostics go to stderr, machine
/// output to stdout or --out.
int run_cli(int argc, char** argv);

}  // namespace qwit
