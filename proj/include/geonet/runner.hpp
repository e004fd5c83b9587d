#pragma once

#include <optional>
#include <string>

#include "geonet/errors.hpp"
#include "geonet/scenario.hpp"

namespace geonet {

// Process exit codes shared by every subcommand.
//   0 solved (all requested methods converged)
//   1 input error (file, schema, surface construction)
//   2 geometric refusal (failed screening without override, degenerate or
//     ambiguous configuration)
//   3 solver non-convergence
enum ExitCode : int {
  exit_ok = 0,
  exit_input_error = 1,
  exit_refused = 2,
  exit_no_convergence = 3,
};

struct RunOptions {
  std::optional<MethodChoice> method;        // overrides the scenario's choice
  bool override_preconditions = false;       // ORed with the scenario flag
  std::optional<std::uint64_t> seed;         // overrides the scenario's seed
  bool timing = false;                       // adds wall-clock fields (breaks byte determinism)
};

struct RunOutcome {
  int exit_code = exit_input_error;
  std::string record;  // ResultRecord serialized as JSON (one trailing newline)
};

// Solve a loaded scenario and assemble its ResultRecord.
RunOutcome run_scenario(const Scenario& sc, const RunOptions& opts);

// Classify a thrown error the way run_scenario does.
int exit_code_for(ErrorCode c);

struct TraceOptions {
  std::optional<int> n;       // overrides sampling.trace_n
  double x_param = 0.5;       // profile only
  bool csv = false;           // false: JSON
};

// Serialized fan trace (the solve path curve) for a scenario.
RunOutcome emit_trace(const Scenario& sc, const TraceOptions& opts);

// Serialized subtended-angle profile along one fan geodesic.
RunOutcome emit_profile(const Scenario& sc, const TraceOptions& opts);

// Deterministic listing of the supported surface kinds.
std::string surface_catalog();

}  // namespace geonet
