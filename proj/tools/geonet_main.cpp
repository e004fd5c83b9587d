#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "geonet/errors.hpp"
#include "geonet/runner.hpp"
#include "geonet/scenario.hpp"
#include "geonet/verify.hpp"
#include "geonet/version.hpp"

namespace {

bool log_enabled() {
  const char* v = std::getenv("GEONET_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << geonet::kToolName << ": " << msg << "\n";
}

// Writes to --out when given, else stdout. Returns false on I/O failure.
bool deliver(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file: " << out_path << "\n";
    return false;
  }
  f << payload;
  f.close();
  if (!f) {
    std::cerr << "error: failed writing output file: " << out_path << "\n";
    return false;
  }
  return true;
}

std::optional<geonet::MethodChoice> parse_method(const std::string& m) {
  if (m.empty()) return std::nullopt;
  if (m == "sweep") return geonet::MethodChoice::sweep;
  if (m == "descent") return geonet::MethodChoice::descent;
  return geonet::MethodChoice::both;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace geonet;

  CLI::App app{"balanced geodesic-triangle vertex solver"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  std::string scenario_path, method_str, out_path, format = "json", filter, scen_dir;
  bool override_flag = false, timing = false;
  std::optional<std::uint64_t> seed_opt;
  std::uint64_t verify_seed = 1;
  std::optional<int> trace_n;
  double x_param = 0.5;

  auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a scenario and emit its result record");
  add_scenario(solve);
  solve->add_option("--method", method_str, "solver selection (overrides the scenario)")
      ->check(CLI::IsMember({"sweep", "descent", "both"}));
  solve->add_option("--out", out_path, "write output here instead of stdout");
  solve->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  solve->add_flag("--override-preconditions", override_flag,
                  "attempt the solve even if screening fails (result marked advisory)");
  solve->add_option("--seed", seed_opt, "seed override for randomized sampling");
  solve->add_flag("--timing", timing, "include wall-clock fields (breaks byte determinism)");

  CLI::App* trace = app.add_subcommand("trace", "emit the sweep trace across the base side");
  add_scenario(trace);
  trace->add_option("--n", trace_n, "number of trace records (overrides the scenario)")
      ->check(CLI::Range(2, 100000));
  trace->add_option("--out", out_path, "write output here instead of stdout");
  trace->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* profile =
      app.add_subcommand("profile", "emit the subtended-angle profile along one fan geodesic");
  add_scenario(profile);
  profile->add_option("--n", trace_n, "number of samples (overrides the scenario)")
      ->check(CLI::Range(3, 100000));
  profile->add_option("--x", x_param, "fan parameter in (0,1) selecting the geodesic")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  profile->add_option("--out", out_path, "write output here instead of stdout");
  profile->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* verify = app.add_subcommand("verify", "run the built-in property suites");
  verify->add_option("--filter", filter, "run only suites whose name contains this substring");
  verify->add_option("--seed", verify_seed, "seed for the randomized batteries");
  verify->add_option("--scenarios", scen_dir, "also check every scenario JSON in this directory")
      ->check(CLI::ExistingDirectory);
  verify->add_option("--out", out_path, "write the summary here instead of stdout");

  CLI::App* surfaces = app.add_subcommand("surfaces", "list the supported surface kinds");
  surfaces->add_option("--out", out_path, "write the listing here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : exit_input_error;
  }

  try {
    if (solve->parsed()) {
      if (format == "csv") {
        std::cerr << "error: solve emits JSON records only\n";
        return exit_input_error;
      }
      log_line("solve " + scenario_path);
      Scenario sc = load_scenario(scenario_path);
      RunOptions opts;
      opts.method = parse_method(method_str);
      opts.override_preconditions = override_flag;
      opts.seed = seed_opt;
      opts.timing = timing;
      RunOutcome ro = run_scenario(sc, opts);
      if (!deliver(ro.record, out_path)) return exit_input_error;
      return ro.exit_code;
    }
    if (trace->parsed() || profile->parsed()) {
      log_line((trace->parsed() ? "trace " : "profile ") + scenario_path);
      Scenario sc = load_scenario(scenario_path);
      TraceOptions topt;
      topt.n = trace_n;
      topt.x_param = x_param;
      topt.csv = format == "csv";
      RunOutcome ro = trace->parsed() ? emit_trace(sc, topt) : emit_profile(sc, topt);
      if (!deliver(ro.record, out_path)) return exit_input_error;
      return ro.exit_code;
    }
    if (verify->parsed()) {
      log_line("verify seed=" + std::to_string(verify_seed));
      std::vector<SuiteResult> suites = run_verify_suites(filter, verify_seed);
      std::vector<ScenarioCheck> checks;
      if (!scen_dir.empty()) checks = run_scenario_checks(scen_dir);
      if (!deliver(verify_summary(verify_seed, suites, checks), out_path))
        return exit_input_error;
      return verify_failed(suites, checks) ? 1 : 0;
    }
    if (surfaces->parsed()) {
      if (!deliver(surface_catalog(), out_path)) return exit_input_error;
      return 0;
    }
  } catch (const GeonetError& e) {
    std::cerr << "error: " << e.what() << " [" << error_code_name(e.code()) << "]\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}
