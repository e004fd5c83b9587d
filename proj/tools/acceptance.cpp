// Acceptance gate: one pass/fail line per shipping criterion, nonzero exit on
// any failure. Usage: acceptance <geonet-binary> <scenario-dir>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "geonet/types.hpp"
#include "geonet/verify.hpp"
#include "json.hpp"

namespace {

int g_failures = 0;

void report(int n, bool ok, const std::string& label, const std::string& why = "") {
  std::printf("criterion %2d: %s — %s%s%s\n", n, ok ? "PASS" : "FAIL", label.c_str(),
              why.empty() ? "" : ": ", why.c_str());
  if (!ok) ++g_failures;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Runs a command line, returns its exit code (-1 if it did not exit normally).
int run(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <geonet-binary> <scenario-dir>\n");
    return 2;
  }
  const std::string bin = argv[1];
  const std::string scen_dir = argv[2];
  const std::filesystem::path tmp = std::filesystem::temp_directory_path();

  // One shared pass over the built-in property suites (seed 1) feeds every
  // in-process criterion; the remaining criteria drive the shipped binary.
  std::vector<geonet::SuiteResult> suites = geonet::run_verify_suites("", 1);
  auto suite = [&](const char* name) -> const geonet::SuiteResult* {
    for (const auto& s : suites)
      if (s.name == name) return &s;
    return nullptr;
  };
  auto suite_why = [&](std::initializer_list<const char*> names) {
    for (const char* name : names) {
      const geonet::SuiteResult* s = suite(name);
      if (!s) return std::string(name) + ": suite missing";
      if (s->failures > 0) return s->name + ": " + s->details.front();
    }
    return std::string();
  };
  auto suites_ok = [&](std::initializer_list<const char*> names) {
    for (const char* name : names) {
      const geonet::SuiteResult* s = suite(name);
      if (!s || s->failures > 0) return false;
    }
    return true;
  };

  report(1, suites_ok({"jacobi-sphere"}),
         "unit-sphere field matches sin(t) to 1e-7 and its quarter-period slope is 1",
         suite_why({"jacobi-sphere"}));
  report(2, suites_ok({"monotone-window"}),
         "growth window holds at t_max 1.55 and breaks at 1.60", suite_why({"monotone-window"}));
  report(3, suites_ok({"gauss-bonnet"}),
         "angle excess matches the curvature integral (octant at 256 within 1e-4, plane within "
         "1e-10)",
         suite_why({"gauss-bonnet"}));
  report(4, suites_ok({"existence-plane"}),
         "100 planar triangles: both solvers match the geometric-median reference to 1e-6",
         suite_why({"existence-plane"}));

  // Criterion 5: the over-threshold equilateral solved under override.
  {
    const std::string out = (tmp / "acceptance-ex2.json").string();
    int rc = run("'" + bin + "' solve --scenario '" + scen_dir +
                 "/sphere-example-2.json' --override-preconditions --out '" + out +
                 "' 2>/dev/null");
    bool ok = rc == 0;
    std::string why = ok ? "" : "exit code " + std::to_string(rc);
    if (ok) {
      try {
        nlohmann::json r = nlohmann::json::parse(slurp(out));
        const auto& d = r.at("results").at("descent");
        ok = d.at("converged").get<bool>();
        double worst = 0.0;
        for (double a : d.at("angles").get<std::vector<double>>())
          worst = std::max(worst, std::abs(a - geonet::kBalancedAngle));
        ok = ok && worst <= 1e-6;
        bool screening_fails = r.at("preconditions").at("verdict") == "fail" &&
                               r.at("advisory").get<bool>();
        for (bool a : r.at("preconditions").at("angle_ok").get<std::vector<bool>>())
          screening_fails = screening_fails && !a;
        ok = ok && screening_fails;
        if (!ok)
          why = "worst angle residual " + std::to_string(worst) + ", verdict " +
                r.at("preconditions").at("verdict").get<std::string>();
      } catch (const std::exception& e) {
        ok = false;
        why = e.what();
      }
    }
    report(5, ok,
           "override on the equator-spanning equilateral lands the pole with 2pi/3 angles while "
           "screening still fails",
           why);
  }

  // Criterion 6: antipodal base pair refuses with the ambiguity error.
  {
    const std::string out = (tmp / "acceptance-ex1.json").string();
    int rc = run("'" + bin + "' solve --scenario '" + scen_dir +
                 "/sphere-example-1.json' --out '" + out + "' 2>/dev/null");
    std::string record = slurp(out);
    bool ok = rc == 2 && record.find("non_unique") != std::string::npos;
    report(6, ok, "antipodal base pair reports an ambiguous connection and exits with the "
                  "refusal code",
           ok ? "" : "exit code " + std::to_string(rc));
  }

  report(7, suites_ok({"existence-hyperbolic", "existence-sphere", "existence-ellipsoid"}),
         "existence batteries converge 50/50 on hyperbolic disk, sphere, and ellipsoid",
         suite_why({"existence-hyperbolic", "existence-sphere", "existence-ellipsoid"}));
  report(8, suites_ok({"jacobi-comparison"}),
         "ellipsoid squared-norm slope dominates the constant-curvature comparison at every "
         "node",
         suite_why({"jacobi-comparison"}));
  report(9, suites_ok({"index-lemma"}),
         "piecewise-linear comparison fields never undercut the minimizing field's energy",
         suite_why({"index-lemma"}));
  report(10, suites_ok({"gradient-check"}),
         "finite-difference gradient equals minus the dual tangent sum to 1e-4 relative",
         suite_why({"gradient-check"}));

  // Criterion 11: the shipped binary's verify output is byte-stable.
  {
    const std::string out1 = (tmp / "acceptance-verify-1.txt").string();
    const std::string out2 = (tmp / "acceptance-verify-2.txt").string();
    const std::string cmd = "'" + bin + "' verify --seed 1 --scenarios '" + scen_dir + "'";
    int rc1 = run(cmd + " --out '" + out1 + "' 2>/dev/null");
    int rc2 = run(cmd + " --out '" + out2 + "' 2>/dev/null");
    std::string v1 = slurp(out1), v2 = slurp(out2);
    bool ok = rc1 == 0 && rc2 == 0 && !v1.empty() && v1 == v2;
    report(11, ok, "repeated verify runs with a fixed seed are byte-identical",
           ok ? "" : "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2));
  }

  std::printf("acceptance: %d/11 criteria passed\n", 11 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
