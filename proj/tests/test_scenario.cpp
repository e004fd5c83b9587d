#include <cmath>
#include <string>

#include "doctest.h"
#include "geonet/errors.hpp"
#include "geonet/runner.hpp"
#include "geonet/scenario.hpp"

using namespace geonet;

namespace {

const char* kPlaneScalene = R"({
  "name": "plane-scalene",
  "surface": {"kind": "plane"},
  "vertices": {"A": [0.0, 0.0], "B": [1.0, 0.0], "C": [0.3, 0.7]},
  "solver": {"method": "both"},
  "seed": 1
})";

Scenario parse(const std::string& text) { return parse_scenario_text(text, "inline"); }

}  // namespace

TEST_CASE("scenario defaults fill in for omitted sections") {
  Scenario sc = parse(R"({
    "surface": {"kind": "plane"},
    "vertices": {"A": [0.0, 0.0], "B": [1.0, 0.0], "C": [0.3, 0.7]}
  })");
  CHECK(sc.name == "inline");
  CHECK(sc.solver.method == MethodChoice::both);
  CHECK(sc.solver.tol.angle_tol == doctest::Approx(1e-7));
  CHECK(sc.solver.tol.vec_tol == doctest::Approx(2e-7));
  CHECK(sc.solver.tol.max_iter == 200);
  CHECK(sc.solver.override_preconditions == false);
  CHECK(sc.sampling.trace_n == 11);
  CHECK(sc.sampling.diameter_samples == 24);
  CHECK(sc.seed == 1);
  CHECK(!sc.expect_exit.has_value());
}

TEST_CASE("scenario parsing rejects malformed documents") {
  // not JSON at all
  CHECK_THROWS_AS(parse("not json"), GeonetError);
  // unknown keys at each level
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]}, "extra": 1})"),
                  GeonetError);
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane", "bogus": 1},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]}})"),
                  GeonetError);
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]},
    "solver": {"stepsize": 0.1}})"),
                  GeonetError);
  // missing required sections
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"}})"), GeonetError);
  CHECK_THROWS_AS(parse(R"({"vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]}})"),
                  GeonetError);
  // vertex arity and type
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0,0], "B": [1,0], "C": [0.3,0.7]}})"),
                  GeonetError);
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": "origin", "B": [1,0], "C": [0.3,0.7]}})"),
                  GeonetError);
  // tolerances must sit in (0, 1); iteration caps bounded
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]},
    "solver": {"angle_tol": 0.0}})"),
                  GeonetError);
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]},
    "solver": {"max_iter": 0}})"),
                  GeonetError);
  // seed must be a non-negative integer
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]}, "seed": -3})"),
                  GeonetError);
  // expected exit code must be one of the contract values
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "plane"},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]}, "expect": {"exit_code": 7}})"),
                  GeonetError);
  // metric expressions belong to user_metric surfaces only
  CHECK_THROWS_AS(parse(R"({"surface": {"kind": "sphere", "params": {"radius": 1.0},
    "metric": {"g11": "1", "g12": "0", "g22": "1"}},
    "vertices": {"A": [0,0], "B": [1,0], "C": [0.3,0.7]}})"),
                  GeonetError);
}

TEST_CASE("scenario hash covers content, not labels") {
  Scenario base = parse(kPlaneScalene);
  std::string h = scenario_hash(base);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);

  // renaming does not move the hash; the same document reordered does not either
  Scenario renamed = parse(R"({
    "seed": 1,
    "solver": {"method": "both"},
    "vertices": {"C": [0.3, 0.7], "B": [1.0, 0.0], "A": [0.0, 0.0]},
    "surface": {"kind": "plane"},
    "name": "other-label"
  })");
  CHECK(scenario_hash(renamed) == h);

  // moving a vertex moves the hash
  Scenario moved = parse(R"({
    "surface": {"kind": "plane"},
    "vertices": {"A": [0.0, 0.0], "B": [1.0, 0.0], "C": [0.3, 0.7000001]},
    "solver": {"method": "both"},
    "seed": 1
  })");
  CHECK(scenario_hash(moved) != h);

  // a different seed is a different computation
  Scenario reseeded = parse(kPlaneScalene);
  reseeded.seed = 2;
  CHECK(scenario_hash(reseeded) != h);
}

TEST_CASE("run_scenario emits byte-identical records and honors overrides") {
  Scenario sc = parse(kPlaneScalene);
  RunOutcome a = run_scenario(sc, RunOptions{});
  RunOutcome b = run_scenario(sc, RunOptions{});
  CHECK(a.exit_code == 0);
  CHECK(a.record == b.record);
  CHECK(a.record.find("\"sweep\"") != std::string::npos);
  CHECK(a.record.find("\"descent\"") != std::string::npos);
  CHECK(a.record.find("\"timing\"") == std::string::npos);

  RunOptions only_sweep;
  only_sweep.method = MethodChoice::sweep;
  RunOutcome c = run_scenario(sc, only_sweep);
  CHECK(c.exit_code == 0);
  CHECK(c.record.find("\"sweep\"") != std::string::npos);
  CHECK(c.record.find("\"descent\"") == std::string::npos);

  RunOptions timed;
  timed.timing = true;
  CHECK(run_scenario(sc, timed).record.find("\"timing\"") != std::string::npos);
}

TEST_CASE("run_scenario classifies refusals and input errors") {
  // antipodal base pair: ambiguous connection surfaces as a geometric refusal
  Scenario antipodal = parse(R"({
    "surface": {"kind": "sphere", "params": {"radius": 1.0}},
    "vertices": {"A": [1.5707963267948966, 0.0],
                 "B": [1.5707963267948966, 3.141592653589793],
                 "C": [1.2, 1.8]},
    "solver": {"method": "sweep"}
  })");
  RunOutcome r = run_scenario(antipodal, RunOptions{});
  CHECK(r.exit_code == 2);
  CHECK(r.record.find("non_unique") != std::string::npos);

  // screening refusal carries a note and no results block
  Scenario octant = parse(R"({
    "surface": {"kind": "sphere", "params": {"radius": 1.0}},
    "vertices": {"A": [1.8866386273270284, 0.56120272827265842],
                 "B": [1.0403952372799637, 1.9391632471183936],
                 "C": [0.63556258869158534, -0.55066053279997314]},
    "solver": {"method": "sweep"}
  })");
  RunOutcome oc = run_scenario(octant, RunOptions{});
  CHECK(oc.exit_code == 2);
  CHECK(oc.record.find("\"results\"") == std::string::npos);
  CHECK(oc.record.find("refused") != std::string::npos);

  // the override flag turns the same refusal into an attempted solve
  RunOptions forced;
  forced.override_preconditions = true;
  RunOutcome oc2 = run_scenario(octant, forced);
  CHECK(oc2.exit_code == 0);
  CHECK(oc2.record.find("\"advisory\": true") != std::string::npos);

  // vertices outside the declared chart domain are an input error
  Scenario outside = parse(R"({
    "surface": {"kind": "sphere", "params": {"radius": 1.0}},
    "vertices": {"A": [-0.2, 0.0], "B": [1.0, 0.1], "C": [1.1, 0.8]},
    "solver": {"method": "sweep"}
  })");
  CHECK(run_scenario(outside, RunOptions{}).exit_code == 1);
}

TEST_CASE("exit codes partition the error taxonomy") {
  CHECK(exit_code_for(ErrorCode::invalid_input) == 2);
  CHECK(exit_code_for(ErrorCode::outside_chart) == 2);
  CHECK(exit_code_for(ErrorCode::non_unique) == 2);
  CHECK(exit_code_for(ErrorCode::degenerate) == 2);
  CHECK(exit_code_for(ErrorCode::no_convergence) == 3);
  CHECK(exit_code_for(ErrorCode::inconsistent) == 3);
  CHECK(exit_code_for(ErrorCode::io_error) == 1);
}

TEST_CASE("trace output carries the documented header and row grid") {
  Scenario sc = parse(kPlaneScalene);
  TraceOptions topt;
  topt.csv = true;
  RunOutcome tr = emit_trace(sc, topt);
  CHECK(tr.exit_code == 0);
  CHECK(tr.record.find("# geonet ") == 0);
  CHECK(tr.record.find(scenario_hash(sc)) != std::string::npos);
  CHECK(tr.record.find("x_param,Y_u,Y_v,angle_AYB,angle_BYC,angle_CYA\n") != std::string::npos);
  int rows = 0;
  for (char ch : tr.record)
    if (ch == '\n') ++rows;
  CHECK(rows == 2 + 11);  // comment + header + trace_n data rows
  CHECK(tr.record == emit_trace(sc, topt).record);

  TraceOptions five;
  five.n = 5;
  five.csv = true;
  RunOutcome tr5 = emit_trace(sc, five);
  int rows5 = 0;
  for (char ch : tr5.record)
    if (ch == '\n') ++rows5;
  CHECK(rows5 == 2 + 5);
}

TEST_CASE("profile output rises monotonically for a flat triangle") {
  Scenario sc = parse(kPlaneScalene);
  TraceOptions topt;
  topt.csv = true;
  topt.n = 17;
  topt.x_param = 0.4;
  RunOutcome pr = emit_profile(sc, topt);
  CHECK(pr.exit_code == 0);
  double prev = -1.0;
  bool increasing = true;
  std::size_t pos = pr.record.find("arc_param,angle\n");
  REQUIRE(pos != std::string::npos);
  int rows = 0;
  for (std::size_t i = pr.record.find('\n', pos) + 1; i < pr.record.size();) {
    std::size_t comma = pr.record.find(',', i);
    std::size_t eol = pr.record.find('\n', i);
    double ang = std::stod(pr.record.substr(comma + 1, eol - comma - 1));
    increasing = increasing && ang > prev;
    prev = ang;
    ++rows;
    i = eol + 1;
  }
  CHECK(rows == 17);
  CHECK(increasing);
  CHECK(prev == doctest::Approx(M_PI).epsilon(1e-9));
}
