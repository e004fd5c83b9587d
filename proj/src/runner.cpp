#include "geonet/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>

#include "geonet/version.hpp"
#include "json.hpp"

namespace geonet {

namespace {

using nlohmann::json;

std::string tool_id() { return std::string(kToolName) + " " + kVersion; }

json error_json(const GeonetError& e) {
  return {{"code", error_code_name(e.code())}, {"message", e.what()}};
}

json point_json(const SurfacePoint& p) { return json::array({p.u, p.v}); }

json preconditions_json(const PreconditionReport& rep) {
  json j;
  j["verdict"] = verdict_name(rep.verdict);
  j["angle_ok"] = {rep.angle_ok[0], rep.angle_ok[1], rep.angle_ok[2]};
  j["diameter_estimate"] = rep.diameter_estimate;
  if (rep.diameter_ok)
    j["diameter_ok"] = *rep.diameter_ok;
  else
    j["diameter_ok"] = nullptr;
  return j;
}

json balanced_json(const BalancedResult& r) {
  json j;
  j["converged"] = r.converged;
  j["point"] = point_json(r.point);
  j["angles"] = {r.angles[0], r.angles[1], r.angles[2]};
  j["tangent_sum_norm"] = r.tangent_sum_norm;
  j["iterations"] = r.iterations;
  j["inside_triangle"] = r.inside_triangle;
  return j;
}

// Shortest round-trip decimal for CSV cells.
std::string num_csv(double d) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

Scenario effective_scenario(const Scenario& sc, const RunOptions& opts) {
  Scenario eff = sc;
  if (opts.method) eff.solver.method = *opts.method;
  if (opts.seed) eff.seed = *opts.seed;
  eff.solver.override_preconditions |= opts.override_preconditions;
  return eff;
}

}  // namespace

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input:
    case ErrorCode::outside_chart:
    case ErrorCode::non_unique:
    case ErrorCode::degenerate:
      return exit_refused;
    case ErrorCode::no_convergence:
    case ErrorCode::inconsistent:
      return exit_no_convergence;
    case ErrorCode::io_error:
      return exit_input_error;
  }
  return exit_input_error;
}

RunOutcome run_scenario(const Scenario& sc_in, const RunOptions& opts) {
  auto t_start = std::chrono::steady_clock::now();
  Scenario sc = effective_scenario(sc_in, opts);

  json rec;
  rec["tool"] = tool_id();
  rec["scenario"] = sc.name;
  rec["scenario_hash"] = scenario_hash(sc);
  rec["seed"] = sc.seed;
  rec["method"] = method_choice_name(sc.solver.method);
  rec["override_used"] = sc.solver.override_preconditions;
  json notes = json::array();

  auto finish = [&](int code) {
    rec["exit_code"] = code;
    rec["notes"] = notes;
    if (opts.timing) {
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t_start)
                      .count();
      rec["timing"] = {{"total_ms", ms}};
    }
    return RunOutcome{code, rec.dump(2) + "\n"};
  };

  // Surface stage: construction failures are scenario-content problems.
  SurfacePtr surface;
  try {
    surface = scenario_surface(sc);
    for (int i = 0; i < 3; ++i)
      if (!surface->domain.contains(sc.vertices[i]))
        throw GeonetError(ErrorCode::invalid_input,
                          std::string("scenario vertices.") + "ABC"[i] +
                              ": outside the chart domain");
  } catch (const GeonetError& e) {
    rec["error"] = error_json(e);
    return finish(exit_input_error);
  }

  // Geometry stage: ambiguity or degeneracy of the configuration itself.
  Triangle tri;
  try {
    tri = build_triangle(surface, sc.vertices[0], sc.vertices[1], sc.vertices[2]);
  } catch (const GeonetError& e) {
    rec["error"] = error_json(e);
    return finish(exit_code_for(e.code()));
  }
  rec["triangle"] = {{"degenerate", tri.degenerate},
                     {"orientation_swapped", tri.orientation_swapped},
                     {"angles", {tri.angle[0], tri.angle[1], tri.angle[2]}},
                     {"side_lengths",
                      {tri.side[0].length, tri.side[1].length, tri.side[2].length}}};

  PreconditionReport pre = check_preconditions(tri, sc.sampling.diameter_samples);
  rec["preconditions"] = preconditions_json(pre);

  bool hypotheses_met = pre.verdict == PreconditionReport::Verdict::pass;
  if (!hypotheses_met && !sc.solver.override_preconditions) {
    notes.push_back(std::string("screening verdict ") + verdict_name(pre.verdict) +
                    "; solve refused (pass --override-preconditions to attempt anyway)");
    return finish(exit_refused);
  }
  rec["advisory"] = !hypotheses_met;  // results below lack hypothesis cover
  if (!hypotheses_met)
    notes.push_back(std::string("screening verdict ") + verdict_name(pre.verdict) +
                    "; solve attempted under override");

  json results;
  std::optional<BalancedResult> first_ok;
  std::string first_ok_method;
  bool all_converged = true;
  auto run_method = [&](MethodChoice m) {
    const char* label = method_choice_name(m);
    try {
      BalancedResult r;
      if (m == MethodChoice::sweep) {
        SolveOptions so;
        so.override_preconditions = true;  // policy already applied above
        so.diameter_samples = sc.sampling.diameter_samples;
        so.tol = sc.solver.tol;
        r = sweep_balanced(tri, so);
      } else {
        r = descent_balanced(tri, std::nullopt, sc.solver.tol);
      }
      results[label] = balanced_json(r);
      if (r.converged && !first_ok) {
        first_ok = r;
        first_ok_method = label;
      }
      all_converged = all_converged && r.converged;
    } catch (const GeonetError& e) {
      results[label] = {{"error", error_json(e)}};
      all_converged = false;
    }
  };
  if (sc.solver.method == MethodChoice::sweep || sc.solver.method == MethodChoice::both)
    run_method(MethodChoice::sweep);
  if (sc.solver.method == MethodChoice::descent || sc.solver.method == MethodChoice::both)
    run_method(MethodChoice::descent);
  rec["results"] = results;

  if (first_ok) {
    ResidualReport rr = verify_balanced(tri, first_ok->point, sc.solver.tol);
    rec["residual_check"] = {
        {"method", first_ok_method},
        {"angle_residuals", {rr.angle_residuals[0], rr.angle_residuals[1], rr.angle_residuals[2]}},
        {"tangent_sum_norm", rr.tangent_sum_norm},
        {"angles_pass", rr.angles_pass},
        {"tangents_pass", rr.tangents_pass},
        {"consistent", rr.consistent}};
  } else {
    rec["residual_check"] = nullptr;
  }

  try {
    rec["gauss_bonnet_residual"] = gauss_bonnet_residual(tri, sc.sampling.quadrature_resolution);
  } catch (const GeonetError& e) {
    rec["gauss_bonnet_residual"] = nullptr;
    notes.push_back(std::string("curvature-excess check unavailable: ") + e.what());
  }

  return finish(all_converged ? exit_ok : exit_no_convergence);
}

RunOutcome emit_trace(const Scenario& sc, const TraceOptions& opts) {
  int n = opts.n.value_or(sc.sampling.trace_n);
  SurfacePtr surface;
  try {
    surface = scenario_surface(sc);
  } catch (const GeonetError& e) {
    return {exit_input_error, std::string(e.what()) + "\n"};
  }
  SweepTrace tr;
  try {
    Triangle tri = scenario_triangle(sc, surface);
    tr = trace_s_curve(tri, n, sc.solver.tol);
  } catch (const GeonetError& e) {
    return {exit_code_for(e.code()), std::string(e.what()) + "\n"};
  }

  std::string hash = scenario_hash(sc);
  if (opts.csv) {
    std::string out = "# " + tool_id() + " scenario " + hash + "\n";
    out += "x_param,Y_u,Y_v,angle_AYB,angle_BYC,angle_CYA\n";
    for (const SweepRecord& r : tr.records) {
      double nan = std::nan("");
      out += num_csv(r.x_param) + ",";
      out += num_csv(r.ok ? r.point.u : nan) + ",";
      out += num_csv(r.ok ? r.point.v : nan) + ",";
      out += num_csv(r.ok ? r.angles[0] : nan) + ",";
      out += num_csv(r.ok ? r.angles[1] : nan) + ",";
      out += num_csv(r.ok ? r.angles[2] : nan) + "\n";
    }
    return {exit_ok, out};
  }
  json doc;
  doc["tool"] = tool_id();
  doc["scenario"] = sc.name;
  doc["scenario_hash"] = hash;
  json records = json::array();
  for (const SweepRecord& r : tr.records) {
    json rj;
    rj["x_param"] = r.x_param;
    rj["ok"] = r.ok;
    if (r.ok) {
      rj["point"] = point_json(r.point);
      rj["angles"] = {r.angles[0], r.angles[1], r.angles[2]};
    } else {
      rj["note"] = r.note;
    }
    records.push_back(rj);
  }
  doc["records"] = records;
  return {exit_ok, doc.dump(2) + "\n"};
}

RunOutcome emit_profile(const Scenario& sc, const TraceOptions& opts) {
  int n = opts.n.value_or(sc.sampling.trace_n);
  SurfacePtr surface;
  try {
    surface = scenario_surface(sc);
  } catch (const GeonetError& e) {
    return {exit_input_error, std::string(e.what()) + "\n"};
  }
  std::vector<double> prof;
  try {
    Triangle tri = scenario_triangle(sc, surface);
    prof = angle_profile(tri, opts.x_param, n, sc.solver.tol);
  } catch (const GeonetError& e) {
    return {exit_code_for(e.code()), std::string(e.what()) + "\n"};
  }

  std::string hash = scenario_hash(sc);
  if (opts.csv) {
    std::string out = "# " + tool_id() + " scenario " + hash + "\n";
    out += "arc_param,angle\n";
    for (std::size_t k = 0; k < prof.size(); ++k)
      out += num_csv(static_cast<double>(k) / (prof.size() - 1)) + "," + num_csv(prof[k]) + "\n";
    return {exit_ok, out};
  }
  json doc;
  doc["tool"] = tool_id();
  doc["scenario"] = sc.name;
  doc["scenario_hash"] = hash;
  doc["x_param"] = opts.x_param;
  doc["angles"] = prof;
  return {exit_ok, doc.dump(2) + "\n"};
}

std::string surface_catalog() {
  return "plane: params [extent]; K = 0\n"
         "sphere: params [radius, theta_min]; K = 1/radius^2 (bound declared)\n"
         "hyperbolic_disk: params []; K = -1\n"
         "ellipsoid: params [a, c, theta_min]; variable K (bound declared)\n"
         "user_metric: metric {g11, g12, g22} expressions in u, v; optional domain; "
         "declare curvature_upper_bound when one is known\n";
}

}  // namespace geonet
