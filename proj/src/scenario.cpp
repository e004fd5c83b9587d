#include "geonet/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "geonet/errors.hpp"
#include "json.hpp"

namespace geonet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw GeonetError(ErrorCode::invalid_input, "scenario " + where + ": " + msg);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown key '" + it.key() + "'");
  }
}

const json& member(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing required key '") + key + "'");
  return *it;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "value is not finite");
  return d;
}

double positive_number(const json& v, const std::string& where) {
  double d = as_number(v, where);
  if (d <= 0.0) fail(where, "value must be positive");
  return d;
}

int bounded_int(const json& v, const std::string& where, int lo, int hi) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  auto i = v.get<std::int64_t>();
  if (i < lo || i > hi)
    fail(where, "value " + std::to_string(i) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  return static_cast<int>(i);
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

SurfacePoint as_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected an array [u, v] of two numbers");
  return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
}

ChartDomain parse_domain(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  check_keys(v, where,
             {"u_min", "u_max", "v_min", "v_max", "disk", "disk_radius", "v_periodic", "v_period"});
  ChartDomain d;
  if (v.contains("u_min")) d.u_min = as_number(v["u_min"], where + ".u_min");
  if (v.contains("u_max")) d.u_max = as_number(v["u_max"], where + ".u_max");
  if (v.contains("v_min")) d.v_min = as_number(v["v_min"], where + ".v_min");
  if (v.contains("v_max")) d.v_max = as_number(v["v_max"], where + ".v_max");
  if (v.contains("disk")) d.disk = as_bool(v["disk"], where + ".disk");
  if (v.contains("disk_radius")) d.disk_radius = positive_number(v["disk_radius"], where + ".disk_radius");
  if (v.contains("v_periodic")) d.v_periodic = as_bool(v["v_periodic"], where + ".v_periodic");
  if (v.contains("v_period")) d.v_period = positive_number(v["v_period"], where + ".v_period");
  if (!d.disk && d.u_min >= d.u_max) fail(where, "u_min must be below u_max");
  if (!d.disk && !d.v_periodic && d.v_min >= d.v_max) fail(where, "v_min must be below v_max");
  return d;
}

SurfaceSpec parse_surface(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  check_keys(v, where,
             {"kind", "params", "curvature_upper_bound", "length_budget", "metric", "domain"});
  SurfaceSpec s;
  s.kind = as_string(member(v, where, "kind"), where + ".kind");
  if (v.contains("params")) {
    const json& p = v["params"];
    if (!p.is_object()) fail(where + ".params", "expected an object");
    for (auto it = p.begin(); it != p.end(); ++it)
      s.params[it.key()] = as_number(it.value(), where + ".params." + it.key());
  }
  if (v.contains("curvature_upper_bound"))
    s.curvature_upper_bound =
        positive_number(v["curvature_upper_bound"], where + ".curvature_upper_bound");
  if (v.contains("length_budget"))
    s.length_budget = positive_number(v["length_budget"], where + ".length_budget");
  if (v.contains("metric")) {
    const json& m = v["metric"];
    if (!m.is_object()) fail(where + ".metric", "expected an object");
    check_keys(m, where + ".metric", {"g11", "g12", "g22"});
    s.g11 = as_string(member(m, where + ".metric", "g11"), where + ".metric.g11");
    s.g12 = as_string(member(m, where + ".metric", "g12"), where + ".metric.g12");
    s.g22 = as_string(member(m, where + ".metric", "g22"), where + ".metric.g22");
  }
  if (v.contains("domain")) s.domain = parse_domain(v["domain"], where + ".domain");
  if (s.kind == "user_metric" && s.g11.empty())
    fail(where, "user_metric requires a 'metric' object with g11/g12/g22");
  if (s.kind != "user_metric" && !s.g11.empty())
    fail(where, "'metric' is only valid for kind user_metric");
  if (s.kind != "user_metric" && s.domain)
    fail(where, "'domain' is only valid for kind user_metric");
  return s;
}

SolverSpec parse_solver(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  check_keys(v, where,
             {"method", "angle_tol", "vec_tol", "bvp_tol", "max_iter", "override_preconditions"});
  SolverSpec s;
  if (v.contains("method")) {
    std::string m = as_string(v["method"], where + ".method");
    if (m == "sweep")
      s.method = MethodChoice::sweep;
    else if (m == "descent")
      s.method = MethodChoice::descent;
    else if (m == "both")
      s.method = MethodChoice::both;
    else
      fail(where + ".method", "expected one of sweep|descent|both, got '" + m + "'");
  }
  auto tol_in = [&](const char* key, double fallback) {
    if (!v.contains(key)) return fallback;
    double d = positive_number(v[key], where + "." + key);
    if (d >= 1.0) fail(where + "." + key, "tolerance must be below 1");
    return d;
  };
  s.tol.angle_tol = tol_in("angle_tol", s.tol.angle_tol);
  s.tol.vec_tol = tol_in("vec_tol", s.tol.vec_tol);
  s.tol.bvp_tol = tol_in("bvp_tol", s.tol.bvp_tol);
  if (v.contains("max_iter")) s.tol.max_iter = bounded_int(v["max_iter"], where + ".max_iter", 1, 100000);
  if (v.contains("override_preconditions"))
    s.override_preconditions = as_bool(v["override_preconditions"], where + ".override_preconditions");
  return s;
}

SamplingSpec parse_sampling(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  check_keys(v, where, {"trace_n", "diameter_samples", "quadrature_resolution"});
  SamplingSpec s;
  if (v.contains("trace_n")) s.trace_n = bounded_int(v["trace_n"], where + ".trace_n", 2, 100000);
  if (v.contains("diameter_samples"))
    s.diameter_samples = bounded_int(v["diameter_samples"], where + ".diameter_samples", 3, 100000);
  if (v.contains("quadrature_resolution"))
    s.quadrature_resolution =
        bounded_int(v["quadrature_resolution"], where + ".quadrature_resolution", 2, 4096);
  return s;
}

void append_number(std::string& out, double d) {
  // std::to_string would truncate; stream with max_digits10 round-trips.
  std::ostringstream os;
  os.precision(17);
  os << d;
  out += os.str();
}

}  // namespace

const char* method_choice_name(MethodChoice m) {
  switch (m) {
    case MethodChoice::sweep: return "sweep";
    case MethodChoice::descent: return "descent";
    case MethodChoice::both: return "both";
  }
  return "unknown";
}

Scenario parse_scenario_text(const std::string& text, const std::string& name_fallback) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeonetError(ErrorCode::invalid_input, std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) fail("", "top level must be an object");
  check_keys(doc, "", {"name", "surface", "vertices", "solver", "sampling", "seed", "expect"});

  Scenario sc;
  sc.name = doc.contains("name") ? as_string(doc["name"], "name") : name_fallback;
  sc.surface = parse_surface(member(doc, "", "surface"), "surface");

  const json& verts = member(doc, "", "vertices");
  if (!verts.is_object()) fail("vertices", "expected an object");
  check_keys(verts, "vertices", {"A", "B", "C"});
  sc.vertices[0] = as_point(member(verts, "vertices", "A"), "vertices.A");
  sc.vertices[1] = as_point(member(verts, "vertices", "B"), "vertices.B");
  sc.vertices[2] = as_point(member(verts, "vertices", "C"), "vertices.C");

  if (doc.contains("solver")) sc.solver = parse_solver(doc["solver"], "solver");
  if (doc.contains("sampling")) sc.sampling = parse_sampling(doc["sampling"], "sampling");
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned()) fail("seed", "expected a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("expect")) {
    const json& e = doc["expect"];
    if (!e.is_object()) fail("expect", "expected an object");
    check_keys(e, "expect", {"exit_code"});
    sc.expect_exit = bounded_int(member(e, "expect", "exit_code"), "expect.exit_code", 0, 3);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeonetError(ErrorCode::io_error, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_scenario_text(buf.str(), stem);
}

std::string canonical_scenario(const Scenario& sc) {
  // Hand-assembled with a fixed field order and fixed float formatting, so the
  // hash never depends on serializer internals.
  std::string out = "surface{kind=" + sc.surface.kind;
  for (const auto& [k, v] : sc.surface.params) {  // std::map: sorted
    out += "," + k + "=";
    append_number(out, v);
  }
  if (sc.surface.curvature_upper_bound) {
    out += ",curvature_upper_bound=";
    append_number(out, *sc.surface.curvature_upper_bound);
  }
  if (sc.surface.length_budget) {
    out += ",length_budget=";
    append_number(out, *sc.surface.length_budget);
  }
  if (!sc.surface.g11.empty())
    out += ",g11=" + sc.surface.g11 + ",g12=" + sc.surface.g12 + ",g22=" + sc.surface.g22;
  if (sc.surface.domain) {
    const ChartDomain& d = *sc.surface.domain;
    out += ",domain=[";
    for (double x : {d.u_min, d.u_max, d.v_min, d.v_max, d.disk_radius, d.v_period}) {
      append_number(out, x);
      out += ";";
    }
    out += d.disk ? "disk" : "rect";
    out += d.v_periodic ? ";periodic]" : ";bounded]";
  }
  out += "}vertices{";
  for (const SurfacePoint& p : sc.vertices) {
    append_number(out, p.u);
    out += ",";
    append_number(out, p.v);
    out += ";";
  }
  out += "}solver{method=";
  out += method_choice_name(sc.solver.method);
  for (auto [label, val] : {std::pair<const char*, double>{"angle_tol", sc.solver.tol.angle_tol},
                            {"vec_tol", sc.solver.tol.vec_tol},
                            {"bvp_tol", sc.solver.tol.bvp_tol}}) {
    out += std::string(",") + label + "=";
    append_number(out, val);
  }
  out += ",max_iter=" + std::to_string(sc.solver.tol.max_iter);
  out += sc.solver.override_preconditions ? ",override" : "";
  out += "}sampling{" + std::to_string(sc.sampling.trace_n) + "," +
         std::to_string(sc.sampling.diameter_samples) + "," +
         std::to_string(sc.sampling.quadrature_resolution) + "}seed{" +
         std::to_string(sc.seed) + "}";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string scenario_hash(const Scenario& sc) {
  std::uint64_t h = fnv1a64(canonical_scenario(sc));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SurfacePtr scenario_surface(const Scenario& sc) {
  SurfaceParams p;
  p.scalars = sc.surface.params;
  p.curvature_upper_bound = sc.surface.curvature_upper_bound;
  p.length_budget = sc.surface.length_budget;
  p.g11 = sc.surface.g11;
  p.g12 = sc.surface.g12;
  p.g22 = sc.surface.g22;
  p.user_domain = sc.surface.domain;
  return make_surface(sc.surface.kind, p);
}

Triangle scenario_triangle(const Scenario& sc, const SurfacePtr& s) {
  for (int i = 0; i < 3; ++i)
    if (!s->domain.contains(sc.vertices[i]))
      throw GeonetError(ErrorCode::invalid_input,
                        std::string("scenario vertices.") + "ABC"[i] + ": outside the chart domain");
  return build_triangle(s, sc.vertices[0], sc.vertices[1], sc.vertices[2]);
}

}  // namespace geonet
