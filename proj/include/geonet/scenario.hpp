#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "geonet/solver.hpp"
#include "geonet/surface.hpp"
#include "geonet/triangle.hpp"
#include "geonet/types.hpp"

namespace geonet {

// One self-contained problem statement: a surface, a triangle on it, and the
// solver/sampling configuration. Loaded from a strict JSON document — unknown
// keys anywhere are rejected, all values are range-checked.
struct SurfaceSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::optional<double> curvature_upper_bound;
  std::optional<double> length_budget;
  std::string g11, g12, g22;  // user_metric coefficient expressions
  std::optional<ChartDomain> domain;
};

enum class MethodChoice { sweep, descent, both };
const char* method_choice_name(MethodChoice m);

struct SolverSpec {
  MethodChoice method = MethodChoice::both;
  SolverTolerances tol;
  bool override_preconditions = false;
};

struct SamplingSpec {
  int trace_n = 11;
  int diameter_samples = 24;
  int quadrature_resolution = 64;
};

struct Scenario {
  std::string name;
  SurfaceSpec surface;
  std::array<SurfacePoint, 3> vertices{};
  SolverSpec solver;
  SamplingSpec sampling;
  std::uint64_t seed = 1;
  std::optional<int> expect_exit;  // documented outcome, used by batch runs
};

// Parse + validate. `name_fallback` fills in when the document has no name.
Scenario parse_scenario_text(const std::string& text, const std::string& name_fallback);
Scenario load_scenario(const std::string& path);

// Canonical serialization of the computational content (surface, vertices,
// solver, sampling, seed — not the label or expectations): the hash input.
std::string canonical_scenario(const Scenario& sc);

std::uint64_t fnv1a64(const std::string& bytes);
std::string scenario_hash(const Scenario& sc);  // 16 hex digits

SurfacePtr scenario_surface(const Scenario& sc);
Triangle scenario_triangle(const Scenario& sc, const SurfacePtr& s);

}  // namespace geonet
