#pragma once

#include <string>
#include <vector>

#include "lab/runconfig.hpp"
#include "lab/scenario.hpp"

namespace lab {

// Built-in verification scenarios, keyed by name:
//   double-well-1d    symmetric quartic double well, minima at +-1
//   asymmetric-well-1d equal-depth wells with different curvatures
//   quartic-well-1d   single well with a pure quartic correction
//   harmonic-1d       c = 1 + x^2, ground state known in closed form
//   gradient-well-1d  drift = grad(phi) with two repelling wells of phi
//   gradient-2d       planar gradient field with a saddle between wells
//   annulus-cycle     rotating field with an attracting cycle at r = 1
ScenarioSpec builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// Scenario files are key-value text (see README for the schema); the
// potential and field are chosen from a catalog of parametric forms.
ScenarioSpec load_scenario_file(const std::string& path);
ScenarioSpec scenario_from_ini(const IniFile& ini);

// Resolve from a run config: file wins over name; empty name lists the catalog.
ScenarioSpec resolve_scenario(const RunConfig& cfg);

// Default per-axis node counts used by the shipped recipes.
int default_resolution(const ScenarioSpec& spec);

}  // namespace lab
