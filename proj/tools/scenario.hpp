#pragma once

// Scenario files are YAML. Sections may be nested maps or dotted keys
// (`field.kind: uniform`); both spellings flatten to the same key set.

#include <optional>
#include <string>
#include <vector>

#include "semidirac/em_fields.hpp"
#include "semidirac/trajectory.hpp"
#include "semidirac/trajectory_io.hpp"

namespace semidirac::cli {

struct AnalysisRequest {
  std::string kind;  // spin-hall | monopole | cyclotron | helicity
  std::optional<double> tol;
};

struct Scenario {
  PhysConstants constants;
  ParticleState initial;
  FieldConfig field = FieldConfig::uniform(Vec3::Zero(), Vec3::Zero());
  IntegratorSettings integrator;
  RhsModel model = RhsModel::berry_full;
  std::optional<AnalysisRequest> analysis;
  std::optional<std::string> output_path;
  TrajectoryFormat output_format = TrajectoryFormat::csv;
  std::vector<double> hbar_sweep;
};

/// Every key a scenario may contain, in dotted form.
const std::vector<std::string>& scenario_keys();

/// Parses and validates. Throws ParseError with a line-precise message.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace semidirac::cli
