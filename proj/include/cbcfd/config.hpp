#pragma once

/// @file config.hpp
/// @brief INI run configuration: parsing, validation and serialisation.
///
/// Sections and keys (unknown keys are rejected):
///   [scenario]     id
///   [domain]       x_lo x_hi y_lo y_hi
///   [grid]         nx ny bc (periodic | noflow)
///   [time]         t_end n_pressure q_ratio
///   [physics]      porosity permeability porosity_zones permeability_zones
///                  viscosity (quarter-power) mu0 mobility_ratio
///                  alpha_m alpha_l alpha_t initial_concentration
///   [wells]        injectors producers   ("x y rate c;..." / "x y rate;...")
///   [manufactured] example (e1 | e2)
///   [output]       directory snapshot_times formats (csv, vtk)
/// Zones are "x0 x1 y0 y1 value;..." over open rectangles; later zones win.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbcfd/grid.hpp"
#include "cbcfd/physics.hpp"

namespace cbcfd {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Zone {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
  double value = 0.0;
  [[nodiscard]] bool contains(double x, double y) const { return x > x0 && x < x1 && y > y0 && y < y1; }
  bool operator==(const Zone&) const = default;
};

struct RunConfig {
  std::string scenario = "custom";
  Domain domain;
  int nx = 20;
  int ny = 20;
  BoundaryKind bc = BoundaryKind::NoFlow;
  double t_end = 1.0;
  int n_pressure = 1;
  int q_ratio = 1;

  double porosity = 0.1;
  std::vector<Zone> porosity_zones;
  double permeability = 80.0;
  std::vector<Zone> permeability_zones;
  std::string viscosity = "quarter-power";
  double mu0 = 1.0;
  double mobility_ratio = 1.0;
  double alpha_m = 0.0;
  double alpha_l = 0.0;
  double alpha_t = 0.0;
  double initial_concentration = 0.0;
  std::vector<PointWell> injectors;
  std::vector<PointWell> producers;

  std::string manufactured;  ///< empty, "e1" or "e2"

  std::string output_directory = "output";
  std::vector<double> snapshot_times;
  std::vector<std::string> formats{"csv"};

  [[nodiscard]] bool is_manufactured() const { return !manufactured.empty(); }
  bool operator==(const RunConfig&) const = default;
};

/// Environment variable that overrides [output] directory.
inline constexpr const char* kOutputDirEnv = "CBCFD_OUTPUT_DIR";

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);
/// Throws ConfigError describing the first violated constraint.
void validate_config(const RunConfig& config);
/// Applies the output-directory environment override, if set.
void apply_environment(RunConfig& config);

}  // namespace cbcfd
