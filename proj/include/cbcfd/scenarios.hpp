#pragma once

/// @file scenarios.hpp
/// @brief Built-in runs: two manufactured solutions (e1 periodic, e2 no-flow
/// with a velocity-dependent tensor) and four quarter five-spot waterfloods.

#include <memory>
#include <string>
#include <vector>

#include "cbcfd/config.hpp"
#include "cbcfd/timestepper.hpp"

namespace cbcfd {

/// Value and derivatives of a scalar at one point.
struct Jet {
  double v = 0.0;
  double x = 0.0;
  double y = 0.0;
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
  double t = 0.0;
};

/// Closed-form exact solution with hand-differentiated derivatives.
class ManufacturedSolution {
 public:
  virtual ~ManufacturedSolution() = default;

  [[nodiscard]] virtual std::string id() const = 0;
  [[nodiscard]] virtual BoundaryKind bc() const = 0;
  [[nodiscard]] Domain domain() const { return Domain{}; }
  [[nodiscard]] double t_end() const { return 1.0; }

  [[nodiscard]] virtual Jet c(double x, double y, double t) const = 0;
  [[nodiscard]] virtual Jet p(double x, double y, double t) const = 0;
  [[nodiscard]] virtual Jet ux(double x, double y, double t) const = 0;
  [[nodiscard]] virtual Jet uy(double x, double y, double t) const = 0;
  [[nodiscard]] virtual Jet phi(double x, double y) const = 0;
  [[nodiscard]] virtual Jet alpha_m(double x, double y) const = 0;
  [[nodiscard]] virtual double k(double x, double y) const = 0;
  [[nodiscard]] virtual double q_production(double x, double y, double t) const = 0;
  [[nodiscard]] virtual double alpha_uu() const { return 0.0; }
  [[nodiscard]] double mu(double c) const { return 1.0 + c * c; }

  /// div u
  [[nodiscard]] double divergence(double x, double y, double t) const;
  /// f = phi c_t + div(u c - D grad c) - q_P c
  [[nodiscard]] double forcing(double x, double y, double t) const;
  /// g = a(c) u + grad p, one component
  [[nodiscard]] double darcy(Axis axis, double x, double y, double t) const;

  [[nodiscard]] PhysicsConfig physics() const;
};

/// e1 or e2; throws ConfigError otherwise.
std::shared_ptr<const ManufacturedSolution> make_manufactured(const std::string& id);

struct ScenarioInfo {
  std::string id;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();

/// Full configuration of a built-in scenario; throws ConfigError for unknown ids.
RunConfig scenario_config(const std::string& id);

/// e1/e2 on an n x n grid with N_c = n^2 and N_p = n^2 / q.
RunConfig manufactured_config(const std::string& id, int n, int q);

/// Porosity and permeability with zones, quarter-power viscosity and
/// Bear-Scheidegger dispersion.
PhysicsConfig physics_from_config(const RunConfig& config);

/// Validates and assembles everything the driver needs.
RunSpec build_run_spec(const RunConfig& config);

}  // namespace cbcfd
