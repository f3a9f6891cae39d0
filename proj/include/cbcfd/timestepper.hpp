#pragma once

/// @file timestepper.hpp
/// @brief Multirate driver: initial pressure, W^0, predictor, then Q
/// concentration steps per pressure update.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbcfd/diagnostics.hpp"
#include "cbcfd/pressure_solver.hpp"
#include "cbcfd/transport_solver.hpp"

namespace cbcfd {

struct RunSpec {
  std::string name = "run";
  GridSpec grid{Domain{}, 4, 4, BoundaryKind::Periodic};
  TimeGrid time{1.0, 1, 1};
  PhysicsConfig physics;
  /// Cell sources at time t.
  std::function<SourceFields(const GridSpec&, double t)> sources;
  /// Darcy residual for manufactured runs; empty otherwise.
  std::function<DarcyForcing(const GridSpec&, double t)> darcy;
  SpaceTimeFunction initial_c;
  /// Initial V = -grad c^o components.
  SpaceTimeFunction initial_vx;
  SpaceTimeFunction initial_vy;
  /// Final-time error evaluation for manufactured runs; empty otherwise.
  std::function<ErrorRecord(const OperatorContext&, const Field& C, const PressureSolution&, double t)> errors;
  std::vector<double> snapshot_times;
  bool check_compatibility = true;
  /// Subtract the constant that makes q discretely compatible (manufactured runs).
  bool project_source = false;
  PressureOptions pressure;
  TransportSolver::Options transport;
};

struct Snapshot {
  double requested = 0.0;
  double t = 0.0;
  int step = 0;
  Field C;
};

struct RunCounters {
  int pressure_solves = 0;
  int concentration_solves = 0;  ///< excludes the predictor step
  int predictor_steps = 0;
  int factorizations = 0;
  int max_transport_iterations = 0;
  int max_pressure_iterations = 0;
};

struct RunTimings {
  double pressure_seconds = 0.0;
  double concentration_seconds = 0.0;
  double total_seconds = 0.0;
};

struct RunReport {
  std::string name;
  GridSpec grid{Domain{}, 4, 4, BoundaryKind::Periodic};
  TimeGrid time{1.0, 1, 1};
  RunCounters counters;
  RunTimings timings;
  MassSeries mass;
  std::vector<Snapshot> snapshots;
  TransportState final_state;
  PressureSolution final_pressure;
  std::optional<ErrorRecord> errors;
};

/// Read-only view passed to the observer after every concentration step.
struct StepView {
  int n = 0;  ///< index of the new level
  double t = 0.0;
  const TransportState& state;
  const FacePair& u_sharp;
  const VelocityHistory& history;
};

using StepObserver = std::function<void(const StepView&)>;

/// Thrown when a component fails; carries the concentration step index.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
  [[nodiscard]] int step() const { return step_; }

 private:
  int step_;
};

RunReport run(const RunSpec& spec, const StepObserver& observer = {});

}  // namespace cbcfd
