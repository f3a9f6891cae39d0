#include "cbcfd/timestepper.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace cbcfd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void zero_normal_boundary(Field& f, Axis axis) {
  if (f.grid().periodic()) return;
  if (axis == Axis::X) {
    for (int j = 0; j < f.n1(); ++j) f(0, j) = f(f.n0() - 1, j) = 0.0;
  } else {
    for (int i = 0; i < f.n0(); ++i) f(i, 0) = f(i, f.n1() - 1) = 0.0;
  }
}

}  // namespace

RunReport run(const RunSpec& spec, const StepObserver& observer) {
  const auto t_start = Clock::now();
  const GridSpec& grid = spec.grid;
  const TimeGrid& time = spec.time;
  const OperatorContext ctx(grid);
  TransportSolver transport(ctx, spec.physics, spec.transport);
  RunCounters counters;
  RunTimings timings;
  int step_index = 0;
  const double ones_weight = compatibility_defect(ctx, Field(grid, Location::Cell, 1.0));

  auto pressure_at = [&](const Field& C, double t) {
    const auto t0 = Clock::now();
    SourceFields src = spec.sources(grid, t);
    if (spec.project_source) {
      const double shift = compatibility_defect(ctx, src.q) / ones_weight;
      for (double& v : src.q.values()) v -= shift;
    }
    if (spec.check_compatibility) require_compatible_source(ctx, src.q);
    std::optional<DarcyForcing> forcing;
    if (spec.darcy) forcing = spec.darcy(grid, t);
    PressureSolution sol = solve_pressure_velocity(ctx, C, src.q, spec.physics, forcing ? &*forcing : nullptr,
                                                   spec.pressure);
    ++counters.pressure_solves;
    counters.max_pressure_iterations = std::max(counters.max_pressure_iterations, sol.iterations);
    timings.pressure_seconds += seconds_since(t0);
    return sol;
  };

  auto concentration_step = [&](const TransportState& s, const FacePair& u, double dt, SourceFields& src_mid) {
    const auto t0 = Clock::now();
    src_mid = spec.sources(grid, s.t + 0.5 * dt);
    TransportState next = transport.step(s, u, src_mid.qP, src_mid.qI_cI, dt);
    counters.max_transport_iterations = std::max(counters.max_transport_iterations, transport.last_stats().iterations);
    timings.concentration_seconds += seconds_since(t0);
    return next;
  };

  try {
    // initial data
    TransportState state{sample_function(spec.initial_c, Location::Cell, 0.0, grid),
                         sample_function(spec.initial_vx, Location::XFace, 0.0, grid),
                         sample_function(spec.initial_vy, Location::YFace, 0.0, grid), Field(grid, Location::XFace),
                         Field(grid, Location::YFace), 0.0};
    zero_normal_boundary(state.Vx, Axis::X);
    zero_normal_boundary(state.Vy, Axis::Y);

    PressureSolution p0 = pressure_at(state.C, 0.0);
    FacePair u0{p0.Ux, p0.Uy};
    {
      FacePair w0 = transport.initial_W(state.C, state.Vx, state.Vy, u0);
      state.Wx = std::move(w0.x);
      state.Wy = std::move(w0.y);
    }

    // predictor over the first pressure interval with U_# = U^0
    VelocityHistory history(u0, 0.0);
    {
      SourceFields src_mid = zero_sources(grid);
      const TransportState star = concentration_step(state, u0, time.dt_p(), src_mid);
      ++counters.predictor_steps;
      PressureSolution p_star = pressure_at(star.C, time.t_pressure(1));
      history.set_predictor(FacePair{std::move(p_star.Ux), std::move(p_star.Uy)}, time.t_pressure(1));
    }

    MassAccumulator mass(ctx, transport.porosity(), state.C);
    std::vector<double> pending = spec.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::vector<Snapshot> snapshots;
    const double slack = 1e-9 * time.dt_c();
    auto take_snapshots = [&](const TransportState& s, int n) {
      while (!pending.empty() && s.t >= pending.front() - slack) {
        snapshots.push_back(Snapshot{pending.front(), s.t, n, s.C});
        pending.erase(pending.begin());
      }
    };
    take_snapshots(state, 0);

    PressureSolution last_pressure = p0;
    for (int m = 0; m < time.n_pressure(); ++m) {
      for (int i = 0; i < time.ratio_q(); ++i) {
        const int n = m * time.ratio_q() + i;
        step_index = n + 1;
        const double t_next = time.t_conc(n + 1);
        const FacePair u_sharp = extrapolate_velocity(history, t_next);
        SourceFields src_mid = zero_sources(grid);
        TransportState next = concentration_step(state, u_sharp, time.dt_c(), src_mid);
        next.t = t_next;
        ++counters.concentration_solves;
        mass.add_step(state.C, next.C, src_mid.qP, src_mid.qI_cI, time.dt_c(), t_next);
        state = std::move(next);
        if (observer) observer(StepView{n + 1, t_next, state, u_sharp, history});
        take_snapshots(state, n + 1);
      }
      last_pressure = pressure_at(state.C, time.t_pressure(m + 1));
      history.push(FacePair{last_pressure.Ux, last_pressure.Uy}, time.t_pressure(m + 1));
    }
    counters.factorizations = transport.factorizations();
    timings.total_seconds = seconds_since(t_start);

    RunReport report{spec.name, grid,     time,   counters, timings, mass.series(), std::move(snapshots),
                     state,     last_pressure, std::nullopt};
    if (spec.errors) report.errors = spec.errors(ctx, state.C, last_pressure, time.t_end());
    return report;
  } catch (const RunError&) {
    throw;
  } catch (const SolverError& e) {
    std::ostringstream msg;
    msg << "solver failure at concentration step " << step_index << ": " << e.what();
    throw RunError(msg.str(), step_index);
  }
}

}  // namespace cbcfd
