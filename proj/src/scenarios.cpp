#include "cbcfd/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "cbcfd/diagnostics.hpp"

namespace cbcfd {

namespace {

constexpr double kPi = std::numbers::pi;

class PeriodicExample final : public ManufacturedSolution {
 public:
  std::string id() const override { return "e1"; }
  BoundaryKind bc() const override { return BoundaryKind::Periodic; }

  Jet c(double x, double y, double t) const override {
    const double s = std::sin(2.5 * kPi * t + 0.25 * kPi);
    const double st = 2.5 * kPi * std::cos(2.5 * kPi * t + 0.25 * kPi);
    const double cx = std::cos(2 * kPi * x), sx = std::sin(2 * kPi * x);
    const double cy = std::cos(2 * kPi * y), sy = std::sin(2 * kPi * y);
    const double w = 2 * kPi, w2 = w * w;
    return Jet{s * cx * cy, -w * s * sx * cy, -w * s * cx * sy, -w2 * s * cx * cy,
               w2 * s * sx * sy, -w2 * s * cx * cy, st * cx * cy};
  }

  Jet p(double x, double y, double t) const override {
    const double s = sp(t);
    const double cx = std::cos(2 * kPi * x), sx = std::sin(2 * kPi * x);
    const double cy = std::cos(2 * kPi * y), sy = std::sin(2 * kPi * y);
    const double w = 2 * kPi;
    return Jet{s * sx * sy, w * s * cx * sy, w * s * sx * cy, 0, 0, 0, 0};
  }

  Jet ux(double x, double y, double t) const override {
    const double s = sp(t);
    const double cx = std::cos(2 * kPi * x), sx = std::sin(2 * kPi * x);
    const double cy = std::cos(2 * kPi * y), sy = std::sin(2 * kPi * y);
    const double w = 2 * kPi;
    return Jet{s * sx * cy, w * s * cx * cy, -w * s * sx * sy, 0, 0, 0, 0};
  }

  Jet uy(double x, double y, double t) const override {
    const double s = sp(t);
    const double cx = std::cos(2 * kPi * x), sx = std::sin(2 * kPi * x);
    const double cy = std::cos(2 * kPi * y), sy = std::sin(2 * kPi * y);
    const double w = 2 * kPi;
    return Jet{s * cx * sy, -w * s * sx * sy, w * s * cx * cy, 0, 0, 0, 0};
  }

  Jet phi(double x, double y) const override {
    const double a = 2 * kPi * (x + y);
    const double d = -0.5 * kPi * std::sin(a);
    return Jet{(std::cos(a) + 2.0) / 4.0, d, d, 0, 0, 0, 0};
  }

  Jet alpha_m(double x, double y) const override {
    const double a = 2 * kPi * (x + y);
    const double d = 2 * kPi * std::cos(a);
    return Jet{std::sin(a) + 2.0, d, d, 0, 0, 0, 0};
  }

  double k(double x, double y) const override {
    const double b = std::sin(2 * kPi * (x + y)) + 2.0;
    return b * b;
  }

  double q_production(double x, double y, double t) const override { return std::sin(2 * kPi * (x + y + t)) - 2.0; }

 private:
  static double sp(double t) { return std::sin(0.5 * kPi * t + 0.25 * kPi); }
};

class NoFlowExample final : public ManufacturedSolution {
 public:
  std::string id() const override { return "e2"; }
  BoundaryKind bc() const override { return BoundaryKind::NoFlow; }

  Jet c(double x, double y, double t) const override {
    const double e = 2.0 * std::exp(t);
    const double v = e * (quartic(x) + quartic(y));
    return Jet{v, e * quartic_d1(x), e * quartic_d1(y), e * quartic_d2(x), 0.0, e * quartic_d2(y), v};
  }

  Jet p(double x, double y, double t) const override {
    const double t3 = t * t * t;
    const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
    return Jet{t3 * sx * sy, t3 * kPi * std::cos(kPi * x) * sy, t3 * kPi * sx * std::cos(kPi * y), 0, 0, 0, 0};
  }

  Jet ux(double x, double, double t) const override {
    const double t3 = t * t * t;
    return Jet{t3 * cubic(x), t3 * cubic_d1(x), 0, 0, 0, 0, 0};
  }

  Jet uy(double, double y, double t) const override {
    const double t3 = t * t * t;
    return Jet{t3 * cubic(y), 0, t3 * cubic_d1(y), 0, 0, 0, 0};
  }

  Jet phi(double x, double y) const override {
    const double s = x + y + 1.0;
    return Jet{s * s / 10.0, s / 5.0, s / 5.0, 0, 0, 0, 0};
  }

  Jet alpha_m(double, double) const override { return Jet{0.1, 0, 0, 0, 0, 0, 0}; }

  double k(double x, double y) const override {
    const double s = x + y + 1.0;
    return s * s * s;
  }

  double q_production(double x, double y, double t) const override { return std::cos(2 * kPi * (x + y + t)) - 2.0; }

  double alpha_uu() const override { return 1.0; }

 private:
  // x^2 (x-1)^2 and x (x-1)(2x-1)
  static double quartic(double x) { return x * x * (x - 1) * (x - 1); }
  static double quartic_d1(double x) { return 2 * x * (x - 1) * (2 * x - 1); }
  static double quartic_d2(double x) { return 12 * x * x - 12 * x + 2; }
  static double cubic(double x) { return x * (x - 1) * (2 * x - 1); }
  static double cubic_d1(double x) { return 6 * x * x - 6 * x + 1; }
};

double zoned(double base, const std::vector<Zone>& zones, double x, double y) {
  double v = base;
  for (const Zone& z : zones) {
    if (z.contains(x, y)) v = z.value;
  }
  return v;
}

RunConfig five_spot_base(const std::string& id) {
  RunConfig c;
  c.scenario = id;
  c.domain = Domain{0.0, 1000.0, 0.0, 1000.0};
  c.nx = c.ny = 50;
  c.bc = BoundaryKind::NoFlow;
  c.t_end = 3600.0;
  c.n_pressure = 120;
  c.q_ratio = 3;
  c.porosity = 0.1;
  c.permeability = 80.0;
  c.mu0 = 1.0;
  c.initial_concentration = 0.0;
  c.injectors = {PointWell{1000.0, 1000.0, 30.0, 1.0}};
  c.producers = {PointWell{0.0, 0.0, -30.0, 0.0}};
  c.output_directory = "output/" + id;
  c.snapshot_times = {1080.0, 3600.0};
  return c;
}

}  // namespace

double ManufacturedSolution::divergence(double x, double y, double t) const {
  return ux(x, y, t).x + uy(x, y, t).y;
}

double ManufacturedSolution::forcing(double x, double y, double t) const {
  const Jet cj = c(x, y, t);
  const Jet u = ux(x, y, t);
  const Jet v = uy(x, y, t);
  const Jet f = phi(x, y);
  const Jet am = alpha_m(x, y);
  const double div = u.x + v.y;
  const double ugc = u.v * cj.x + v.v * cj.y;
  double diffusion = (f.x * am.v + f.v * am.x) * cj.x + (f.y * am.v + f.v * am.y) * cj.y + f.v * am.v * (cj.xx + cj.yy);
  if (const double a = alpha_uu(); a != 0.0) {
    // div(phi u (u . grad c))
    const double grad_ugc_x = u.x * cj.x + v.x * cj.y + u.v * cj.xx + v.v * cj.xy;
    const double grad_ugc_y = u.y * cj.x + v.y * cj.y + u.v * cj.xy + v.v * cj.yy;
    diffusion += a * (ugc * (f.x * u.v + f.y * v.v + f.v * div) + f.v * (u.v * grad_ugc_x + v.v * grad_ugc_y));
  }
  return f.v * cj.t + cj.v * div + ugc - diffusion - q_production(x, y, t) * cj.v;
}

double ManufacturedSolution::darcy(Axis axis, double x, double y, double t) const {
  const double a = mu(c(x, y, t).v) / k(x, y);
  const Jet pj = p(x, y, t);
  return axis == Axis::X ? a * ux(x, y, t).v + pj.x : a * uy(x, y, t).v + pj.y;
}

PhysicsConfig ManufacturedSolution::physics() const {
  PhysicsConfig ph;
  ph.porosity = [this](double x, double y) { return phi(x, y).v; };
  ph.permeability = [this](double x, double y) { return k(x, y); };
  ph.viscosity = ViscosityModel::analytic([](double c) { return 1.0 + c * c; }, "1+c^2");
  ph.dispersion.alpha_m = [this](double x, double y) { return alpha_m(x, y).v; };
  ph.dispersion.alpha_uu = alpha_uu();
  return ph;
}

std::shared_ptr<const ManufacturedSolution> make_manufactured(const std::string& id) {
  if (id == "e1") return std::make_shared<PeriodicExample>();
  if (id == "e2") return std::make_shared<NoFlowExample>();
  throw ConfigError("unknown manufactured solution '" + id + "'");
}

std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"e1", "periodic manufactured solution, scalar diffusion, mu = 1 + c^2"},
      {"e2", "no-flow manufactured solution, D = phi (0.1 I + u u^T)"},
      {"e3", "five-spot, homogeneous, M = 1, molecular diffusion only"},
      {"e4", "five-spot, M = 41, Bear-Scheidegger dispersion"},
      {"e5", "five-spot as e4 with k = 80 below y = 500 and 20 above"},
      {"e6", "five-spot as e4 with a low phi, low k block (150,550)^2"},
  };
}

RunConfig manufactured_config(const std::string& id, int n, int q) {
  const auto ms = make_manufactured(id);
  if (q < 1 || (n * n) % q != 0) {
    throw ConfigError("q = " + std::to_string(q) + " must divide n^2 = " + std::to_string(n * n));
  }
  RunConfig c;
  c.scenario = id;
  c.manufactured = id;
  c.domain = ms->domain();
  c.nx = c.ny = n;
  c.bc = ms->bc();
  c.t_end = ms->t_end();
  c.n_pressure = n * n / q;
  c.q_ratio = q;
  c.output_directory = "output/" + id;
  validate_config(c);
  return c;
}

RunConfig scenario_config(const std::string& id) {
  if (id == "e1" || id == "e2") return manufactured_config(id, 20, 1);
  RunConfig c;
  if (id == "e3") {
    c = five_spot_base(id);
    c.mobility_ratio = 1.0;
    c.alpha_m = 10.0;
  } else if (id == "e4" || id == "e5" || id == "e6") {
    c = five_spot_base(id);
    c.mobility_ratio = 41.0;
    c.alpha_m = 5.0;
    c.alpha_l = 50.0;
    c.alpha_t = 5.0;
    if (id == "e5") {
      c.permeability = 20.0;
      c.permeability_zones = {Zone{0.0, 1000.0, 0.0, 500.0, 80.0}};
    } else if (id == "e6") {
      c.porosity_zones = {Zone{150.0, 550.0, 150.0, 550.0, 0.09}};
      c.permeability_zones = {Zone{150.0, 550.0, 150.0, 550.0, 25.0}};
      c.snapshot_times = {1080.0, 1800.0, 2520.0, 3600.0};
    }
  } else {
    throw ConfigError("unknown scenario '" + id + "'");
  }
  validate_config(c);
  return c;
}

PhysicsConfig physics_from_config(const RunConfig& config) {
  PhysicsConfig ph;
  ph.porosity = [base = config.porosity, zones = config.porosity_zones](double x, double y) {
    return zoned(base, zones, x, y);
  };
  ph.permeability = [base = config.permeability, zones = config.permeability_zones](double x, double y) {
    return zoned(base, zones, x, y);
  };
  ph.viscosity = ViscosityModel::quarter_power(config.mu0, config.mobility_ratio);
  ph.dispersion.alpha_m = [a = config.alpha_m](double, double) { return a; };
  ph.dispersion.alpha_l = config.alpha_l;
  ph.dispersion.alpha_t = config.alpha_t;
  return ph;
}

RunSpec build_run_spec(const RunConfig& config) {
  validate_config(config);
  RunSpec spec;
  spec.name = config.scenario;
  spec.grid = build_grid(config.domain, config.nx, config.ny, config.bc);
  spec.time = TimeGrid(config.t_end, config.n_pressure, config.q_ratio);
  spec.snapshot_times = config.snapshot_times;

  if (config.is_manufactured()) {
    const auto ms = make_manufactured(config.manufactured);
    spec.physics = ms->physics();
    spec.check_compatibility = false;
    spec.project_source = true;
    spec.sources = [ms](const GridSpec& g, double t) {
      return SourceFields{
          sample_function([ms](double x, double y, double s) { return ms->divergence(x, y, s); }, Location::Cell, t, g),
          sample_function([ms](double x, double y, double s) { return ms->forcing(x, y, s); }, Location::Cell, t, g),
          sample_function([ms](double x, double y, double s) { return ms->q_production(x, y, s); }, Location::Cell, t,
                          g)};
    };
    spec.darcy = [ms](const GridSpec& g, double t) {
      return DarcyForcing{
          sample_function([ms](double x, double y, double s) { return ms->darcy(Axis::X, x, y, s); }, Location::XFace,
                          t, g),
          sample_function([ms](double x, double y, double s) { return ms->darcy(Axis::Y, x, y, s); }, Location::YFace,
                          t, g)};
    };
    spec.initial_c = [ms](double x, double y, double t) { return ms->c(x, y, t).v; };
    spec.initial_vx = [ms](double x, double y, double t) { return -ms->c(x, y, t).x; };
    spec.initial_vy = [ms](double x, double y, double t) { return -ms->c(x, y, t).y; };
    spec.errors = [ms](const OperatorContext& ctx, const Field& C, const PressureSolution& sol, double t) {
      const GridSpec& g = ctx.grid();
      const Field ce = sample_function([ms](double x, double y, double s) { return ms->c(x, y, s).v; }, Location::Cell,
                                       t, g);
      const Field pe = sample_function([ms](double x, double y, double s) { return ms->p(x, y, s).v; }, Location::Cell,
                                       t, g);
      const Field uxe = sample_function([ms](double x, double y, double s) { return ms->ux(x, y, s).v; },
                                        Location::XFace, t, g);
      const Field uye = sample_function([ms](double x, double y, double s) { return ms->uy(x, y, s).v; },
                                        Location::YFace, t, g);
      return error_norms(ctx, C, sol.P, sol.Ux, sol.Uy, ce, pe, uxe, uye);
    };
    return spec;
  }

  spec.physics = physics_from_config(config);
  std::vector<PointWell> wells = config.injectors;
  wells.insert(wells.end(), config.producers.begin(), config.producers.end());
  const SourceFields fixed = well_source_fields(wells, spec.grid);
  spec.sources = [fixed](const GridSpec&, double) { return fixed; };
  spec.initial_c = [c0 = config.initial_concentration](double, double, double) { return c0; };
  spec.initial_vx = [](double, double, double) { return 0.0; };
  spec.initial_vy = [](double, double, double) { return 0.0; };
  return spec;
}

}  // namespace cbcfd
