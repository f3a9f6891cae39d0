#include "cbcfd/physics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cbcfd/operators.hpp"

namespace cbcfd {

ViscosityModel ViscosityModel::quarter_power(double mu0, double mobility_ratio) {
  if (!(mu0 > 0.0) || !(mobility_ratio > 0.0)) {
    throw std::invalid_argument("quarter-power viscosity needs mu0 > 0 and M > 0");
  }
  ViscosityModel m;
  m.kind_ = Kind::QuarterPower;
  m.mu0_ = mu0;
  m.ratio_ = mobility_ratio;
  m.ratio_quarter_ = std::pow(mobility_ratio, 0.25);
  return m;
}

ViscosityModel ViscosityModel::analytic(std::function<double(double)> mu, std::string name) {
  ViscosityModel m;
  m.kind_ = Kind::Analytic;
  m.law_ = std::move(mu);
  m.name_ = std::move(name);
  return m;
}

double ViscosityModel::operator()(double c) const {
  if (kind_ == Kind::Analytic) return law_(c);
  const double cc = std::clamp(c, -0.1, 1.1);
  const double base = ratio_quarter_ * cc + (1.0 - cc);
  if (!(base > 0.0)) {
    std::ostringstream msg;
    msg << "quarter-power viscosity: non-positive bracket at c=" << c;
    throw std::domain_error(msg.str());
  }
  const double b2 = base * base;
  return mu0_ / (b2 * b2);
}

DispersionTensor dispersion_tensor(const PhysicsConfig& physics, double x, double y, double ux, double uy) {
  const DispersionParams& p = physics.dispersion;
  const double phi = physics.porosity(x, y);
  const double am = p.alpha_m(x, y);
  DispersionTensor d{am, 0.0, am};
  if (p.alpha_uu != 0.0) {
    d.d11 += p.alpha_uu * ux * ux;
    d.d12 += p.alpha_uu * ux * uy;
    d.d22 += p.alpha_uu * uy * uy;
  }
  const double norm = std::hypot(ux, uy);
  if ((p.alpha_l != 0.0 || p.alpha_t != 0.0) && norm > p.eps_u) {
    // |u| E = u u^T / |u|, |u| E_perp = |u| I - u u^T / |u|
    const double inv = 1.0 / norm;
    const double exx = ux * ux * inv;
    const double exy = ux * uy * inv;
    const double eyy = uy * uy * inv;
    d.d11 += p.alpha_l * exx + p.alpha_t * (norm - exx);
    d.d12 += (p.alpha_l - p.alpha_t) * exy;
    d.d22 += p.alpha_l * eyy + p.alpha_t * (norm - eyy);
  }
  d.d11 *= phi;
  d.d12 *= phi;
  d.d22 *= phi;
  return d;
}

SourceFields zero_sources(const GridSpec& grid) {
  return {Field(grid, Location::Cell), Field(grid, Location::Cell), Field(grid, Location::Cell)};
}

namespace {

int containing_cell(double coord, double lo, double h, int n) {
  const int k = static_cast<int>(std::floor((coord - lo) / h));
  return std::clamp(k, 0, n - 1);
}

}  // namespace

SourceFields well_source_fields(const std::vector<PointWell>& wells, const GridSpec& grid) {
  SourceFields s = zero_sources(grid);
  const Domain& d = grid.domain();
  const double inv_area = 1.0 / grid.cell_area();
  for (const PointWell& w : wells) {
    const double tol = 1e-9 * std::max(d.width(), d.height());
    if (w.x < d.x_lo - tol || w.x > d.x_hi + tol || w.y < d.y_lo - tol || w.y > d.y_hi + tol) {
      std::ostringstream msg;
      msg << "well at (" << w.x << ", " << w.y << ") lies outside the domain";
      throw std::invalid_argument(msg.str());
    }
    const int i = containing_cell(w.x, d.x_lo, grid.hx(), grid.nx());
    const int j = containing_cell(w.y, d.y_lo, grid.hy(), grid.ny());
    const double v = w.rate * inv_area;
    s.q(i, j) += v;
    if (w.rate > 0.0) {
      s.qI_cI(i, j) += w.concentration * v;
    } else {
      s.qP(i, j) += v;
    }
  }
  return s;
}

double compatibility_defect(const OperatorContext& ctx, const Field& q) {
  const Field lq = ctx.apply_L_both(q);
  CompensatedSum sum;
  for (double v : lq.values()) sum.add(v);
  return sum.value() * q.grid().cell_area();
}

void require_compatible_source(const OperatorContext& ctx, const Field& q, double tol) {
  const double defect = compatibility_defect(ctx, q);
  double scale = 0.0;
  for (double v : q.values()) scale += std::abs(v);
  scale *= q.grid().cell_area();
  if (std::abs(defect) > tol * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg << "incompatible source: sum(L q) hx hy = " << defect;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace cbcfd
