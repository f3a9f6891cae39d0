#include "cbcfd/pressure_solver.hpp"

#include <cmath>
#include <sstream>

namespace cbcfd {

std::pair<Field, Field> mobility_faces(const OperatorContext& ctx, const Field& C, const PhysicsConfig& physics) {
  if (C.location() != Location::Cell) throw LocationError("mobility_faces expects a cell concentration");
  Field ax = ctx.apply_T(Axis::X, Direction::CellToFace, C);
  Field ay = ctx.apply_T(Axis::Y, Direction::CellToFace, C);
  for (Field* f : {&ax, &ay}) {
    for (int i = 0; i < f->n0(); ++i) {
      const double x = f->x(i);
      for (int j = 0; j < f->n1(); ++j) {
        (*f)(i, j) = physics.viscosity((*f)(i, j)) / physics.permeability(x, f->y(j));
      }
    }
  }
  return {std::move(ax), std::move(ay)};
}

namespace {

Field reciprocal(const Field& a) {
  Field out = a;
  for (double& v : out.values()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "pressure operator: non-positive mobility " << v;
      throw std::invalid_argument(msg.str());
    }
    v = 1.0 / v;
  }
  return out;
}

Field to_field(const GridSpec& grid, Location loc, const Vector& v) {
  Field f(grid, loc);
  std::copy(v.data(), v.data() + v.size(), f.values().begin());
  return f;
}

}  // namespace

PressureOperator::PressureOperator(const OperatorContext& ctx, Field ax, Field ay)
    : ctx_(ctx), ax_(std::move(ax)), ay_(std::move(ay)), inv_ax_(reciprocal(ax_)), inv_ay_(reciprocal(ay_)) {}

Field PressureOperator::apply(const Field& P) const {
  Field fx = ctx_.solve_L(Axis::X, ctx_.delta(Axis::X, P));
  fx.multiply(inv_ax_);
  Field fy = ctx_.solve_L(Axis::Y, ctx_.delta(Axis::Y, P));
  fy.multiply(inv_ay_);
  Field out = ctx_.solve_L(Axis::X, ctx_.delta(Axis::X, fx));
  out += ctx_.solve_L(Axis::Y, ctx_.delta(Axis::Y, fy));
  out *= -1.0;
  return out;
}

void PressureOperator::apply_pinned(const Vector& x, Vector& y) const {
  const Field out = apply(to_field(ctx_.grid(), Location::Cell, x));
  y = Eigen::Map<const Vector>(out.values().data(), static_cast<Eigen::Index>(out.size()));
  y(0) = x(0);
}

SparseMatrix PressureOperator::preconditioner_matrix() const {
  const SparseMatrix dxc = ctx_.delta_matrix(Axis::X, Location::Cell);
  const SparseMatrix dxf = ctx_.delta_matrix(Axis::X, Location::XFace);
  const SparseMatrix dyc = ctx_.delta_matrix(Axis::Y, Location::Cell);
  const SparseMatrix dyf = ctx_.delta_matrix(Axis::Y, Location::YFace);
  const Vector ix = Eigen::Map<const Vector>(inv_ax_.values().data(), static_cast<Eigen::Index>(inv_ax_.size()));
  const Vector iy = Eigen::Map<const Vector>(inv_ay_.values().data(), static_cast<Eigen::Index>(inv_ay_.size()));
  SparseMatrix m = -(dxf * ix.asDiagonal() * dxc + dyf * iy.asDiagonal() * dyc);
  m.prune(0.0);
  // pin: identity in row 0
  for (SparseMatrix::InnerIterator it(m, 0); it; ++it) it.valueRef() = it.col() == 0 ? 1.0 : 0.0;
  m.prune(0.0);
  if (m.coeff(0, 0) == 0.0) m.coeffRef(0, 0) = 1.0;
  return m;
}

std::pair<Field, Field> PressureOperator::velocity(const Field& P, const Field* rx, const Field* ry) const {
  Field ux = ctx_.delta(Axis::X, P);
  Field uy = ctx_.delta(Axis::Y, P);
  ux *= -1.0;
  uy *= -1.0;
  if (rx != nullptr) ux += *rx;
  if (ry != nullptr) uy += *ry;
  ux = ctx_.solve_L(Axis::X, ux);
  uy = ctx_.solve_L(Axis::Y, uy);
  ux.multiply(inv_ax_);
  uy.multiply(inv_ay_);
  return {std::move(ux), std::move(uy)};
}

Field PressureOperator::rhs(const Field& q, const Field* rx, const Field* ry) const {
  Field b = q;
  if (rx != nullptr) {
    Field fx = ctx_.solve_L(Axis::X, *rx);
    fx.multiply(inv_ax_);
    b -= ctx_.solve_L(Axis::X, ctx_.delta(Axis::X, fx));
  }
  if (ry != nullptr) {
    Field fy = ctx_.solve_L(Axis::Y, *ry);
    fy.multiply(inv_ay_);
    b -= ctx_.solve_L(Axis::Y, ctx_.delta(Axis::Y, fy));
  }
  return b;
}

PressureSolution solve_pressure_velocity(const OperatorContext& ctx, const Field& C, const Field& q,
                                         const PhysicsConfig& physics, const DarcyForcing* forcing,
                                         const PressureOptions& options) {
  const GridSpec& grid = ctx.grid();
  auto [ax, ay] = mobility_faces(ctx, C, physics);
  const PressureOperator op(ctx, std::move(ax), std::move(ay));

  std::optional<Field> rx;
  std::optional<Field> ry;
  if (forcing != nullptr) {
    rx = ctx.apply_L(Axis::X, forcing->gx);
    ry = ctx.apply_L(Axis::Y, forcing->gy);
  }
  const Field* prx = rx ? &*rx : nullptr;
  const Field* pry = ry ? &*ry : nullptr;

  Field bfield = op.rhs(q, prx, pry);
  Vector b = Eigen::Map<const Vector>(bfield.values().data(), static_cast<Eigen::Index>(bfield.size()));
  b(0) = 0.0;

  const LinearMap apply = [&op](const Vector& x, Vector& y) { op.apply_pinned(x, y); };
  SparseLUPreconditioner pre;
  pre.factor(op.preconditioner_matrix());
  const LinearMap pmap = pre.as_map();

  KrylovOptions kopt;
  kopt.tol_rel = options.tol_rel;
  kopt.max_iter = options.max_iter;
  Vector x = Vector::Zero(b.size());
  SolveStats stats = gmres(apply, b, x, &pmap, kopt);
  if (stats.residual > options.accept_rel) {
    if (grid.nx() * grid.ny() <= options.dense_fallback_cells) {
      const int its = stats.iterations;
      x = dense_solve(apply, b, options.accept_rel, &stats);
      stats.iterations = its;
    } else {
      std::ostringstream msg;
      msg << "pressure solve did not converge: relative residual " << stats.residual;
      throw SolverError(msg.str(), stats.residual, stats.iterations);
    }
  }

  Field P = to_field(grid, Location::Cell, x);
  auto [ux, uy] = op.velocity(P, prx, pry);
  return PressureSolution{std::move(P), std::move(ux), std::move(uy), stats.residual, stats.iterations};
}

double divergence_residual(const OperatorContext& ctx, const Field& Ux, const Field& Uy, const Field& q) {
  Field r = ctx.apply_L(Axis::Y, ctx.delta(Axis::X, Ux));
  r += ctx.apply_L(Axis::X, ctx.delta(Axis::Y, Uy));
  r -= ctx.apply_L_both(q);
  return discrete_norm(InnerKind::M, r);
}

}  // namespace cbcfd
