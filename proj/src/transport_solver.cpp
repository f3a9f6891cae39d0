#include "cbcfd/transport_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cbcfd {

VelocityHistory::VelocityHistory(FacePair u0, double t0) : a_(std::move(u0)), t_a_(t0) {}

void VelocityHistory::set_predictor(FacePair u_pred, double t1) {
  if (level_ != -1) throw std::logic_error("predictor velocity already set");
  if (!(t1 > t_a_)) throw std::invalid_argument("predictor time must follow the initial time");
  b_ = std::move(u_pred);
  t_b_ = t1;
  level_ = 0;
}

void VelocityHistory::push(FacePair u, double t) {
  if (level_ < 0) throw std::logic_error("push before the predictor velocity");
  if (level_ >= 1) {
    a_ = std::move(*b_);
    t_a_ = t_b_;
  }
  b_ = std::move(u);
  t_b_ = t;
  ++level_;
}

FacePair extrapolate_velocity(const VelocityHistory& h, double t) {
  if (h.level_ < 0) throw std::out_of_range("U_#: predictor velocity not available");
  const double span = h.t_b_ - h.t_a_;
  const double slack = 1e-9 * span;
  bool ok = false;
  if (h.level_ == 0) {
    ok = t >= h.t_a_ - slack && t <= h.t_b_ + slack;
  } else {
    ok = t > h.t_b_ - slack && t <= h.t_b_ + span + slack;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "U_#: time " << t << " outside the admissible window of level " << h.level_;
    throw std::out_of_range(msg.str());
  }
  const double wb = (t - h.t_a_) / span;
  const double wa = -(t - h.t_b_) / span;
  FacePair out{wa * h.a_.x, wa * h.a_.y};
  out.x.axpy(wb, h.b_->x);
  out.y.axpy(wb, h.b_->y);
  return out;
}

namespace {

Vector as_vector(const Field& f) {
  return Eigen::Map<const Vector>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

Field as_field(const GridSpec& grid, Location loc, const double* data) {
  Field f(grid, loc);
  std::copy(data, data + f.size(), f.values().begin());
  return f;
}

void zero_boundary_faces(Field& f, Axis axis) {
  if (f.grid().periodic()) return;
  if (axis == Axis::X) {
    for (int j = 0; j < f.n1(); ++j) {
      f(0, j) = 0.0;
      f(f.n0() - 1, j) = 0.0;
    }
  } else {
    for (int i = 0; i < f.n0(); ++i) {
      f(i, 0) = 0.0;
      f(i, f.n1() - 1) = 0.0;
    }
  }
}

SparseMatrix diag(const Field& f) {
  SparseMatrix d(static_cast<Eigen::Index>(f.size()), static_cast<Eigen::Index>(f.size()));
  d.reserve(Eigen::VectorXi::Constant(static_cast<Eigen::Index>(f.size()), 1));
  for (std::size_t k = 0; k < f.size(); ++k) d.insert(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = f.values()[k];
  return d;
}

// Identity on the boundary faces of a no-flow face field, zero elsewhere.
SparseMatrix boundary_identity(const GridSpec& grid, Location loc) {
  const auto [n0, n1] = grid.shape(loc);
  SparseMatrix m(n0 * n1, n0 * n1);
  if (grid.periodic()) return m;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const bool edge = loc == Location::XFace ? (i == 0 || i == n0 - 1) : (j == 0 || j == n1 - 1);
      if (edge) t.emplace_back(i * n1 + j, i * n1 + j, 1.0);
    }
  }
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TransportSolver::TransportSolver(const OperatorContext& ctx, const PhysicsConfig& physics)
    : TransportSolver(ctx, physics, Options{}) {}

TransportSolver::TransportSolver(const OperatorContext& ctx, const PhysicsConfig& physics, Options options)
    : ctx_(ctx),
      physics_(physics),
      opt_(options),
      phi_(sample_function([&physics](double x, double y, double) { return physics.porosity(x, y); }, Location::Cell,
                           0.0, ctx.grid())) {
  lxc_ = ctx.L_matrix(Axis::X, Location::Cell);
  lyc_ = ctx.L_matrix(Axis::Y, Location::Cell);
  lc_ = lxc_ * lyc_;
  dxf_ = ctx.delta_matrix(Axis::X, Location::XFace);
  dyf_ = ctx.delta_matrix(Axis::Y, Location::YFace);
  dxc_ = ctx.delta_matrix(Axis::X, Location::Cell);
  dyc_ = ctx.delta_matrix(Axis::Y, Location::Cell);
  tx_ = ctx.T_matrix(Axis::X, Location::Cell);
  ty_ = ctx.T_matrix(Axis::Y, Location::Cell);
}

TransportCoefficients TransportSolver::coefficients(const FacePair& u, const Field& qP, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("transport step: dt must be positive");
  const GridSpec& grid = ctx_.grid();
  TransportCoefficients k{u.x,
                          u.y,
                          Field(grid, Location::XFace),
                          Field(grid, Location::XFace),
                          Field(grid, Location::YFace),
                          Field(grid, Location::YFace),
                          phi_,
                          qP,
                          dt};
  const Field uy_at_x = ctx_.apply_H(Axis::X, u.y);
  const Field ux_at_y = ctx_.apply_H(Axis::Y, u.x);
  for (int i = 0; i < k.d11.n0(); ++i) {
    const double x = k.d11.x(i);
    for (int j = 0; j < k.d11.n1(); ++j) {
      const DispersionTensor d = dispersion_tensor(physics_, x, k.d11.y(j), u.x(i, j), uy_at_x(i, j));
      k.d11(i, j) = d.d11;
      k.d12(i, j) = d.d12;
    }
  }
  for (int i = 0; i < k.d21.n0(); ++i) {
    const double x = k.d21.x(i);
    for (int j = 0; j < k.d21.n1(); ++j) {
      const DispersionTensor d = dispersion_tensor(physics_, x, k.d21.y(j), ux_at_y(i, j), u.y(i, j));
      k.d21(i, j) = d.d21();
      k.d22(i, j) = d.d22;
    }
  }
  zero_boundary_faces(k.Ux, Axis::X);
  zero_boundary_faces(k.d11, Axis::X);
  zero_boundary_faces(k.d12, Axis::X);
  zero_boundary_faces(k.Uy, Axis::Y);
  zero_boundary_faces(k.d21, Axis::Y);
  zero_boundary_faces(k.d22, Axis::Y);
  return k;
}

FacePair TransportSolver::flux(const TransportCoefficients& k, const Field& C, const Field& Vx, const Field& Vy) const {
  Field wx = pointwise(ctx_.apply_T(Axis::X, Direction::CellToFace, C), k.Ux);
  wx += pointwise(Vx, k.d11);
  wx += pointwise(ctx_.apply_H(Axis::X, Vy), k.d12);
  Field wy = pointwise(ctx_.apply_T(Axis::Y, Direction::CellToFace, C), k.Uy);
  wy += pointwise(ctx_.apply_H(Axis::Y, Vx), k.d21);
  wy += pointwise(Vy, k.d22);
  return {std::move(wx), std::move(wy)};
}

FacePair TransportSolver::gradient(const Field& C) const {
  Field vx = ctx_.solve_L(Axis::X, ctx_.delta(Axis::X, C));
  Field vy = ctx_.solve_L(Axis::Y, ctx_.delta(Axis::Y, C));
  vx *= -1.0;
  vy *= -1.0;
  return {std::move(vx), std::move(vy)};
}

FacePair TransportSolver::initial_W(const Field& C0, const Field& Vx0, const Field& Vy0, const FacePair& U0) const {
  const TransportCoefficients k = coefficients(U0, Field(ctx_.grid(), Location::Cell), 1.0);
  return flux(k, C0, Vx0, Vy0);
}

void TransportSolver::block_apply(const TransportCoefficients& k, const Field& C, const Field& Vx, const Field& Vy,
                                  Field& r1, Field& r2, Field& r3) const {
  const FacePair w = flux(k, C, Vx, Vy);
  Field mass = pointwise(C, k.phi);
  mass *= 2.0 / k.dt;
  mass -= pointwise(C, k.qP);
  r1 = ctx_.apply_L_both(mass);
  r1 += ctx_.apply_L(Axis::Y, ctx_.delta(Axis::X, w.x));
  r1 += ctx_.apply_L(Axis::X, ctx_.delta(Axis::Y, w.y));

  r2 = ctx_.delta(Axis::X, C);
  r2 += ctx_.apply_L(Axis::X, Vx);
  r3 = ctx_.delta(Axis::Y, C);
  r3 += ctx_.apply_L(Axis::Y, Vy);
  if (!ctx_.grid().periodic()) {
    for (int j = 0; j < r2.n1(); ++j) {
      r2(0, j) = Vx(0, j);
      r2(r2.n0() - 1, j) = Vx(r2.n0() - 1, j);
    }
    for (int i = 0; i < r3.n0(); ++i) {
      r3(i, 0) = Vy(i, 0);
      r3(i, r3.n1() - 1) = Vy(i, r3.n1() - 1);
    }
  }
}

SparseMatrix TransportSolver::block_matrix(const TransportCoefficients& k) const {
  const GridSpec& grid = ctx_.grid();
  const SparseMatrix hx = ctx_.H_matrix(Axis::X);
  const SparseMatrix hy = ctx_.H_matrix(Axis::Y);
  const SparseMatrix lyd = lyc_ * dxf_;
  const SparseMatrix lxd = lxc_ * dyf_;
  SparseMatrix dphi = diag(k.phi);
  dphi *= 2.0 / k.dt;
  const SparseMatrix a1 = SparseMatrix(lc_ * (dphi - diag(k.qP))) + SparseMatrix(lyd * diag(k.Ux) * tx_) +
                          SparseMatrix(lxd * diag(k.Uy) * ty_);
  const SparseMatrix a2 = SparseMatrix(lyd * diag(k.d11)) + SparseMatrix(lxd * diag(k.d21) * hy);
  const SparseMatrix a3 = SparseMatrix(lyd * diag(k.d12) * hx) + SparseMatrix(lxd * diag(k.d22));
  const SparseMatrix bx = boundary_identity(grid, Location::XFace);
  const SparseMatrix by = boundary_identity(grid, Location::YFace);
  const SparseMatrix lxf = SparseMatrix(ctx_.L_matrix(Axis::X, Location::XFace)) + bx;
  const SparseMatrix lyf = SparseMatrix(ctx_.L_matrix(Axis::Y, Location::YFace)) + by;

  const Eigen::Index nc = static_cast<Eigen::Index>(grid.size(Location::Cell));
  const Eigen::Index nx = static_cast<Eigen::Index>(grid.size(Location::XFace));
  const Eigen::Index ny = static_cast<Eigen::Index>(grid.size(Location::YFace));
  std::vector<Eigen::Triplet<double>> t;
  auto put = [&t](const SparseMatrix& m, Eigen::Index r0, Eigen::Index c0) {
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
    }
  };
  put(a1, 0, 0);
  put(a2, 0, nc);
  put(a3, 0, nc + nx);
  put(dxc_, nc, 0);
  put(lxf, nc, nc);
  put(dyc_, nc + nx, 0);
  put(lyf, nc + nx, nc + nx);
  SparseMatrix m(nc + nx + ny, nc + nx + ny);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Field TransportSolver::rhs(const TransportCoefficients& k, const TransportState& s, const Field& qIcI) const {
  Field src = qIcI;
  src *= 2.0;
  Field mass = pointwise(s.C, k.phi);
  src.axpy(2.0 / k.dt, mass);
  src += pointwise(s.C, k.qP);
  Field f = ctx_.apply_L_both(src);
  f -= ctx_.apply_L(Axis::Y, ctx_.delta(Axis::X, s.Wx));
  f -= ctx_.apply_L(Axis::X, ctx_.delta(Axis::Y, s.Wy));
  return f;
}

Field TransportSolver::reduced_apply(const TransportCoefficients& k, const Field& C) const {
  const FacePair v = gradient(C);
  const FacePair w = flux(k, C, v.x, v.y);
  Field mass = pointwise(C, k.phi);
  mass *= 2.0 / k.dt;
  mass -= pointwise(C, k.qP);
  Field r = ctx_.apply_L_both(mass);
  r += ctx_.apply_L(Axis::Y, ctx_.delta(Axis::X, w.x));
  r += ctx_.apply_L(Axis::X, ctx_.delta(Axis::Y, w.y));
  return r;
}

SparseMatrix TransportSolver::preconditioner_matrix(const TransportCoefficients& k) const {
  // V ~ -delta C and only the principal dispersion terms
  SparseMatrix dphi = diag(k.phi);
  dphi *= 2.0 / k.dt;
  const SparseMatrix lyd = lyc_ * dxf_;
  const SparseMatrix lxd = lxc_ * dyf_;
  SparseMatrix m = SparseMatrix(lc_ * (dphi - diag(k.qP))) + SparseMatrix(lyd * diag(k.Ux) * tx_) +
                   SparseMatrix(lxd * diag(k.Uy) * ty_) - SparseMatrix(lyd * diag(k.d11) * dxc_) -
                   SparseMatrix(lxd * diag(k.d22) * dyc_);
  m.prune(0.0);
  return m;
}

TransportState TransportSolver::step(const TransportState& state, const FacePair& u_sharp, const Field& qP_mid,
                                     const Field& qIcI_mid, double dt) {
  const GridSpec& grid = ctx_.grid();
  const TransportCoefficients k = coefficients(u_sharp, qP_mid, dt);
  const Field f = rhs(k, state, qIcI_mid);
  const Vector b = as_vector(f);

  const LinearMap op = [&](const Vector& x, Vector& y) {
    const Field c = as_field(grid, Location::Cell, x.data());
    y = as_vector(reduced_apply(k, c));
  };
  if (!pre_.ready() || pre_dt_ != dt || last_iterations_ > opt_.refactor_iterations) {
    pre_.factor(preconditioner_matrix(k));
    pre_dt_ = dt;
    ++factorizations_;
  }
  const LinearMap pmap = pre_.as_map();
  KrylovOptions kopt;
  kopt.tol_rel = opt_.tol_rel;
  kopt.max_iter = opt_.max_iter;
  kopt.restart = opt_.restart;
  Vector x = as_vector(state.C);
  SolveStats stats = gmres(op, b, x, &pmap, kopt);
  if (stats.residual > opt_.tol_rel) {
    // fresh factorisation before giving up
    pre_.factor(preconditioner_matrix(k));
    ++factorizations_;
    const LinearMap fresh = pre_.as_map();
    const int its = stats.iterations;
    stats = gmres(op, b, x, &fresh, kopt);
    stats.iterations += its;
    if (stats.residual > opt_.accept_rel) {
      if (static_cast<int>(b.size()) * 3 <= kDenseFallbackLimit) {
        x = dense_solve(op, b, opt_.accept_rel, &stats);
      } else {
        std::ostringstream msg;
        msg << "concentration solve did not converge at t=" << state.t + dt << ": relative residual "
            << stats.residual;
        throw SolverError(msg.str(), stats.residual, stats.iterations);
      }
    }
  }
  last_iterations_ = stats.iterations;
  last_ = stats;
  ++solves_;

  TransportState next{as_field(grid, Location::Cell, x.data()), Field(grid, Location::XFace),
                      Field(grid, Location::YFace), Field(grid, Location::XFace), Field(grid, Location::YFace),
                      state.t + dt};
  FacePair v = gradient(next.C);
  next.Vx = std::move(v.x);
  next.Vy = std::move(v.y);
  FacePair w = flux(k, next.C, next.Vx, next.Vy);
  next.Wx = std::move(w.x);
  next.Wy = std::move(w.y);
  return next;
}

}  // namespace cbcfd
