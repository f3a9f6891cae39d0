#pragma once

/// @file transport_solver.hpp
/// @brief Crank-Nicolson compact concentration step.
///
/// Unknowns (C, V^x, V^y) at the new time level; W is recovered explicitly:
///   W^x = U^x T_x C + D11 V^x + D12 H_x V^y
///   W^y = U^y T_y C + D21 H_y V^x + D22 V^y
/// Block system
///   [A1 A2 A3; delta_x L_x 0; delta_y 0 L_y] (C, V^x, V^y) = (F, 0, 0)
///   A1 w = (2/dt) L[phi w] - L[q_P w] + L_y delta_x [U^x T_x w] + L_x delta_y [U^y T_y w]
/// Production solves eliminate V = -L^{-1} delta C and run GMRES on C.

#include <optional>

#include "cbcfd/linsolve.hpp"
#include "cbcfd/operators.hpp"
#include "cbcfd/physics.hpp"

namespace cbcfd {

struct FacePair {
  Field x;
  Field y;
};

struct TransportState {
  Field C;
  Field Vx;
  Field Vy;
  Field Wx;
  Field Wy;
  double t = 0.0;
};

/// Two pressure-time velocities; U_# is the straight line through them.
/// Before the first pressure update the pair is (U^0, U^{1,*}) and U_# is
/// interpolated on [t_a, t_b]; afterwards it is extrapolated on (t_b, t_b + dt_p].
class VelocityHistory {
 public:
  VelocityHistory(FacePair u0, double t0);

  void set_predictor(FacePair u_pred, double t1);
  /// Records the velocity of a completed pressure update.
  void push(FacePair u, double t);

  [[nodiscard]] int level() const { return level_; }
  [[nodiscard]] double t_a() const { return t_a_; }
  [[nodiscard]] double t_b() const { return t_b_; }
  [[nodiscard]] const FacePair& u_a() const { return a_; }
  [[nodiscard]] const FacePair& u_b() const { return *b_; }

 private:
  friend FacePair extrapolate_velocity(const VelocityHistory& h, double t);
  FacePair a_;
  std::optional<FacePair> b_;
  double t_a_;
  double t_b_ = 0.0;
  int level_ = -1;  ///< -1: U^0 only, 0: predictor set, m >= 1 afterwards
};

/// U_# at t; throws std::out_of_range outside the admissible window.
FacePair extrapolate_velocity(const VelocityHistory& history, double t);

/// Coefficients of one step: velocity, face dispersion, porosity, q_P.
struct TransportCoefficients {
  Field Ux;
  Field Uy;
  Field d11;
  Field d12;
  Field d21;
  Field d22;
  Field phi;
  Field qP;
  double dt = 0.0;
};

class TransportSolver {
 public:
  struct Options {
    double tol_rel = 1e-12;
    /// Stagnation above tol_rel is accepted up to this level (rounding floor).
    double accept_rel = 1e-10;
    int max_iter = 400;
    int restart = 60;
    /// Refactor the lagged preconditioner when a solve needs more iterations.
    int refactor_iterations = 12;
  };

  TransportSolver(const OperatorContext& ctx, const PhysicsConfig& physics, Options options);
  TransportSolver(const OperatorContext& ctx, const PhysicsConfig& physics);

  [[nodiscard]] const OperatorContext& context() const { return ctx_; }
  [[nodiscard]] const Field& porosity() const { return phi_; }

  /// D evaluated with the face-collocated velocity (U^x, H_x U^y) / (H_y U^x, U^y);
  /// zero on no-flow boundary faces.
  [[nodiscard]] TransportCoefficients coefficients(const FacePair& u_sharp, const Field& qP, double dt) const;

  /// Flux recovery W(C, V).
  [[nodiscard]] FacePair flux(const TransportCoefficients& k, const Field& C, const Field& Vx, const Field& Vy) const;
  /// V = -L^{-1} delta C (zero on no-flow boundary faces).
  [[nodiscard]] FacePair gradient(const Field& C) const;

  /// W^0 from the scheme form with U_# = U^0.
  [[nodiscard]] FacePair initial_W(const Field& C0, const Field& Vx0, const Field& Vy0, const FacePair& U0) const;

  /// Row-wise action of the block operator (matrix free).
  void block_apply(const TransportCoefficients& k, const Field& C, const Field& Vx, const Field& Vy, Field& r1,
                   Field& r2, Field& r3) const;
  /// Assembled block matrix on (C, V^x, V^y) stacked in that order.
  [[nodiscard]] SparseMatrix block_matrix(const TransportCoefficients& k) const;
  /// Right-hand side of the first block row.
  [[nodiscard]] Field rhs(const TransportCoefficients& k, const TransportState& state, const Field& qIcI) const;

  /// Reduced operator S C = A1 C + A2 V^x(C) + A3 V^y(C).
  [[nodiscard]] Field reduced_apply(const TransportCoefficients& k, const Field& C) const;

  /// One step from state to state.t + dt; U_# at the new level, sources at the midpoint.
  TransportState step(const TransportState& state, const FacePair& u_sharp, const Field& qP_mid,
                      const Field& qIcI_mid, double dt);

  [[nodiscard]] int solves() const { return solves_; }
  [[nodiscard]] int factorizations() const { return factorizations_; }
  [[nodiscard]] const SolveStats& last_stats() const { return last_; }

 private:
  [[nodiscard]] SparseMatrix preconditioner_matrix(const TransportCoefficients& k) const;

  const OperatorContext& ctx_;
  const PhysicsConfig& physics_;
  Options opt_;
  Field phi_;
  SparseLUPreconditioner pre_;
  double pre_dt_ = -1.0;
  int last_iterations_ = 0;
  int solves_ = 0;
  int factorizations_ = 0;
  SolveStats last_;

  // cached operator matrices
  SparseMatrix lc_, lyc_, lxc_, dxf_, dyf_, dxc_, dyc_, tx_, ty_;
};

}  // namespace cbcfd
