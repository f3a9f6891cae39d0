#pragma once

/// @file pressure_solver.hpp
/// @brief Compact pressure/velocity solve through the Schur system in P.
///
///   L_y delta_x U^x + L_x delta_y U^y = L q
///   L_x [a U^x] + delta_x P = r^x,   L_y [a U^y] + delta_y P = r^y
///
/// r = 0 for physical runs; manufactured runs pass r = L[a(c) u + grad p]
/// so that the prescribed u and p solve the continuous problem.
/// Eliminating U gives A(P) = b with
///   A(P) = -L_x^{-1} delta_x [a^{-1} L_x^{-1} delta_x P] - (same in y).
/// P(0,0) = 0 replaces the first equation.

#include <optional>

#include "cbcfd/linsolve.hpp"
#include "cbcfd/operators.hpp"
#include "cbcfd/physics.hpp"

namespace cbcfd {

struct PressureSolution {
  Field P;
  Field Ux;
  Field Uy;
  double residual = 0.0;
  int iterations = 0;
};

/// Face-sampled Darcy residual g = a(c) u + grad p (manufactured runs only).
struct DarcyForcing {
  Field gx;
  Field gy;
};

struct PressureOptions {
  double tol_rel = 1e-12;
  /// Stagnation above tol_rel is accepted up to this level (rounding floor).
  double accept_rel = 1e-10;
  int max_iter = 400;
  int dense_fallback_cells = 4096;
};

/// a = mu(T C) / k at x- and y-faces.
std::pair<Field, Field> mobility_faces(const OperatorContext& ctx, const Field& C, const PhysicsConfig& physics);

class PressureOperator {
 public:
  PressureOperator(const OperatorContext& ctx, Field ax, Field ay);

  /// Unpinned A(P).
  [[nodiscard]] Field apply(const Field& P) const;
  /// Pinned action on flat vectors (row 0 replaced by the identity).
  void apply_pinned(const Vector& x, Vector& y) const;
  /// Second-order analogue -delta(a^{-1} delta) with the same pin.
  [[nodiscard]] SparseMatrix preconditioner_matrix() const;
  /// U = a^{-1} L^{-1}(r - delta P); r may be absent.
  [[nodiscard]] std::pair<Field, Field> velocity(const Field& P, const Field* rx, const Field* ry) const;
  /// Reduced right-hand side q - sum L^{-1} delta_k (a^{-1} L_k^{-1} r^k).
  [[nodiscard]] Field rhs(const Field& q, const Field* rx, const Field* ry) const;

  [[nodiscard]] const Field& ax() const { return ax_; }
  [[nodiscard]] const Field& ay() const { return ay_; }

 private:
  const OperatorContext& ctx_;
  Field ax_;
  Field ay_;
  Field inv_ax_;
  Field inv_ay_;
};

/// Solves for (P, U) given the concentration at the pressure time.
/// Throws std::invalid_argument on non-positive mobility and SolverError on
/// solver failure.
PressureSolution solve_pressure_velocity(const OperatorContext& ctx, const Field& C, const Field& q,
                                         const PhysicsConfig& physics, const DarcyForcing* forcing = nullptr,
                                         const PressureOptions& options = {});

/// || L_y delta_x U^x + L_x delta_y U^y - L q ||_M
double divergence_residual(const OperatorContext& ctx, const Field& Ux, const Field& Uy, const Field& q);

}  // namespace cbcfd
