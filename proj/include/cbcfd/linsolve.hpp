#pragma once

/// @file linsolve.hpp
/// @brief Krylov and direct solvers shared by the pressure and transport steps.

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <stdexcept>

#include "cbcfd/operators.hpp"

namespace cbcfd {

using Vector = Eigen::VectorXd;
/// y = A x; y is sized by the callee.
using LinearMap = std::function<void(const Vector& x, Vector& y)>;

struct SolveStats {
  double residual = 0.0;  ///< ||b - A x|| / ||b|| (0 when b = 0)
  int iterations = 0;
  bool used_dense_fallback = false;
};

/// Thrown when a solve does not reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  [[nodiscard]] double residual() const { return residual_; }
  [[nodiscard]] int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

struct KrylovOptions {
  double tol_rel = 1e-12;
  int max_iter = 1000;
  int restart = 60;
};

/// Restarted GMRES with optional right preconditioner (z = M^{-1} v).
/// x holds the initial guess on entry.  Does not throw on non-convergence;
/// check the returned residual.
SolveStats gmres(const LinearMap& op, const Vector& b, Vector& x, const LinearMap* precond, const KrylovOptions& opt);

/// Columns A e_k of a matrix-free operator.
Eigen::MatrixXd probe_dense(const LinearMap& op, int n);

/// Matrix plus optional matrix-free action (used instead of the matrix when set).
struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;
  LinearMap action;
  [[nodiscard]] int dimension() const { return static_cast<int>(rhs.size()); }
};

inline constexpr int kDenseFallbackLimit = 12288;

/// GMRES with a Jacobi preconditioner; on failure falls back to a dense LU
/// for dimension <= kDenseFallbackLimit.  Throws SolverError if the final
/// residual exceeds tol_rel.
Vector solve(const SparseSystem& system, double tol_rel, int max_iter, SolveStats* stats = nullptr);

/// Dense LU of a probed operator; throws SolverError when the residual
/// exceeds tol_rel (e.g. singular systems).
Vector dense_solve(const LinearMap& op, const Vector& b, double tol_rel, SolveStats* stats = nullptr);

/// Sparse LU used as a preconditioner.
class SparseLUPreconditioner {
 public:
  void factor(const SparseMatrix& m);
  [[nodiscard]] bool ready() const { return ready_; }
  void apply(const Vector& v, Vector& z) const;
  [[nodiscard]] LinearMap as_map() const;

 private:
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
  bool ready_ = false;
};

}  // namespace cbcfd
