#include "cbcfd/linsolve.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace cbcfd {

namespace {

void givens(double a, double b, double& c, double& s) {
  if (b == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  const double r = std::hypot(a, b);
  c = a / r;
  s = b / r;
}

}  // namespace

SolveStats gmres(const LinearMap& op, const Vector& b, Vector& x, const LinearMap* precond, const KrylovOptions& opt) {
  const Eigen::Index n = b.size();
  SolveStats stats;
  if (x.size() != n) x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    return stats;
  }
  const int m = std::max(1, std::min<int>(opt.restart, static_cast<int>(n)));
  std::vector<Vector> basis(m + 1);
  std::vector<Vector> zs(m);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  Vector cs(m);
  Vector sn(m);
  Vector g(m + 1);
  Vector w(n);
  Vector r(n);

  op(x, r);
  r = b - r;
  double beta = r.norm();
  int total = 0;
  while (true) {
    stats.residual = beta / bnorm;
    if (stats.residual <= opt.tol_rel || total >= opt.max_iter || !std::isfinite(beta)) break;
    basis[0] = r / beta;
    g.setZero();
    g(0) = beta;
    h.setZero();
    int k = 0;
    for (; k < m && total < opt.max_iter; ++k) {
      if (precond != nullptr) {
        (*precond)(basis[k], zs[k]);
      } else {
        zs[k] = basis[k];
      }
      op(zs[k], w);
      for (int i = 0; i <= k; ++i) {
        h(i, k) = w.dot(basis[i]);
        w -= h(i, k) * basis[i];
      }
      h(k + 1, k) = w.norm();
      for (int i = 0; i < k; ++i) {
        const double t = cs(i) * h(i, k) + sn(i) * h(i + 1, k);
        h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
        h(i, k) = t;
      }
      const double hk1 = h(k + 1, k);
      givens(h(k, k), hk1, cs(k), sn(k));
      h(k, k) = cs(k) * h(k, k) + sn(k) * hk1;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      ++total;
      const bool breakdown = hk1 <= 1e-300;
      if (!breakdown) basis[k + 1] = w / hk1;
      if (std::abs(g(k + 1)) <= opt.tol_rel * bnorm || breakdown) {
        ++k;
        break;
      }
    }
    Vector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    for (int i = 0; i < k; ++i) x += y(i) * zs[i];
    op(x, r);
    r = b - r;
    const double prev = beta;
    beta = r.norm();
    if (k == 0 || (beta >= prev && total >= opt.max_iter)) {
      stats.residual = beta / bnorm;
      break;
    }
  }
  stats.iterations = total;
  return stats;
}

Eigen::MatrixXd probe_dense(const LinearMap& op, int n) {
  Eigen::MatrixXd a(n, n);
  Vector e = Vector::Zero(n);
  Vector col(n);
  for (int k = 0; k < n; ++k) {
    e(k) = 1.0;
    op(e, col);
    a.col(k) = col;
    e(k) = 0.0;
  }
  return a;
}

Vector dense_solve(const LinearMap& op, const Vector& b, double tol_rel, SolveStats* stats) {
  const int n = static_cast<int>(b.size());
  const Eigen::MatrixXd a = probe_dense(op, n);
  Vector x = a.partialPivLu().solve(b);
  Vector r(n);
  op(x, r);
  const double bnorm = b.norm();
  const double res = bnorm == 0.0 ? r.norm() : (b - r).norm() / bnorm;
  if (stats != nullptr) {
    stats->residual = res;
    stats->used_dense_fallback = true;
  }
  if (!std::isfinite(res) || res > tol_rel) {
    std::ostringstream msg;
    msg << "dense solve failed: relative residual " << res << " > " << tol_rel;
    throw SolverError(msg.str(), res, 0);
  }
  return x;
}

Vector solve(const SparseSystem& system, double tol_rel, int max_iter, SolveStats* stats) {
  if (tol_rel <= 0.0) throw std::invalid_argument("solve: tolerance must be positive");
  const int n = system.dimension();
  if (n < 1) throw std::invalid_argument("solve: empty system");
  LinearMap op = system.action;
  if (!op) {
    const SparseMatrix& a = system.matrix;
    op = [&a](const Vector& x, Vector& y) { y = a * x; };
  }
  LinearMap jacobi;
  if (system.matrix.rows() == n) {
    Vector inv_diag = system.matrix.diagonal();
    for (int k = 0; k < n; ++k) inv_diag(k) = inv_diag(k) != 0.0 ? 1.0 / inv_diag(k) : 1.0;
    jacobi = [inv_diag](const Vector& v, Vector& z) { z = inv_diag.cwiseProduct(v); };
  }
  KrylovOptions opt;
  opt.tol_rel = tol_rel;
  opt.max_iter = max_iter;
  Vector x = Vector::Zero(n);
  SolveStats local = gmres(op, system.rhs, x, jacobi ? &jacobi : nullptr, opt);
  if (local.residual <= tol_rel) {
    if (stats != nullptr) *stats = local;
    return x;
  }
  if (n <= kDenseFallbackLimit) {
    SolveStats dense;
    Vector xd = dense_solve(op, system.rhs, tol_rel, &dense);
    dense.iterations = local.iterations;
    if (stats != nullptr) *stats = dense;
    return xd;
  }
  std::ostringstream msg;
  msg << "GMRES did not converge: relative residual " << local.residual << " after " << local.iterations
      << " iterations";
  throw SolverError(msg.str(), local.residual, local.iterations);
}

void SparseLUPreconditioner::factor(const SparseMatrix& m) {
  auto lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
  Eigen::SparseMatrix<double> cm = m;
  cm.makeCompressed();
  lu->analyzePattern(cm);
  lu->factorize(cm);
  if (lu->info() != Eigen::Success) throw SolverError("sparse LU factorisation failed: " + lu->lastErrorMessage(), 0.0, 0);
  lu_ = std::move(lu);
  ready_ = true;
}

void SparseLUPreconditioner::apply(const Vector& v, Vector& z) const { z = lu_->solve(v); }

LinearMap SparseLUPreconditioner::as_map() const {
  auto lu = lu_;
  return [lu](const Vector& v, Vector& z) { z = lu->solve(v); };
}

}  // namespace cbcfd
