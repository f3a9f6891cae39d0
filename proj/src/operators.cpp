#include "cbcfd/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbcfd {

void LineOperator::add_row(std::initializer_list<std::pair<int, double>> entries) {
  for (const auto& [c, v] : entries) {
    cols_.push_back(c);
    vals_.push_back(v);
  }
  row_ptr_.push_back(static_cast<int>(cols_.size()));
}

void LineOperator::apply(const double* in, double* out) const {
  for (int r = 0; r < n_out_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += vals_[k] * in[cols_[k]];
    out[r] = s;
  }
}

BandedLU::BandedLU(int n, int lower, int upper, const std::vector<double>& dense)
    : n_(n), lower_(lower), upper_(upper), width_(lower + upper + 1) {
  band_.assign(static_cast<std::size_t>(n) * width_, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = std::max(0, r - lower); c <= std::min(n - 1, r + upper); ++c) {
      at(r, c) = dense[static_cast<std::size_t>(r) * n + c];
    }
  }
  for (int k = 0; k < n; ++k) {
    const double pivot = at(k, k);
    if (pivot == 0.0) throw std::runtime_error("BandedLU: zero pivot");
    for (int r = k + 1; r <= std::min(n - 1, k + lower); ++r) {
      const double l = at(r, k) / pivot;
      at(r, k) = l;
      for (int c = k + 1; c <= std::min(n - 1, k + upper); ++c) at(r, c) -= l * at(k, c);
    }
  }
}

void BandedLU::solve(std::span<double> x) const {
  for (int r = 0; r < n_; ++r) {
    double s = x[r];
    for (int k = std::max(0, r - lower_); k < r; ++k) s -= at(r, k) * x[k];
    x[r] = s;
  }
  for (int r = n_ - 1; r >= 0; --r) {
    double s = x[r];
    for (int c = r + 1; c <= std::min(n_ - 1, r + upper_); ++c) s -= at(r, c) * x[c];
    x[r] = s / at(r, r);
  }
}

CyclicTridiagonal::CyclicTridiagonal(int n, double off, double diag) : n_(n), gamma_(-diag), off_(off) {
  std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    dense[static_cast<std::size_t>(r) * n + r] = diag;
    if (r > 0) dense[static_cast<std::size_t>(r) * n + r - 1] = off;
    if (r + 1 < n) dense[static_cast<std::size_t>(r) * n + r + 1] = off;
  }
  dense[0] = diag - gamma_;
  dense[static_cast<std::size_t>(n - 1) * n + n - 1] = diag - off * off / gamma_;
  open_ = BandedLU(n, 1, 1, dense);
  z_.assign(n, 0.0);
  z_[0] = gamma_;
  z_[n - 1] = off;
  open_.solve(z_);
  vz_ = z_[0] + off / gamma_ * z_[n - 1];
}

void CyclicTridiagonal::solve(std::span<double> x) const {
  open_.solve(x);
  const double vy = x[0] + off_ / gamma_ * x[n_ - 1];
  const double factor = vy / (1.0 + vz_);
  for (int k = 0; k < n_; ++k) x[k] -= factor * z_[k];
}

namespace {

constexpr double kL0 = 1.0 / 24.0;
constexpr double kL1 = 22.0 / 24.0;

// Dense matrix of L on a line of `cells` points for the given kind.
std::vector<double> compact_dense(int n, BoundaryKind bc, bool face_line, int& lower, int& upper) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  auto set = [&](int r, int c, double v) { a[static_cast<std::size_t>(r) * n + c] = v; };
  if (bc == BoundaryKind::NoFlow && !face_line) {
    set(0, 0, 26.0 / 24.0);
    set(0, 1, -5.0 / 24.0);
    set(0, 2, 4.0 / 24.0);
    set(0, 3, -1.0 / 24.0);
    set(n - 1, n - 1, 26.0 / 24.0);
    set(n - 1, n - 2, -5.0 / 24.0);
    set(n - 1, n - 3, 4.0 / 24.0);
    set(n - 1, n - 4, -1.0 / 24.0);
    for (int r = 1; r < n - 1; ++r) {
      set(r, r - 1, kL0);
      set(r, r, kL1);
      set(r, r + 1, kL0);
    }
    lower = 3;
    upper = 3;
  } else {
    // interior faces with homogeneous Dirichlet ends
    for (int r = 0; r < n; ++r) {
      set(r, r, kL1);
      if (r > 0) set(r, r - 1, kL0);
      if (r + 1 < n) set(r, r + 1, kL0);
    }
    lower = 1;
    upper = 1;
  }
  return a;
}

}  // namespace

CompactLineSolver::CompactLineSolver(int cells, BoundaryKind bc, bool face_line)
    : bc_(bc), face_line_(face_line) {
  if (bc == BoundaryKind::Periodic) {
    cyclic_ = CyclicTridiagonal(cells, kL0, kL1);
    return;
  }
  int lower = 0;
  int upper = 0;
  const int n = face_line ? cells - 1 : cells;
  const auto dense = compact_dense(n, bc, face_line, lower, upper);
  banded_ = BandedLU(n, lower, upper, dense);
}

void CompactLineSolver::solve(std::span<double> line) const {
  if (bc_ == BoundaryKind::Periodic) {
    cyclic_.solve(line);
    return;
  }
  if (!face_line_) {
    banded_.solve(line);
    return;
  }
  const std::size_t n = line.size();
  banded_.solve(line.subspan(1, n - 2));
  line[0] = 0.0;
  line[n - 1] = 0.0;
}

namespace {

int wrap(int k, int n) { return ((k % n) + n) % n; }

LineOperator make_delta(int n, double h, BoundaryKind bc, bool from_face) {
  const double ih = 1.0 / h;
  const bool periodic = bc == BoundaryKind::Periodic;
  const int nf = periodic ? n : n + 1;
  if (!from_face) {
    LineOperator op(n, nf);
    for (int k = 0; k < nf; ++k) {
      if (periodic) {
        op.add_row({{wrap(k - 1, n), -ih}, {k, ih}});
      } else if (k == 0 || k == n) {
        op.add_empty_row();
      } else {
        op.add_row({{k - 1, -ih}, {k, ih}});
      }
    }
    return op;
  }
  LineOperator op(nf, n);
  for (int i = 0; i < n; ++i) {
    const int right = periodic ? wrap(i + 1, n) : i + 1;
    op.add_row({{i, -ih}, {right, ih}});
  }
  return op;
}

LineOperator make_compact(int n, BoundaryKind bc, bool on_face) {
  const bool periodic = bc == BoundaryKind::Periodic;
  if (periodic) {
    LineOperator op(n, n);
    for (int r = 0; r < n; ++r) op.add_row({{wrap(r - 1, n), kL0}, {r, kL1}, {wrap(r + 1, n), kL0}});
    return op;
  }
  if (!on_face) {
    LineOperator op(n, n);
    op.add_row({{0, 26.0 / 24.0}, {1, -5.0 / 24.0}, {2, 4.0 / 24.0}, {3, -1.0 / 24.0}});
    for (int r = 1; r < n - 1; ++r) op.add_row({{r - 1, kL0}, {r, kL1}, {r + 1, kL0}});
    op.add_row({{n - 1, 26.0 / 24.0}, {n - 2, -5.0 / 24.0}, {n - 3, 4.0 / 24.0}, {n - 4, -1.0 / 24.0}});
    return op;
  }
  LineOperator op(n + 1, n + 1);
  op.add_empty_row();
  for (int r = 1; r < n; ++r) op.add_row({{r - 1, kL0}, {r, kL1}, {r + 1, kL0}});
  op.add_empty_row();
  return op;
}

LineOperator make_interp(int n, BoundaryKind bc, bool from_face) {
  constexpr double s = 1.0 / 16.0;
  const bool periodic = bc == BoundaryKind::Periodic;
  if (periodic) {
    LineOperator op(n, n);
    for (int r = 0; r < n; ++r) {
      // face r sits between centres r-1 and r; centre r between faces r and r+1
      const int first = from_face ? r - 1 : r - 2;
      op.add_row({{wrap(first, n), -s},
                  {wrap(first + 1, n), 9 * s},
                  {wrap(first + 2, n), 9 * s},
                  {wrap(first + 3, n), -s}});
    }
    return op;
  }
  if (!from_face) {
    LineOperator op(n, n + 1);
    op.add_row({{0, 35 * s}, {1, -35 * s}, {2, 21 * s}, {3, -5 * s}});
    op.add_row({{0, 5 * s}, {1, 15 * s}, {2, -5 * s}, {3, s}});
    for (int k = 2; k <= n - 2; ++k) op.add_row({{k - 2, -s}, {k - 1, 9 * s}, {k, 9 * s}, {k + 1, -s}});
    op.add_row({{n - 1, 5 * s}, {n - 2, 15 * s}, {n - 3, -5 * s}, {n - 4, s}});
    op.add_row({{n - 1, 35 * s}, {n - 2, -35 * s}, {n - 3, 21 * s}, {n - 4, -5 * s}});
    return op;
  }
  LineOperator op(n + 1, n);
  op.add_row({{0, 5 * s}, {1, 15 * s}, {2, -5 * s}, {3, s}});
  for (int i = 1; i <= n - 2; ++i) op.add_row({{i - 1, -s}, {i, 9 * s}, {i + 1, 9 * s}, {i + 2, -s}});
  op.add_row({{n, 5 * s}, {n - 1, 15 * s}, {n - 2, -5 * s}, {n - 3, s}});
  return op;
}

int axis_index(Axis a) { return a == Axis::X ? 0 : 1; }

}  // namespace

OperatorContext::OperatorContext(const GridSpec& grid) : grid_(grid) {
  for (Axis axis : {Axis::X, Axis::Y}) {
    const int a = axis_index(axis);
    const int n = grid.cells(axis);
    for (int f = 0; f < 2; ++f) {
      const bool face = f == 1;
      delta_[a][f] = make_delta(n, grid.h(axis), grid.bc(), face);
      compact_[a][f] = make_compact(n, grid.bc(), face);
      interp_[a][f] = make_interp(n, grid.bc(), face);
      solvers_[a][f] = CompactLineSolver(n, grid.bc(), face);
    }
  }
}

const LineOperator& OperatorContext::line(LineKind kind, Axis axis, bool from_face) const {
  const int a = axis_index(axis);
  const int f = from_face ? 1 : 0;
  switch (kind) {
    case LineKind::Delta:
      return delta_[a][f];
    case LineKind::Compact:
      return compact_[a][f];
    case LineKind::Interp:
      return interp_[a][f];
  }
  return delta_[a][f];
}

Field OperatorContext::apply_line(Axis axis, const LineOperator& op, const Field& f, Location out_loc) const {
  if (!(f.grid() == grid_)) throw LocationError("field belongs to a different grid");
  Field out(grid_, out_loc);
  if (axis == Axis::X) {
    std::vector<double> in_line(f.n0());
    std::vector<double> out_line(out.n0());
    for (int j = 0; j < f.n1(); ++j) {
      for (int i = 0; i < f.n0(); ++i) in_line[i] = f(i, j);
      op.apply(in_line.data(), out_line.data());
      for (int i = 0; i < out.n0(); ++i) out(i, j) = out_line[i];
    }
  } else {
    for (int i = 0; i < f.n0(); ++i) {
      op.apply(f.values().data() + static_cast<std::size_t>(i) * f.n1(),
               out.values().data() + static_cast<std::size_t>(i) * out.n1());
    }
  }
  return out;
}

Field OperatorContext::delta(Axis axis, const Field& f) const {
  const bool face = is_face_along(f.location(), axis);
  return apply_line(axis, line(LineKind::Delta, axis, face), f, toggled(f.location(), axis));
}

Field OperatorContext::apply_L(Axis axis, const Field& f) const {
  const bool face = is_face_along(f.location(), axis);
  return apply_line(axis, line(LineKind::Compact, axis, face), f, f.location());
}

Field OperatorContext::apply_L_both(const Field& f) const { return apply_L(Axis::Y, apply_L(Axis::X, f)); }

Field OperatorContext::solve_L(Axis axis, const Field& rhs) const {
  if (!(rhs.grid() == grid_)) throw LocationError("field belongs to a different grid");
  const bool face = is_face_along(rhs.location(), axis);
  const CompactLineSolver& solver = solvers_[axis_index(axis)][face ? 1 : 0];
  Field out = rhs;
  if (axis == Axis::X) {
    std::vector<double> buf(out.n0());
    for (int j = 0; j < out.n1(); ++j) {
      for (int i = 0; i < out.n0(); ++i) buf[i] = out(i, j);
      solver.solve(buf);
      for (int i = 0; i < out.n0(); ++i) out(i, j) = buf[i];
    }
  } else {
    for (int i = 0; i < out.n0(); ++i) {
      solver.solve(out.values().subspan(static_cast<std::size_t>(i) * out.n1(), out.n1()));
    }
  }
  return out;
}

Field OperatorContext::solve_L_both(const Field& rhs) const { return solve_L(Axis::Y, solve_L(Axis::X, rhs)); }

Field OperatorContext::apply_T(Axis axis, Direction dir, const Field& f) const {
  const bool face = is_face_along(f.location(), axis);
  if (face != (dir == Direction::FaceToCell)) {
    throw LocationError("apply_T: direction does not match the location of the input field (" +
                        to_string(f.location()) + ")");
  }
  return apply_line(axis, line(LineKind::Interp, axis, face), f, toggled(f.location(), axis));
}

Field OperatorContext::apply_H(Axis axis, const Field& f) const {
  if (axis == Axis::X) {
    if (f.location() != Location::YFace) throw LocationError("H_x maps YFace fields to XFace");
    return apply_T(Axis::Y, Direction::FaceToCell, apply_T(Axis::X, Direction::CellToFace, f));
  }
  if (f.location() != Location::XFace) throw LocationError("H_y maps XFace fields to YFace");
  return apply_T(Axis::X, Direction::FaceToCell, apply_T(Axis::Y, Direction::CellToFace, f));
}

SparseMatrix OperatorContext::line_matrix(Axis axis, const LineOperator& op, Location from, Location to) const {
  const auto [in0, in1] = grid_.shape(from);
  const auto [out0, out1] = grid_.shape(to);
  std::vector<Eigen::Triplet<double>> trip;
  if (axis == Axis::X) {
    trip.reserve(static_cast<std::size_t>(out0) * out1 * 4);
    for (int r = 0; r < out0; ++r) {
      for (int k = op.row_begin(r); k < op.row_end(r); ++k) {
        for (int j = 0; j < in1; ++j) trip.emplace_back(r * out1 + j, op.col(k) * in1 + j, op.val(k));
      }
    }
  } else {
    trip.reserve(static_cast<std::size_t>(out0) * out1 * 4);
    for (int i = 0; i < in0; ++i) {
      for (int r = 0; r < out1; ++r) {
        for (int k = op.row_begin(r); k < op.row_end(r); ++k) trip.emplace_back(i * out1 + r, i * in1 + op.col(k), op.val(k));
      }
    }
  }
  SparseMatrix m(out0 * out1, in0 * in1);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix OperatorContext::delta_matrix(Axis axis, Location from) const {
  const bool face = is_face_along(from, axis);
  return line_matrix(axis, line(LineKind::Delta, axis, face), from, toggled(from, axis));
}

SparseMatrix OperatorContext::L_matrix(Axis axis, Location at) const {
  const bool face = is_face_along(at, axis);
  return line_matrix(axis, line(LineKind::Compact, axis, face), at, at);
}

SparseMatrix OperatorContext::T_matrix(Axis axis, Location from) const {
  const bool face = is_face_along(from, axis);
  return line_matrix(axis, line(LineKind::Interp, axis, face), from, toggled(from, axis));
}

SparseMatrix OperatorContext::H_matrix(Axis axis) const {
  if (axis == Axis::X) {
    SparseMatrix tx = T_matrix(Axis::X, Location::YFace);
    SparseMatrix tsy = T_matrix(Axis::Y, Location::Corner);
    return SparseMatrix(tsy * tx);
  }
  SparseMatrix ty = T_matrix(Axis::Y, Location::XFace);
  SparseMatrix tsx = T_matrix(Axis::X, Location::Corner);
  return SparseMatrix(tsx * ty);
}

double seminorm_h1(const OperatorContext& ctx, const Field& w) {
  if (w.location() != Location::Cell) throw LocationError("seminorm_h1 expects a cell field");
  const Field dx = ctx.delta(Axis::X, w);
  const Field dy = ctx.delta(Axis::Y, w);
  return std::sqrt(discrete_inner(InnerKind::X, dx, dx) + discrete_inner(InnerKind::Y, dy, dy));
}

}  // namespace cbcfd
