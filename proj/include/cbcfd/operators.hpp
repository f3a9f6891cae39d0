#pragma once

/// @file operators.hpp
/// @brief Compact operator algebra on the staggered grid.
///
///   delta_k        two-point difference, toggles centre/face along axis k
///   L_k            I + h_k^2/24 delta_k^2, three-point compact operator
///   T_k / T*_k     local cubic Lagrange interpolation centre->face / face->centre
///   H_x = T*_y T_x bicubic interpolation YFace -> XFace (H_y analogous)
///
/// No-flow grids use the one-sided boundary rows (hatted operators) for L on
/// centred lines and for T / T*.  L on face-centred lines of a no-flow grid
/// acts on the interior faces only; boundary rows are empty so results stay in
/// the zero-normal-component spaces.

#include <Eigen/SparseCore>

#include <array>
#include <initializer_list>
#include <utility>
#include <vector>

#include "cbcfd/grid.hpp"

namespace cbcfd {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One-dimensional sparse operator (few entries per row) applied along a line.
class LineOperator {
 public:
  LineOperator() = default;
  LineOperator(int n_in, int n_out) : n_in_(n_in), n_out_(n_out) { row_ptr_.reserve(n_out + 1); }

  void add_row(std::initializer_list<std::pair<int, double>> entries);
  void add_empty_row() { add_row({}); }

  [[nodiscard]] int n_in() const { return n_in_; }
  [[nodiscard]] int n_out() const { return n_out_; }
  [[nodiscard]] int rows_built() const { return static_cast<int>(row_ptr_.size()) - 1; }

  /// out[r] = sum_c A(r, c) in[c]
  void apply(const double* in, double* out) const;

  [[nodiscard]] int row_begin(int r) const { return row_ptr_[r]; }
  [[nodiscard]] int row_end(int r) const { return row_ptr_[r + 1]; }
  [[nodiscard]] int col(int k) const { return cols_[k]; }
  [[nodiscard]] double val(int k) const { return vals_[k]; }

 private:
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

/// LU factorisation of a banded matrix without pivoting (the compact
/// operators are strictly diagonally dominant).
class BandedLU {
 public:
  BandedLU() = default;
  /// dense is n x n row-major; entries outside the band must be zero.
  BandedLU(int n, int lower, int upper, const std::vector<double>& dense);
  void solve(std::span<double> rhs) const;
  [[nodiscard]] int size() const { return n_; }

 private:
  [[nodiscard]] double& at(int r, int c) { return band_[static_cast<std::size_t>(r) * width_ + (c - r + lower_)]; }
  [[nodiscard]] double at(int r, int c) const { return band_[static_cast<std::size_t>(r) * width_ + (c - r + lower_)]; }

  int n_ = 0;
  int lower_ = 0;
  int upper_ = 0;
  int width_ = 0;
  std::vector<double> band_;
};

/// Solver for the periodic tridiagonal (circulant) system with constant
/// sub/main/super diagonal (a, b, a): Thomas plus a Sherman-Morrison update.
class CyclicTridiagonal {
 public:
  CyclicTridiagonal() = default;
  CyclicTridiagonal(int n, double off, double diag);
  void solve(std::span<double> rhs) const;

 private:
  int n_ = 0;
  double gamma_ = 0.0;
  double off_ = 0.0;
  BandedLU open_;
  std::vector<double> z_;
  double vz_ = 0.0;
};

/// Direct solver for L_k along one line kind (centre or face).
class CompactLineSolver {
 public:
  CompactLineSolver() = default;
  CompactLineSolver(int cells, BoundaryKind bc, bool face_line);
  /// In-place solve on a full line (length = stored points along the axis).
  void solve(std::span<double> line) const;

 private:
  BoundaryKind bc_ = BoundaryKind::Periodic;
  bool face_line_ = false;
  CyclicTridiagonal cyclic_;
  BandedLU banded_;
};

enum class Direction { CellToFace, FaceToCell };

/// Precomputed line operators and factorisations for one grid.
class OperatorContext {
 public:
  explicit OperatorContext(const GridSpec& grid);

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] BoundaryKind bc() const { return grid_.bc(); }

  /// delta along axis; the output location is the staggered complement.
  [[nodiscard]] Field delta(Axis axis, const Field& f) const;
  /// L_axis acting within the location of f.
  [[nodiscard]] Field apply_L(Axis axis, const Field& f) const;
  /// L = L_x L_y
  [[nodiscard]] Field apply_L_both(const Field& f) const;
  [[nodiscard]] Field solve_L(Axis axis, const Field& rhs) const;
  [[nodiscard]] Field solve_L_both(const Field& rhs) const;
  /// T (CellToFace) or T* (FaceToCell) along axis; direction must match f.
  [[nodiscard]] Field apply_T(Axis axis, Direction dir, const Field& f) const;
  /// H_x: YFace -> XFace, H_y: XFace -> YFace.
  [[nodiscard]] Field apply_H(Axis axis, const Field& f) const;

  /// Sparse matrix of each operator acting on fields stored at `from`
  /// (Field::values ordering on both sides).
  [[nodiscard]] SparseMatrix delta_matrix(Axis axis, Location from) const;
  [[nodiscard]] SparseMatrix L_matrix(Axis axis, Location at) const;
  [[nodiscard]] SparseMatrix T_matrix(Axis axis, Location from) const;
  [[nodiscard]] SparseMatrix H_matrix(Axis axis) const;

  enum class LineKind { Delta, Compact, Interp };
  [[nodiscard]] const LineOperator& line(LineKind kind, Axis axis, bool from_face) const;

 private:
  [[nodiscard]] Field apply_line(Axis axis, const LineOperator& op, const Field& f, Location out) const;
  [[nodiscard]] SparseMatrix line_matrix(Axis axis, const LineOperator& op, Location from, Location to) const;

  GridSpec grid_;
  // [axis][from_face]
  std::array<std::array<LineOperator, 2>, 2> delta_;
  std::array<std::array<LineOperator, 2>, 2> compact_;
  std::array<std::array<LineOperator, 2>, 2> interp_;
  std::array<std::array<CompactLineSolver, 2>, 2> solvers_;
};

/// |w|_1 = sqrt(||delta_x w||_x^2 + ||delta_y w||_y^2) for a cell field.
double seminorm_h1(const OperatorContext& ctx, const Field& cell_field);

}  // namespace cbcfd
