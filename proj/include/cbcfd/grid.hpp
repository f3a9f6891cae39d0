#pragma once

/// @file grid.hpp
/// @brief Staggered spatial grids, the two-rate temporal grid and grid functions.
///
/// Cell-centred quantities (concentration, pressure) live on Pi*_x x Pi*_y.
/// Normal velocity/flux components live on the vertical faces Pi_x x Pi*_y
/// (XFace) and horizontal faces Pi*_x x Pi_y (YFace).  Corner fields are
/// intermediate results of the bicubic face-to-face interpolation.
///
/// All indices are zero based.  Along an axis with n cells, centre i sits at
/// lo + (i + 1/2) h and face k sits at lo + k h.  Periodic grids store n faces
/// (face n is face 0); no-flow grids store n + 1 faces, the two boundary faces
/// being part of the storage.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbcfd {

enum class BoundaryKind { Periodic, NoFlow };
enum class Axis { X, Y };
enum class Location { Cell, XFace, YFace, Corner };

std::string to_string(BoundaryKind bc);
std::string to_string(Location loc);

/// Thrown when two grid functions on different staggered locations (or on
/// different grids) are combined.
class LocationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Domain {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;

  [[nodiscard]] double width() const { return x_hi - x_lo; }
  [[nodiscard]] double height() const { return y_hi - y_lo; }
  [[nodiscard]] double area() const { return width() * height(); }
  bool operator==(const Domain&) const = default;
};

/// True when the location is face-centred along the given axis.
[[nodiscard]] bool is_face_along(Location loc, Axis axis);
/// Location obtained by toggling centre/face along one axis.
[[nodiscard]] Location toggled(Location loc, Axis axis);

class GridSpec {
 public:
  GridSpec(const Domain& domain, int nx, int ny, BoundaryKind bc);

  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int ny() const { return ny_; }
  [[nodiscard]] double hx() const { return hx_; }
  [[nodiscard]] double hy() const { return hy_; }
  [[nodiscard]] BoundaryKind bc() const { return bc_; }
  [[nodiscard]] bool periodic() const { return bc_ == BoundaryKind::Periodic; }

  [[nodiscard]] int cells(Axis a) const { return a == Axis::X ? nx_ : ny_; }
  [[nodiscard]] int faces(Axis a) const { return cells(a) + (periodic() ? 0 : 1); }
  [[nodiscard]] double h(Axis a) const { return a == Axis::X ? hx_ : hy_; }
  [[nodiscard]] double lo(Axis a) const { return a == Axis::X ? domain_.x_lo : domain_.y_lo; }
  [[nodiscard]] double cell_area() const { return hx_ * hy_; }

  [[nodiscard]] double center(Axis a, int i) const { return lo(a) + (i + 0.5) * h(a); }
  [[nodiscard]] double face(Axis a, int k) const { return lo(a) + k * h(a); }

  /// Number of stored points along x and y for a location.
  [[nodiscard]] std::pair<int, int> shape(Location loc) const;
  [[nodiscard]] std::size_t size(Location loc) const;
  /// Physical coordinates of stored point (i, j) of a location.
  [[nodiscard]] double x_of(Location loc, int i) const;
  [[nodiscard]] double y_of(Location loc, int j) const;

  bool operator==(const GridSpec&) const = default;

 private:
  Domain domain_;
  int nx_;
  int ny_;
  double hx_;
  double hy_;
  BoundaryKind bc_;
};

/// Validating constructor; rejects fewer than 4 cells per direction and
/// degenerate extents.
GridSpec build_grid(const Domain& domain, int nx, int ny, BoundaryKind bc);

/// Grid function on one staggered location.  Storage is dense and row-major
/// over (i, j): value (i, j) is at offset i * n1 + j.
class Field {
 public:
  Field(const GridSpec& grid, Location loc, double fill = 0.0);

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] Location location() const { return loc_; }
  [[nodiscard]] int n0() const { return n0_; }
  [[nodiscard]] int n1() const { return n1_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n1_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n1_ + j]; }

  [[nodiscard]] std::span<double> values() { return data_; }
  [[nodiscard]] std::span<const double> values() const { return data_; }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  [[nodiscard]] double x(int i) const { return grid_.x_of(loc_, i); }
  [[nodiscard]] double y(int j) const { return grid_.y_of(loc_, j); }

  /// Throws LocationError unless other lives on the same grid and location.
  void require_compatible(const Field& other) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += s * other
  Field& axpy(double s, const Field& other);
  /// Pointwise product in place.
  Field& multiply(const Field& other);

 private:
  GridSpec grid_;
  Location loc_;
  int n0_;
  int n1_;
  std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field pointwise(Field a, const Field& b);

/// Two-level temporal grid: dt_p = Q dt_c, pressure node m equals
/// concentration node Q m.
class TimeGrid {
 public:
  TimeGrid(double t_end, int n_pressure, int ratio_q);

  [[nodiscard]] double t_end() const { return t_end_; }
  [[nodiscard]] int n_pressure() const { return n_pressure_; }
  [[nodiscard]] int ratio_q() const { return ratio_q_; }
  [[nodiscard]] int n_conc() const { return n_pressure_ * ratio_q_; }
  [[nodiscard]] double dt_p() const { return t_end_ / n_pressure_; }
  [[nodiscard]] double dt_c() const { return dt_p() / ratio_q_; }
  [[nodiscard]] double t_conc(int n) const { return n * dt_c(); }
  [[nodiscard]] double t_pressure(int m) const { return m * dt_p(); }

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_end_;
  int n_pressure_;
  int ratio_q_;
};

using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// Pointwise evaluation of f(., ., t) at the stored nodes of a location.
Field sample_function(const SpaceTimeFunction& f, Location loc, double t, const GridSpec& grid);

enum class InnerKind { M, X, Y };

/// Discrete L2 inner products (.,.)_M, (.,.)_x, (.,.)_y: sum of hx*hy*a*b
/// over the stored points (boundary faces of no-flow grids carry the zero
/// normal component and do not contribute).
double discrete_inner(InnerKind kind, const Field& a, const Field& b);
/// (a, b)_T = (a_x, b_x)_x + (a_y, b_y)_y
double discrete_inner_T(const Field& ax, const Field& ay, const Field& bx, const Field& by);
double discrete_norm(InnerKind kind, const Field& a);
double discrete_norm_T(const Field& ax, const Field& ay);
/// Maximum absolute value over stored points.
double max_norm(const Field& a);

/// Kahan-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace cbcfd
