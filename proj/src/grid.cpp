#include "cbcfd/grid.hpp"

#include <algorithm>
#include <sstream>

namespace cbcfd {

std::string to_string(BoundaryKind bc) {
  return bc == BoundaryKind::Periodic ? "periodic" : "noflow";
}

std::string to_string(Location loc) {
  switch (loc) {
    case Location::Cell:
      return "cell";
    case Location::XFace:
      return "xface";
    case Location::YFace:
      return "yface";
    case Location::Corner:
      return "corner";
  }
  return "unknown";
}

bool is_face_along(Location loc, Axis axis) {
  if (axis == Axis::X) return loc == Location::XFace || loc == Location::Corner;
  return loc == Location::YFace || loc == Location::Corner;
}

Location toggled(Location loc, Axis axis) {
  const bool fx = is_face_along(loc, Axis::X) != (axis == Axis::X);
  const bool fy = is_face_along(loc, Axis::Y) != (axis == Axis::Y);
  if (fx && fy) return Location::Corner;
  if (fx) return Location::XFace;
  if (fy) return Location::YFace;
  return Location::Cell;
}

GridSpec::GridSpec(const Domain& domain, int nx, int ny, BoundaryKind bc)
    : domain_(domain),
      nx_(nx),
      ny_(ny),
      hx_(domain.width() / nx),
      hy_(domain.height() / ny),
      bc_(bc) {}

std::pair<int, int> GridSpec::shape(Location loc) const {
  const int n0 = is_face_along(loc, Axis::X) ? faces(Axis::X) : cells(Axis::X);
  const int n1 = is_face_along(loc, Axis::Y) ? faces(Axis::Y) : cells(Axis::Y);
  return {n0, n1};
}

std::size_t GridSpec::size(Location loc) const {
  const auto [n0, n1] = shape(loc);
  return static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1);
}

double GridSpec::x_of(Location loc, int i) const {
  return is_face_along(loc, Axis::X) ? face(Axis::X, i) : center(Axis::X, i);
}

double GridSpec::y_of(Location loc, int j) const {
  return is_face_along(loc, Axis::Y) ? face(Axis::Y, j) : center(Axis::Y, j);
}

GridSpec build_grid(const Domain& domain, int nx, int ny, BoundaryKind bc) {
  if (nx < 4 || ny < 4) {
    std::ostringstream msg;
    msg << "build_grid: compact stencils need at least 4 cells per direction (got nx=" << nx
        << ", ny=" << ny << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw std::invalid_argument("build_grid: domain extents must be positive");
  }
  return GridSpec(domain, nx, ny, bc);
}

Field::Field(const GridSpec& grid, Location loc, double fill) : grid_(grid), loc_(loc) {
  const auto [n0, n1] = grid.shape(loc);
  n0_ = n0;
  n1_ = n1;
  data_.assign(static_cast<std::size_t>(n0) * n1, fill);
}

void Field::require_compatible(const Field& other) const {
  if (loc_ != other.loc_) {
    throw LocationError("field location mismatch: " + to_string(loc_) + " vs " +
                        to_string(other.loc_));
  }
  if (!(grid_ == other.grid_)) throw LocationError("fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
  require_compatible(other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_compatible(other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
  return *this;
}

Field& Field::multiply(const Field& other) {
  require_compatible(other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] *= other.data_[k];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field pointwise(Field a, const Field& b) { return a.multiply(b); }

TimeGrid::TimeGrid(double t_end, int n_pressure, int ratio_q)
    : t_end_(t_end), n_pressure_(n_pressure), ratio_q_(ratio_q) {
  if (!(t_end > 0.0)) throw std::invalid_argument("TimeGrid: t_end must be positive");
  if (n_pressure < 1) throw std::invalid_argument("TimeGrid: n_pressure must be >= 1");
  if (ratio_q < 1) throw std::invalid_argument("TimeGrid: Q must be >= 1");
}

Field sample_function(const SpaceTimeFunction& f, Location loc, double t, const GridSpec& grid) {
  Field out(grid, loc);
  for (int i = 0; i < out.n0(); ++i) {
    const double x = out.x(i);
    for (int j = 0; j < out.n1(); ++j) out(i, j) = f(x, out.y(j), t);
  }
  return out;
}

namespace {

Location expected_location(InnerKind kind) {
  switch (kind) {
    case InnerKind::M:
      return Location::Cell;
    case InnerKind::X:
      return Location::XFace;
    case InnerKind::Y:
      return Location::YFace;
  }
  return Location::Cell;
}

}  // namespace

double discrete_inner(InnerKind kind, const Field& a, const Field& b) {
  a.require_compatible(b);
  if (a.location() != expected_location(kind)) {
    throw LocationError("discrete_inner: " + to_string(a.location()) +
                        " field used with an inner product for " +
                        to_string(expected_location(kind)) + " fields");
  }
  CompensatedSum sum;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t k = 0; k < va.size(); ++k) sum.add(va[k] * vb[k]);
  return a.grid().cell_area() * sum.value();
}

double discrete_inner_T(const Field& ax, const Field& ay, const Field& bx, const Field& by) {
  return discrete_inner(InnerKind::X, ax, bx) + discrete_inner(InnerKind::Y, ay, by);
}

double discrete_norm(InnerKind kind, const Field& a) {
  return std::sqrt(std::max(0.0, discrete_inner(kind, a, a)));
}

double discrete_norm_T(const Field& ax, const Field& ay) {
  return std::sqrt(std::max(0.0, discrete_inner_T(ax, ay, ax, ay)));
}

double max_norm(const Field& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace cbcfd
