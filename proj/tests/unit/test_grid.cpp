#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cbcfd/grid.hpp"
#include "oracles.hpp"

using namespace cbcfd;

TEST(Grid, GeometryPeriodic) {
  const GridSpec g = build_grid(Domain{0, 2, -1, 1}, 8, 4, BoundaryKind::Periodic);
  EXPECT_DOUBLE_EQ(g.hx(), 0.25);
  EXPECT_DOUBLE_EQ(g.hy(), 0.5);
  EXPECT_EQ(g.faces(Axis::X), 8);
  EXPECT_DOUBLE_EQ(g.center(Axis::X, 0), 0.125);
  EXPECT_DOUBLE_EQ(g.face(Axis::Y, 1), -0.5);
  EXPECT_EQ(g.shape(Location::XFace), (std::pair<int, int>{8, 4}));
  EXPECT_EQ(g.size(Location::Cell), 32u);
}

TEST(Grid, GeometryNoFlow) {
  const GridSpec g = build_grid(Domain{0, 1000, 0, 1000}, 50, 50, BoundaryKind::NoFlow);
  EXPECT_DOUBLE_EQ(g.hx(), 20.0);
  EXPECT_EQ(g.shape(Location::XFace), (std::pair<int, int>{51, 50}));
  EXPECT_EQ(g.shape(Location::YFace), (std::pair<int, int>{50, 51}));
  EXPECT_DOUBLE_EQ(g.x_of(Location::XFace, 50), 1000.0);
  EXPECT_DOUBLE_EQ(g.y_of(Location::XFace, 0), 10.0);
}

TEST(Grid, RejectsDegenerate) {
  EXPECT_THROW(build_grid(Domain{0, 1, 0, 1}, 3, 10, BoundaryKind::NoFlow), std::invalid_argument);
  EXPECT_THROW(build_grid(Domain{1, 1, 0, 1}, 10, 10, BoundaryKind::NoFlow), std::invalid_argument);
  EXPECT_THROW(build_grid(Domain{0, 1, 2, 1}, 10, 10, BoundaryKind::Periodic), std::invalid_argument);
}

TEST(Grid, LocationToggle) {
  EXPECT_EQ(toggled(Location::Cell, Axis::X), Location::XFace);
  EXPECT_EQ(toggled(Location::XFace, Axis::Y), Location::Corner);
  EXPECT_EQ(toggled(Location::Corner, Axis::X), Location::YFace);
  EXPECT_TRUE(is_face_along(Location::YFace, Axis::Y));
  EXPECT_FALSE(is_face_along(Location::YFace, Axis::X));
}

TEST(Field, ArithmeticAndMismatch) {
  const GridSpec g = build_grid(Domain{}, 4, 5, BoundaryKind::Periodic);
  Field a(g, Location::Cell, 2.0);
  Field b(g, Location::Cell, 3.0);
  Field c = a + b;
  EXPECT_DOUBLE_EQ(c(3, 4), 5.0);
  c.axpy(-2.0, a);
  EXPECT_DOUBLE_EQ(c(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(pointwise(a, b)(0, 0), 6.0);
  EXPECT_DOUBLE_EQ((0.5 * a)(2, 2), 1.0);
  const Field f(g, Location::XFace);
  EXPECT_THROW(a += f, LocationError);
  const GridSpec g2 = build_grid(Domain{}, 4, 5, BoundaryKind::NoFlow);
  EXPECT_THROW(a -= Field(g2, Location::Cell), LocationError);
}

TEST(Field, RowMajorLayout) {
  const GridSpec g = build_grid(Domain{}, 4, 6, BoundaryKind::Periodic);
  Field f(g, Location::Cell);
  f(2, 3) = 7.0;
  EXPECT_DOUBLE_EQ(f.values()[2 * 6 + 3], 7.0);
}

TEST(TimeGrid, Levels) {
  const TimeGrid t(3600.0, 120, 3);
  EXPECT_DOUBLE_EQ(t.dt_p(), 30.0);
  EXPECT_DOUBLE_EQ(t.dt_c(), 10.0);
  EXPECT_EQ(t.n_conc(), 360);
  EXPECT_DOUBLE_EQ(t.t_pressure(4), t.t_conc(12));
  EXPECT_THROW(TimeGrid(1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(TimeGrid(1.0, 4, 0), std::invalid_argument);
  EXPECT_THROW(TimeGrid(-1.0, 4, 1), std::invalid_argument);
}

TEST(SampleFunction, NodesPerLocation) {
  const GridSpec g = build_grid(Domain{0, 1, 0, 2}, 4, 4, BoundaryKind::NoFlow);
  const auto f = [](double x, double y, double t) { return x + 10 * y + 100 * t; };
  const Field c = sample_function(f, Location::Cell, 1.0, g);
  EXPECT_DOUBLE_EQ(c(1, 2), 0.375 + 10 * 1.25 + 100);
  const Field fx = sample_function(f, Location::XFace, 0.0, g);
  EXPECT_DOUBLE_EQ(fx(4, 0), 1.0 + 10 * 0.25);
  const Field fy = sample_function(f, Location::YFace, 0.0, g);
  EXPECT_DOUBLE_EQ(fy(0, 4), 0.125 + 20.0);
}

TEST(InnerProducts, MatchLoops) {
  std::mt19937 rng(11);
  for (BoundaryKind bc : {BoundaryKind::Periodic, BoundaryKind::NoFlow}) {
    const GridSpec g = build_grid(Domain{0, 2, 0, 3}, 7, 9, bc);
    const Field a = oracle::random_field(g, Location::Cell, rng);
    const Field b = oracle::random_field(g, Location::Cell, rng);
    double s = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 9; ++j) s += g.hx() * g.hy() * a(i, j) * b(i, j);
    EXPECT_NEAR(discrete_inner(InnerKind::M, a, b), s, 1e-13);
    const Field ux = oracle::random_field(g, Location::XFace, rng);
    const Field uy = oracle::random_field(g, Location::YFace, rng);
    double sx = 0.0;
    for (double v : ux.values()) sx += v * v;
    double sy = 0.0;
    for (double v : uy.values()) sy += v * v;
    EXPECT_NEAR(discrete_norm_T(ux, uy), std::sqrt(g.hx() * g.hy() * (sx + sy)), 1e-13);
    EXPECT_THROW((void)discrete_inner(InnerKind::X, a, b), LocationError);
  }
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int k = 0; k < 1000000; ++k) s.add(1e-16);
  EXPECT_NEAR(s.value(), 1.0 + 1e-10, 1e-15);
}
