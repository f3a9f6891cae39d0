#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbcfd/export.hpp"
#include "cbcfd/scenarios.hpp"

using namespace cbcfd;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Export, FieldCsvRows) {
  const GridSpec g = build_grid(Domain{0, 1000, 0, 1000}, 5, 4, BoundaryKind::NoFlow);
  Field f(g, Location::Cell);
  f(4, 3) = 0.25;
  std::ostringstream os;
  write_field_csv(os, f);
  const auto l = lines(os.str());
  ASSERT_EQ(l.size(), 21u);
  EXPECT_EQ(l[0], "i,j,x,y,value");
  EXPECT_EQ(l[1], "0,0,100,125,0");
  EXPECT_EQ(l[20], "4,3,900,875,0.25");
}

TEST(Export, VtkHeaderAndOrdering) {
  const GridSpec g = build_grid(Domain{0, 4, 0, 4}, 4, 4, BoundaryKind::Periodic);
  Field f(g, Location::Cell);
  f(1, 0) = 7.0;
  std::ostringstream os;
  write_field_vtk(os, f, "concentration");
  const auto l = lines(os.str());
  EXPECT_EQ(l[0], "# vtk DataFile Version 3.0");
  EXPECT_EQ(l[3], "DATASET STRUCTURED_POINTS");
  EXPECT_EQ(l[4], "DIMENSIONS 5 5 2");
  EXPECT_EQ(l[7], "CELL_DATA 16");
  // x varies fastest
  EXPECT_EQ(l[10], "0");
  EXPECT_EQ(l[11], "7");
  EXPECT_EQ(l.size(), 26u);
  EXPECT_THROW(write_field_vtk(os, Field(g, Location::XFace), "u"), std::invalid_argument);
}

TEST(Export, EocColumns) {
  std::vector<ErrorRecord> r(2);
  r[0].n = 20;
  r[1].n = 40;
  for (auto& e : r) {
    const double s = std::pow(e.n, -4.0);
    e.e_c = e.e_p = e.e_u = e.e_p1 = s;
  }
  std::ostringstream os;
  write_eoc_csv(os, eoc(r));
  const auto l = lines(os.str());
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "N,e_c,order,e_p,order,e_u,order,|e_p|_1,order");
  EXPECT_EQ(l[1], "20,6.250000e-06,-,6.250000e-06,-,6.250000e-06,-,6.250000e-06,-");
  EXPECT_EQ(l[2], "40,3.906250e-07,4.00,3.906250e-07,4.00,3.906250e-07,4.00,3.906250e-07,4.00");
}

TEST(Export, MassCsv) {
  MassSeries m;
  m.steps = {0, 1};
  m.times = {0.0, 0.5};
  m.errors = {0.0, 1e-15};
  std::ostringstream os;
  write_mass_csv(os, m);
  EXPECT_EQ(os.str(), "n,t,E\n0,0,0\n1,0.5,1.0000000000000001e-15\n");
}

TEST(Export, ReportFilesAreDeterministic) {
  RunConfig c = manufactured_config("e2", 6, 4);
  c.t_end = 0.1;
  c.n_pressure = 3;
  c.q_ratio = 2;
  c.snapshot_times = {0.05};
  const RunReport rep = run(build_run_spec(c));
  const auto dir = std::filesystem::temp_directory_path() / "cbcfd_export_test";
  std::filesystem::remove_all(dir);
  const auto a = export_report(rep, dir / "a", {"csv", "vtk"});
  const auto b = export_report(rep, dir / "b", {"csv", "vtk"});
  ASSERT_EQ(a.size(), b.size());
  EXPECT_GE(a.size(), 7u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].filename(), b[k].filename());
    std::ifstream fa(a[k]), fb(b[k]);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_FALSE(sa.str().empty());
    EXPECT_EQ(sa.str(), sb.str()) << a[k];
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "mass.csv"));
  std::filesystem::remove_all(dir);
}
