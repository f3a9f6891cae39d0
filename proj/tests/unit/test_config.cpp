#include <gtest/gtest.h>

#include <cstdlib>

#include "cbcfd/config.hpp"
#include "cbcfd/scenarios.hpp"

using namespace cbcfd;

TEST(Config, RoundTripAllScenarios) {
  for (const ScenarioInfo& s : list_scenarios()) {
    const RunConfig c = scenario_config(s.id);
    const RunConfig back = parse_config(serialize_config(c));
    EXPECT_EQ(back, c) << s.id;
  }
}

TEST(Config, ParsesFiveSpotText) {
  const std::string text = R"([scenario]
id = mine
[domain]
x_lo = 0
x_hi = 1000
y_lo = 0
y_hi = 1000
[grid]
nx = 10
ny = 12
bc = noflow
[time]
t_end = 360
n_pressure = 12
q_ratio = 2
[physics]
porosity = 0.1
permeability = 20
permeability_zones = 0 1000 0 500 80
mobility_ratio = 41
alpha_m = 5
alpha_l = 50
alpha_t = 5
[wells]
injectors = 1000 1000 30 1
producers = 0 0 -30
[output]
snapshot_times = 120, 360
formats = csv, vtk
)";
  const RunConfig c = parse_config(text);
  EXPECT_EQ(c.scenario, "mine");
  EXPECT_EQ(c.ny, 12);
  EXPECT_EQ(c.q_ratio, 2);
  ASSERT_EQ(c.permeability_zones.size(), 1u);
  EXPECT_EQ(c.permeability_zones[0], (Zone{0, 1000, 0, 500, 80}));
  ASSERT_EQ(c.injectors.size(), 1u);
  EXPECT_EQ(c.injectors[0], (PointWell{1000, 1000, 30, 1}));
  EXPECT_EQ(c.producers[0].rate, -30.0);
  EXPECT_EQ(c.snapshot_times, (std::vector<double>{120, 360}));
  EXPECT_EQ(c.formats, (std::vector<std::string>{"csv", "vtk"}));
}

TEST(Config, RejectsUnknownKeysAndSections) {
  EXPECT_THROW(parse_config("[grid]\nsmoothing = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[solver]\ntol = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(""), ConfigError);
  EXPECT_THROW(parse_config("   \n"), ConfigError);
  EXPECT_THROW(parse_config("[grid]\nnx = ten\n"), ConfigError);
  EXPECT_THROW(parse_config("[grid]\nnx = 10.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[grid]\nbc = wall\n"), ConfigError);
}

TEST(Config, ValidationRules) {
  RunConfig c = scenario_config("e4");
  c.producers[0].rate = -20.0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e4");
  c.nx = 3;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e4");
  c.snapshot_times = {4000.0};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e4");
  c.formats = {"hdf5"};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e4");
  c.injectors[0].concentration = 1.5;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e4");
  c.permeability_zones = {Zone{0, 1, 0, 1, -2.0}};
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Config, ManufacturedBoundaryMismatch) {
  RunConfig c = scenario_config("e1");
  c.bc = BoundaryKind::NoFlow;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e2");
  c.bc = BoundaryKind::Periodic;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = scenario_config("e2");
  c.manufactured = "sin(x)*cos(y)";
  EXPECT_THROW(validate_config(c), ConfigError);
  EXPECT_THROW(manufactured_config("e1", 20, 3), ConfigError);
}

TEST(Config, EnvironmentOverridesOutput) {
  RunConfig c = scenario_config("e3");
  ::setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
  apply_environment(c);
  EXPECT_EQ(c.output_directory, "/tmp/elsewhere");
  ::unsetenv(kOutputDirEnv);
  RunConfig d = scenario_config("e3");
  apply_environment(d);
  EXPECT_EQ(d.output_directory, "output/e3");
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/run.ini"), ConfigError); }
