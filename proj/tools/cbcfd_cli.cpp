// Command-line entry point: simulate, convergence, mass-report, list-scenarios.
// Exit codes: 0 success, 1 invalid input, 2 solver failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "cbcfd/config.hpp"
#include "cbcfd/export.hpp"
#include "cbcfd/linsolve.hpp"
#include "cbcfd/scenarios.hpp"

namespace {

using namespace cbcfd;

struct Source {
  std::string config_path;
  std::string scenario;
  std::string output;
};

RunConfig resolve(const Source& src) {
  if (src.config_path.empty() == src.scenario.empty()) throw ConfigError("give exactly one of --config or --scenario");
  RunConfig c = src.config_path.empty() ? scenario_config(src.scenario) : load_config(src.config_path);
  apply_environment(c);
  if (!src.output.empty()) c.output_directory = src.output;
  return c;
}

void print_summary(const RunReport& r) {
  const RunCounters& k = r.counters;
  std::cout << "run " << r.name << ": " << r.grid.nx() << "x" << r.grid.ny() << ", T = " << r.time.t_end()
            << ", N_p = " << r.time.n_pressure() << ", Q = " << r.time.ratio_q() << "\n";
  std::cout << "  pressure solves " << k.pressure_solves << ", concentration solves " << k.concentration_solves
            << " (+" << k.predictor_steps << " predictor)\n";
  std::cout << "  max iterations: pressure " << k.max_pressure_iterations << ", transport "
            << k.max_transport_iterations << "; factorizations " << k.factorizations << "\n";
  std::cout << std::setprecision(4) << "  time: pressure " << r.timings.pressure_seconds << " s, concentration "
            << r.timings.concentration_seconds << " s, total " << r.timings.total_seconds << " s\n";
  std::cout << std::scientific << std::setprecision(3) << "  mass error: max |E| " << r.mass.max_abs()
            << ", relative " << r.mass.max_relative() << "\n";
  if (r.errors) {
    std::cout << "  errors: e_c " << r.errors->e_c << ", e_p " << r.errors->e_p << ", e_u " << r.errors->e_u
              << ", |e_p|_1 " << r.errors->e_p1 << "\n";
  }
  std::cout << std::defaultfloat;
}

int simulate(const Source& src) {
  const RunConfig c = resolve(src);
  const RunReport r = run(build_run_spec(c));
  print_summary(r);
  for (const auto& p : export_report(r, c.output_directory, c.formats)) std::cout << "  wrote " << p.string() << "\n";
  return 0;
}

int mass_report(const Source& src) {
  const RunConfig c = resolve(src);
  const RunReport r = run(build_run_spec(c));
  const std::filesystem::path path = std::filesystem::path(c.output_directory) / "mass.csv";
  std::ofstream os = open_output(path);
  write_mass_csv(os, r.mass);
  std::cout << std::scientific << std::setprecision(3) << "max |E| = " << r.mass.max_abs()
            << ", scale = " << r.mass.scale << ", relative = " << r.mass.max_relative() << "\n"
            << "wrote " << path.string() << "\n";
  return 0;
}

int convergence(const std::string& id, int q, const std::vector<int>& sizes, const std::string& output) {
  std::vector<ErrorRecord> records;
  for (int n : sizes) {
    RunConfig c = manufactured_config(id, n, q);
    const RunReport r = run(build_run_spec(c));
    std::cerr << "N = " << n << " done in " << r.timings.total_seconds << " s\n";
    records.push_back(*r.errors);
  }
  if (records.size() >= 2) records = eoc(records);
  write_eoc_csv(std::cout, records);
  RunConfig probe;
  apply_environment(probe);
  if (!output.empty()) probe.output_directory = output;
  const std::filesystem::path path =
      std::filesystem::path(probe.output_directory) / ("eoc_" + id + "_q" + std::to_string(q) + ".csv");
  std::ofstream os = open_output(path);
  write_eoc_csv(os, records);
  std::cerr << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact block-centered miscible displacement simulator"};
  app.require_subcommand(1);

  Source sim_src;
  auto* sim = app.add_subcommand("simulate", "run one configuration and export fields");
  sim->add_option("--config", sim_src.config_path, "INI configuration file");
  sim->add_option("--scenario", sim_src.scenario, "built-in scenario id");
  sim->add_option("--output", sim_src.output, "output directory");

  Source mass_src;
  auto* mass = app.add_subcommand("mass-report", "run and write the mass-error series");
  mass->add_option("--config", mass_src.config_path, "INI configuration file");
  mass->add_option("--scenario", mass_src.scenario, "built-in scenario id");
  mass->add_option("--output", mass_src.output, "output directory");

  std::string conv_id;
  int conv_q = 1;
  std::vector<int> conv_sizes;
  std::string conv_out;
  auto* conv = app.add_subcommand("convergence", "manufactured-solution EOC table");
  conv->add_option("--scenario", conv_id, "e1 or e2")->required()->check(CLI::IsMember({"e1", "e2"}));
  conv->add_option("--q", conv_q, "concentration steps per pressure step")->check(CLI::PositiveNumber);
  conv->add_option("--nx", conv_sizes, "grid sizes, e.g. 20,30,40")->required()->delimiter(',');
  conv->add_option("--output", conv_out, "output directory");

  auto* list = app.add_subcommand("list-scenarios", "print the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sim) return simulate(sim_src);
    if (*mass) return mass_report(mass_src);
    if (*conv) return convergence(conv_id, conv_q, conv_sizes, conv_out);
    if (*list) {
      for (const auto& s : list_scenarios()) std::cout << s.id << "  " << s.description << "\n";
      return 0;
    }
  } catch (const RunError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
