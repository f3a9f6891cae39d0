#include "cbcfd/export.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cbcfd {

namespace {

void write_order(std::ostream& os, const std::optional<double>& o) {
  os << ',';
  if (o) {
    os << std::fixed << std::setprecision(2) << *o << std::defaultfloat;
  } else {
    os << "-";
  }
}

std::string time_tag(double t) {
  std::ostringstream s;
  s << std::setprecision(10) << t;
  return s.str();
}

}  // namespace

void write_field_csv(std::ostream& os, const Field& f) {
  os << "i,j,x,y,value\n" << std::setprecision(17);
  for (int i = 0; i < f.n0(); ++i) {
    for (int j = 0; j < f.n1(); ++j) os << i << ',' << j << ',' << f.x(i) << ',' << f.y(j) << ',' << f(i, j) << '\n';
  }
}

void write_field_vtk(std::ostream& os, const Field& f, const std::string& name) {
  if (f.location() != Location::Cell) throw std::invalid_argument("vtk export supports cell fields only");
  const GridSpec& g = f.grid();
  const Domain& d = g.domain();
  os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << g.nx() + 1 << ' ' << g.ny() + 1 << " 2\n";
  os << std::setprecision(17);
  os << "ORIGIN " << d.x_lo << ' ' << d.y_lo << " 0\n";
  os << "SPACING " << g.hx() << ' ' << g.hy() << " 1\n";
  os << "CELL_DATA " << g.nx() * g.ny() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  // VTK orders x fastest
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) os << f(i, j) << '\n';
  }
}

void write_eoc_csv(std::ostream& os, const std::vector<ErrorRecord>& records) {
  os << "N,e_c,order,e_p,order,e_u,order,|e_p|_1,order\n";
  for (const ErrorRecord& r : records) {
    os << r.n << std::scientific << std::setprecision(6);
    os << ',' << r.e_c;
    write_order(os, r.order_c);
    os << std::scientific << std::setprecision(6) << ',' << r.e_p;
    write_order(os, r.order_p);
    os << std::scientific << std::setprecision(6) << ',' << r.e_u;
    write_order(os, r.order_u);
    os << std::scientific << std::setprecision(6) << ',' << r.e_p1;
    write_order(os, r.order_p1);
    os << std::defaultfloat << '\n';
  }
}

void write_mass_csv(std::ostream& os, const MassSeries& series) {
  os << "n,t,E\n" << std::setprecision(17);
  for (std::size_t k = 0; k < series.errors.size(); ++k) {
    os << series.steps[k] << ',' << series.times[k] << ',' << series.errors[k] << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

std::vector<std::filesystem::path> export_report(const RunReport& report, const std::filesystem::path& directory,
                                                 const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const Field& f, const std::string& stem, const std::string& name) {
    for (const std::string& fmt : formats) {
      const std::filesystem::path path = directory / (stem + "." + fmt);
      std::ofstream os = open_output(path);
      if (fmt == "csv") {
        write_field_csv(os, f);
      } else if (fmt == "vtk") {
        write_field_vtk(os, f, name);
      } else {
        throw std::invalid_argument("unknown export format '" + fmt + "'");
      }
      if (!os) throw std::runtime_error("write failed: " + path.string());
      written.push_back(path);
    }
  };
  for (const Snapshot& s : report.snapshots) emit(s.C, "concentration_t" + time_tag(s.requested), "concentration");
  emit(report.final_state.C, "concentration_final", "concentration");
  emit(report.final_pressure.P, "pressure_final", "pressure");

  const std::filesystem::path mass = directory / "mass.csv";
  std::ofstream os = open_output(mass);
  write_mass_csv(os, report.mass);
  if (!os) throw std::runtime_error("write failed: " + mass.string());
  written.push_back(mass);
  return written;
}

}  // namespace cbcfd
