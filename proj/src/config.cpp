#include "cbcfd/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace cbcfd {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"scenario", {"id"}},
      {"domain", {"x_lo", "x_hi", "y_lo", "y_hi"}},
      {"grid", {"nx", "ny", "bc"}},
      {"time", {"t_end", "n_pressure", "q_ratio"}},
      {"physics",
       {"porosity", "permeability", "porosity_zones", "permeability_zones", "viscosity", "mu0", "mobility_ratio",
        "alpha_m", "alpha_l", "alpha_t", "initial_concentration"}},
      {"wells", {"injectors", "producers"}},
      {"manufactured", {"example"}},
      {"output", {"directory", "snapshot_times", "formats"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(d)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

std::vector<double> numbers(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string spaced = v;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::string tok;
  while (in >> tok) out.push_back(to_double(key, tok));
  return out;
}

std::vector<Zone> parse_zones(const std::string& key, const std::string& v) {
  std::vector<Zone> zones;
  for (const std::string& item : split(v, ';')) {
    const auto n = numbers(key, item);
    if (n.size() != 5) throw ConfigError(key + ": zone needs 'x0 x1 y0 y1 value', got '" + item + "'");
    zones.push_back({n[0], n[1], n[2], n[3], n[4]});
  }
  return zones;
}

std::vector<PointWell> parse_wells(const std::string& key, const std::string& v, bool injector) {
  std::vector<PointWell> wells;
  for (const std::string& item : split(v, ';')) {
    const auto n = numbers(key, item);
    if (injector && n.size() != 4) throw ConfigError(key + ": injector needs 'x y rate c', got '" + item + "'");
    if (!injector && n.size() != 3) throw ConfigError(key + ": producer needs 'x y rate', got '" + item + "'");
    PointWell w{n[0], n[1], n[2], injector ? n[3] : 0.0};
    wells.push_back(w);
  }
  return wells;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return o.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  if (trim(text).empty()) throw ConfigError("empty configuration");
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  for (const auto& [section, node] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (node.empty()) throw ConfigError("key '" + section + "' outside any section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : node) {
      if (it->second.count(key) == 0) throw ConfigError("unknown key " + section + "." + key);
      if (!value.empty()) throw ConfigError("nested value under " + section + "." + key);
    }
  }

  RunConfig c;
  auto get = [&tree](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
    return std::nullopt;
  };
  if (auto v = get("scenario.id")) c.scenario = *v;
  if (auto v = get("domain.x_lo")) c.domain.x_lo = to_double("domain.x_lo", *v);
  if (auto v = get("domain.x_hi")) c.domain.x_hi = to_double("domain.x_hi", *v);
  if (auto v = get("domain.y_lo")) c.domain.y_lo = to_double("domain.y_lo", *v);
  if (auto v = get("domain.y_hi")) c.domain.y_hi = to_double("domain.y_hi", *v);
  if (auto v = get("grid.nx")) c.nx = to_int("grid.nx", *v);
  if (auto v = get("grid.ny")) c.ny = to_int("grid.ny", *v);
  if (auto v = get("grid.bc")) {
    if (*v == "periodic") {
      c.bc = BoundaryKind::Periodic;
    } else if (*v == "noflow") {
      c.bc = BoundaryKind::NoFlow;
    } else {
      throw ConfigError("grid.bc: expected 'periodic' or 'noflow', got '" + *v + "'");
    }
  }
  if (auto v = get("time.t_end")) c.t_end = to_double("time.t_end", *v);
  if (auto v = get("time.n_pressure")) c.n_pressure = to_int("time.n_pressure", *v);
  if (auto v = get("time.q_ratio")) c.q_ratio = to_int("time.q_ratio", *v);
  if (auto v = get("physics.porosity")) c.porosity = to_double("physics.porosity", *v);
  if (auto v = get("physics.permeability")) c.permeability = to_double("physics.permeability", *v);
  if (auto v = get("physics.porosity_zones")) c.porosity_zones = parse_zones("physics.porosity_zones", *v);
  if (auto v = get("physics.permeability_zones")) c.permeability_zones = parse_zones("physics.permeability_zones", *v);
  if (auto v = get("physics.viscosity")) c.viscosity = *v;
  if (auto v = get("physics.mu0")) c.mu0 = to_double("physics.mu0", *v);
  if (auto v = get("physics.mobility_ratio")) c.mobility_ratio = to_double("physics.mobility_ratio", *v);
  if (auto v = get("physics.alpha_m")) c.alpha_m = to_double("physics.alpha_m", *v);
  if (auto v = get("physics.alpha_l")) c.alpha_l = to_double("physics.alpha_l", *v);
  if (auto v = get("physics.alpha_t")) c.alpha_t = to_double("physics.alpha_t", *v);
  if (auto v = get("physics.initial_concentration")) {
    c.initial_concentration = to_double("physics.initial_concentration", *v);
  }
  if (auto v = get("wells.injectors")) c.injectors = parse_wells("wells.injectors", *v, true);
  if (auto v = get("wells.producers")) c.producers = parse_wells("wells.producers", *v, false);
  if (auto v = get("manufactured.example")) c.manufactured = *v;
  if (auto v = get("output.directory")) c.output_directory = *v;
  if (auto v = get("output.snapshot_times")) c.snapshot_times = numbers("output.snapshot_times", *v);
  if (auto v = get("output.formats")) {
    c.formats.clear();
    for (const std::string& f : split(*v, ',')) c.formats.push_back(f);
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  if (!(c.domain.x_lo < c.domain.x_hi) || !(c.domain.y_lo < c.domain.y_hi)) {
    throw ConfigError("domain: need x_lo < x_hi and y_lo < y_hi");
  }
  if (c.nx < 4 || c.ny < 4) throw ConfigError("grid: nx and ny must be at least 4");
  if (!(c.t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (c.n_pressure < 1) throw ConfigError("time.n_pressure must be >= 1");
  if (c.q_ratio < 1) throw ConfigError("time.q_ratio must be >= 1");
  for (const std::string& f : c.formats) {
    if (f != "csv" && f != "vtk") throw ConfigError("output.formats: unknown format '" + f + "'");
  }
  for (double t : c.snapshot_times) {
    if (t < 0.0 || t > c.t_end) throw ConfigError("output.snapshot_times: time outside [0, t_end]");
  }
  if (c.is_manufactured()) {
    if (c.manufactured == "e1") {
      if (c.bc != BoundaryKind::Periodic) throw ConfigError("manufactured e1 requires grid.bc = periodic");
    } else if (c.manufactured == "e2") {
      if (c.bc != BoundaryKind::NoFlow) throw ConfigError("manufactured e2 requires grid.bc = noflow");
    } else {
      throw ConfigError("manufactured.example: expected e1 or e2 (inline expressions are not supported), got '" +
                        c.manufactured + "'");
    }
    if (!c.injectors.empty() || !c.producers.empty()) throw ConfigError("manufactured runs take no wells");
    return;
  }
  if (c.viscosity != "quarter-power") {
    throw ConfigError("physics.viscosity: only 'quarter-power' is available outside manufactured runs");
  }
  if (!(c.mu0 > 0.0) || !(c.mobility_ratio > 0.0)) throw ConfigError("physics: mu0 and mobility_ratio must be > 0");
  if (!(c.alpha_m > 0.0)) throw ConfigError("physics.alpha_m must be > 0");
  if (c.alpha_l < 0.0 || c.alpha_t < 0.0) throw ConfigError("physics: alpha_l and alpha_t must be >= 0");
  auto positive = [](double v, const std::vector<Zone>& zones, const std::string& key) {
    if (!(v > 0.0)) throw ConfigError(key + " must be > 0");
    for (const Zone& z : zones) {
      if (!(z.value > 0.0)) throw ConfigError(key + "_zones: values must be > 0");
    }
  };
  positive(c.porosity, c.porosity_zones, "physics.porosity");
  positive(c.permeability, c.permeability_zones, "physics.permeability");
  double net = 0.0;
  double scale = 0.0;
  for (const PointWell& w : c.injectors) {
    if (!(w.rate > 0.0)) throw ConfigError("wells.injectors: rates must be > 0");
    if (w.concentration < 0.0 || w.concentration > 1.0) throw ConfigError("wells.injectors: c must lie in [0, 1]");
    net += w.rate;
    scale += std::abs(w.rate);
  }
  for (const PointWell& w : c.producers) {
    if (!(w.rate < 0.0)) throw ConfigError("wells.producers: rates must be < 0");
    net += w.rate;
    scale += std::abs(w.rate);
  }
  if (std::abs(net) > 1e-12 * std::max(1.0, scale)) {
    throw ConfigError("wells: injection and production rates must balance");
  }
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  auto zones = [](const std::vector<Zone>& zs) {
    std::string s;
    for (const Zone& z : zs) {
      if (!s.empty()) s += "; ";
      s += fmt(z.x0) + " " + fmt(z.x1) + " " + fmt(z.y0) + " " + fmt(z.y1) + " " + fmt(z.value);
    }
    return s;
  };
  auto wells = [](const std::vector<PointWell>& ws, bool inj) {
    std::string s;
    for (const PointWell& w : ws) {
      if (!s.empty()) s += "; ";
      s += fmt(w.x) + " " + fmt(w.y) + " " + fmt(w.rate);
      if (inj) s += " " + fmt(w.concentration);
    }
    return s;
  };
  o << "[scenario]\nid = " << c.scenario << "\n\n";
  o << "[domain]\nx_lo = " << fmt(c.domain.x_lo) << "\nx_hi = " << fmt(c.domain.x_hi) << "\ny_lo = "
    << fmt(c.domain.y_lo) << "\ny_hi = " << fmt(c.domain.y_hi) << "\n\n";
  o << "[grid]\nnx = " << c.nx << "\nny = " << c.ny << "\nbc = " << to_string(c.bc) << "\n\n";
  o << "[time]\nt_end = " << fmt(c.t_end) << "\nn_pressure = " << c.n_pressure << "\nq_ratio = " << c.q_ratio
    << "\n\n";
  if (c.is_manufactured()) o << "[manufactured]\nexample = " << c.manufactured << "\n\n";
  {
    o << "[physics]\nporosity = " << fmt(c.porosity) << "\npermeability = " << fmt(c.permeability) << "\n";
    if (!c.porosity_zones.empty()) o << "porosity_zones = " << zones(c.porosity_zones) << "\n";
    if (!c.permeability_zones.empty()) o << "permeability_zones = " << zones(c.permeability_zones) << "\n";
    o << "viscosity = " << c.viscosity << "\nmu0 = " << fmt(c.mu0) << "\nmobility_ratio = " << fmt(c.mobility_ratio)
      << "\nalpha_m = " << fmt(c.alpha_m) << "\nalpha_l = " << fmt(c.alpha_l) << "\nalpha_t = " << fmt(c.alpha_t)
      << "\ninitial_concentration = " << fmt(c.initial_concentration) << "\n\n";
    o << "[wells]\n";
    if (!c.injectors.empty()) o << "injectors = " << wells(c.injectors, true) << "\n";
    if (!c.producers.empty()) o << "producers = " << wells(c.producers, false) << "\n";
    o << "\n";
  }
  o << "[output]\ndirectory = " << c.output_directory << "\n";
  if (!c.snapshot_times.empty()) {
    o << "snapshot_times =";
    for (double t : c.snapshot_times) o << " " << fmt(t);
    o << "\n";
  }
  o << "formats = ";
  for (std::size_t k = 0; k < c.formats.size(); ++k) o << (k ? ", " : "") << c.formats[k];
  o << "\n";
  return o.str();
}

void apply_environment(RunConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') config.output_directory = dir;
}

}  // namespace cbcfd
