// Acceptance suite: prints one PASS/FAIL line per criterion 1-7.
// Usage: acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../unit/monolithic.hpp"
#include "../unit/oracles.hpp"
#include "cbcfd/scenarios.hpp"

using namespace cbcfd;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
};

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

double rel(double got, double ref) { return std::abs(got - ref) / std::abs(ref); }

// Reference errors (e_c, e_p, e_u, |e_p|_1) keyed by (Q, N).
using Table = std::map<std::pair<int, int>, std::array<double, 4>>;

const Table kPeriodic = {
    {{1, 20}, {3.86e-05, 1.02e-05, 1.62e-05, 9.01e-05}},  {{1, 30}, {7.62e-06, 2.01e-06, 3.28e-06, 1.78e-05}},
    {{1, 40}, {2.41e-06, 6.36e-07, 1.01e-06, 5.65e-06}},  {{10, 20}, {3.90e-05, 1.02e-05, 1.62e-05, 9.01e-05}},
    {{10, 30}, {7.71e-06, 2.01e-06, 3.29e-06, 1.78e-05}}, {{10, 40}, {2.43e-06, 6.36e-07, 1.01e-06, 5.65e-06}},
    {{20, 20}, {5.25e-05, 1.02e-05, 1.63e-05, 9.01e-05}}, {{20, 30}, {9.99e-06, 2.01e-06, 3.21e-06, 1.78e-05}},
    {{20, 40}, {3.07e-06, 6.36e-07, 1.01e-06, 5.65e-06}},
};

const Table kNoFlow = {
    {{1, 10}, {7.75e-04, 2.00e-05, 9.61e-06, 6.56e-05}},  {{1, 20}, {3.86e-05, 1.18e-06, 6.06e-07, 4.67e-06}},
    {{1, 30}, {8.60e-06, 2.20e-07, 1.19e-07, 9.60e-07}},  {{10, 10}, {1.39e-03, 1.53e-05, 2.11e-05, 6.56e-05}},
    {{10, 20}, {9.68e-05, 9.23e-07, 1.22e-06, 4.67e-06}}, {{10, 30}, {2.02e-05, 1.72e-07, 2.34e-07, 9.60e-07}},
};

const char* kNames[4] = {"e_c", "e_p", "e_u", "|e_p|_1"};

std::array<double, 4> values(const ErrorRecord& e) { return {e.e_c, e.e_p, e.e_u, e.e_p1}; }

struct ManufacturedRun {
  RunReport report;
  int n_pressure = 0;
};

std::map<std::tuple<std::string, int, int>, ManufacturedRun> g_runs;

const ManufacturedRun& manufactured(const std::string& id, int n, int q) {
  const auto key = std::make_tuple(id, n, q);
  auto it = g_runs.find(key);
  if (it == g_runs.end()) {
    const RunConfig c = manufactured_config(id, n, q);
    ManufacturedRun r{run(build_run_spec(c)), c.n_pressure};
    it = g_runs.emplace(key, std::move(r)).first;
  }
  return it->second;
}

Outcome convergence(const std::string& id, const Table& table, const std::vector<int>& ns, const std::vector<int>& qs,
                    double tol, double eoc_lo, double eoc_hi) {
  Outcome out;
  int bad_values = 0, bad_orders = 0, total = 0;
  double worst = 0.0;
  for (int q : qs) {
    std::vector<ErrorRecord> rows;
    for (int n : ns) {
      const ManufacturedRun& r = manufactured(id, n, q);
      const ErrorRecord e = *r.report.errors;
      rows.push_back(e);
      const auto got = values(e);
      const auto ref = table.at({q, n});
      std::string flags;
      for (int k = 0; k < 4; ++k) {
        const double d = rel(got[k], ref[k]);
        worst = std::max(worst, d);
        ++total;
        if (d > tol) {
          ++bad_values;
          flags += std::string(" ") + kNames[k];
        }
      }
      detail("%s Q=%-2d N=%-2d e_c=%.3e (%.3e) e_p=%.3e (%.3e) e_u=%.3e (%.3e) |e_p|_1=%.3e (%.3e)%s%s", id.c_str(), q,
             n, got[0], ref[0], got[1], ref[1], got[2], ref[2], got[3], ref[3], flags.empty() ? "" : "  off:",
             flags.c_str());
    }
    const auto orders = eoc(rows);
    for (std::size_t k = 1; k < orders.size(); ++k) {
      const double o[4] = {*orders[k].order_c, *orders[k].order_p, *orders[k].order_u, *orders[k].order_p1};
      for (double v : o)
        if (v < eoc_lo || v > eoc_hi) ++bad_orders;
      detail("%s Q=%-2d EOC %d->%d: %.2f %.2f %.2f %.2f", id.c_str(), q, orders[k - 1].n, orders[k].n, o[0], o[1], o[2],
             o[3]);
    }
  }
  out.pass = bad_values == 0 && bad_orders == 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/%d values outside %.0f%% (worst %.1f%%), %d orders outside [%.1f, %.1f]",
                bad_values, total, tol * 100, worst * 100, bad_orders, eoc_lo, eoc_hi);
  out.summary = buf;
  return out;
}

// Five-spot runs shared by criteria 3 and 7.
std::map<std::string, RunReport> g_five_spot;

const RunReport& five_spot(const std::string& id) {
  auto it = g_five_spot.find(id);
  if (it == g_five_spot.end()) it = g_five_spot.emplace(id, run(build_run_spec(scenario_config(id)))).first;
  return it->second;
}

Outcome criterion_mass() {
  Outcome out;
  double worst = 0.0;
  for (int q : {1, 10, 20}) {
    const RunReport& r = manufactured("e1", 60, q).report;
    const double m = r.mass.max_relative();
    worst = std::max(worst, m);
    detail("e1 N=60 Q=%-2d max|E|/scale = %.2e (max|E| = %.2e, %.1f s)", q, m, r.mass.max_abs(),
           r.timings.total_seconds);
  }
  for (const std::string id : {"e3", "e4", "e5", "e6"}) {
    const RunReport& r = five_spot(id);
    const double m = r.mass.max_relative();
    worst = std::max(worst, m);
    detail("%s max|E|/scale = %.2e (max|E| = %.2e, %.1f s)", id.c_str(), m, r.mass.max_abs(), r.timings.total_seconds);
  }
  out.pass = worst <= 1e-10;
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst normalized mass error %.2e (limit 1e-10)", worst);
  out.summary = buf;
  return out;
}

Outcome criterion_speedup() {
  Outcome out;
  int bad_counts = 0;
  for (const auto& [key, r] : g_runs) {
    const RunCounters& c = r.report.counters;
    const int q = std::get<2>(key);
    const bool ok = c.pressure_solves == r.n_pressure + 2 && c.concentration_solves == q * r.n_pressure;
    if (!ok) {
      ++bad_counts;
      detail("%s N=%d Q=%d: pressure %d (want %d), concentration %d (want %d)", std::get<0>(key).c_str(),
             std::get<1>(key), q, c.pressure_solves, r.n_pressure + 2, c.concentration_solves, q * r.n_pressure);
    }
  }
  detail("solve counts checked on %zu runs, %d mismatches", g_runs.size(), bad_counts);
  const RunReport& a = manufactured("e1", 40, 1).report;
  const RunReport& b = manufactured("e1", 40, 10).report;
  const double ratio = b.timings.pressure_seconds / a.timings.pressure_seconds;
  detail("N=40 pressure time: Q=1 %.3f s, Q=10 %.3f s; concentration time: Q=1 %.3f s, Q=10 %.3f s",
         a.timings.pressure_seconds, b.timings.pressure_seconds, a.timings.concentration_seconds,
         b.timings.concentration_seconds);
  out.pass = bad_counts == 0 && ratio <= 0.25;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d count mismatches; pressure time ratio Q=10/Q=1 = %.3f (limit 0.25)", bad_counts,
                ratio);
  out.summary = buf;
  return out;
}

// Operator identities and bounds on random periodic fields.
Outcome criterion_operators() {
  constexpr int kTrials = 100;
  constexpr double kTol = 1e-12;
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> size(4, 14);
  std::uniform_real_distribution<double> len(0.5, 3.0);
  double sbp = 0, comm = 0, selfadj = 0, bound = 0, poinc = 0;
  int violations = 0;
  auto viol = [&](double lhs, double rhs) {
    const double excess = (lhs - rhs) / std::max(1.0, rhs);
    bound = std::max(bound, excess);
    if (excess > kTol) ++violations;
  };
  for (int trial = 0; trial < kTrials; ++trial) {
    const Domain d{0.0, len(rng), -1.0, -1.0 + len(rng)};
    const GridSpec g = build_grid(d, size(rng), size(rng), BoundaryKind::Periodic);
    const OperatorContext ctx(g);
    const Field w = oracle::random_field(g, Location::Cell, rng);
    const Field w2 = oracle::random_field(g, Location::Cell, rng);
    const Field nx = oracle::random_field(g, Location::XFace, rng);
    const Field ny = oracle::random_field(g, Location::YFace, rng);
    const Field nx2 = oracle::random_field(g, Location::XFace, rng);

    // summation by parts
    sbp = std::max(sbp, std::abs(discrete_inner(InnerKind::M, ctx.apply_L(Axis::Y, ctx.delta(Axis::X, nx)), w) +
                                 discrete_inner(InnerKind::X, ctx.apply_L(Axis::Y, nx), ctx.delta(Axis::X, w))));
    sbp = std::max(sbp, std::abs(discrete_inner(InnerKind::M, ctx.apply_L(Axis::X, ctx.delta(Axis::Y, ny)), w) +
                                 discrete_inner(InnerKind::Y, ctx.apply_L(Axis::X, ny), ctx.delta(Axis::Y, w))));
    sbp = std::max(sbp, std::abs(discrete_inner(InnerKind::M, ctx.solve_L(Axis::X, ctx.delta(Axis::X, nx)), w) +
                                 discrete_inner(InnerKind::X, nx, ctx.solve_L(Axis::X, ctx.delta(Axis::X, w)))));

    // commutativity and self-adjointness
    for (Axis a : {Axis::X, Axis::Y}) {
      const Field& nu = a == Axis::X ? nx : ny;
      const InnerKind k = a == Axis::X ? InnerKind::X : InnerKind::Y;
      comm = std::max(comm, std::abs(discrete_inner(k, ctx.solve_L(a, ctx.delta(a, w)), nu) -
                                     discrete_inner(k, ctx.delta(a, ctx.solve_L(a, w)), nu)));
      selfadj = std::max(selfadj, std::abs(discrete_inner(InnerKind::M, ctx.apply_L(a, w), w2) -
                                           discrete_inner(InnerKind::M, w, ctx.apply_L(a, w2))));
    }
    selfadj = std::max(selfadj, std::abs(discrete_inner(InnerKind::X, ctx.apply_L(Axis::X, nx), nx2) -
                                         discrete_inner(InnerKind::X, nx, ctx.apply_L(Axis::X, nx2))));

    // norm bounds
    const double nw = discrete_norm(InnerKind::M, w);
    for (Axis a : {Axis::X, Axis::Y}) {
      viol(discrete_norm(InnerKind::M, ctx.apply_L(a, w)), nw);
      viol(discrete_norm(InnerKind::M, ctx.solve_L(a, w)), 16.0 / 11.0 * nw);
      const InnerKind k = a == Axis::X ? InnerKind::X : InnerKind::Y;
      viol(discrete_norm(k, ctx.apply_T(a, Direction::CellToFace, w)), 1.25 * nw);
    }
    viol(discrete_norm(InnerKind::X, ctx.apply_L(Axis::X, nx)), discrete_norm(InnerKind::X, nx));

    // Poincare with w(0,0) = 0
    Field z = w;
    z(0, 0) = 0.0;
    const double k3 = 2 * d.width() * d.width() + 2 * d.height() * d.height();
    const double s1 = seminorm_h1(ctx, z);
    const double lhs = discrete_inner(InnerKind::M, z, z);
    poinc = std::max(poinc, lhs / (k3 * s1 * s1));
    viol(lhs, k3 * s1 * s1);
  }
  detail("summation by parts max defect %.2e", sbp);
  detail("commutativity max defect %.2e, self-adjointness max defect %.2e", comm, selfadj);
  detail("norm bounds: largest relative excess %.2e, %d violations", bound, violations);
  detail("Poincare: largest ratio ||w||^2 / (K3 |w|_1^2) = %.3f", poinc);
  Outcome out;
  out.pass = sbp <= kTol && comm <= kTol && selfadj <= kTol && violations == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d random fields; identities within %.1e; %d bound violations", kTrials,
                std::max({sbp, comm, selfadj}), violations);
  out.summary = buf;
  return out;
}

Outcome criterion_oracle() {
  double worst_solve = 0.0, worst_probe = 0.0;
  for (BoundaryKind bc : {BoundaryKind::Periodic, BoundaryKind::NoFlow}) {
    const GridSpec g = build_grid(Domain{}, 5, 5, bc);
    const OperatorContext ctx(g);
    PhysicsConfig phys;
    phys.porosity = [](double x, double y) { return 0.5 + 0.2 * std::cos(x - 2 * y); };
    phys.dispersion.alpha_m = [](double, double) { return 0.05; };
    phys.dispersion.alpha_l = 0.4;
    phys.dispersion.alpha_t = 0.1;
    const TransportSolver solver(ctx, phys);
    std::mt19937 rng(77);
    const FacePair u{oracle::random_field(g, Location::XFace, rng), oracle::random_field(g, Location::YFace, rng)};
    Field qP = oracle::random_field(g, Location::Cell, rng);
    for (double& v : qP.values()) v = -std::abs(v);
    const TransportCoefficients k = solver.coefficients(u, qP, 0.04);
    const Field F = oracle::random_field(g, Location::Cell, rng);

    const oracle::BlockSolution ref = oracle::solve_five_field(ctx, k, F);
    const Eigen::MatrixXd m = Eigen::MatrixXd(solver.block_matrix(k));
    Vector b = Vector::Zero(m.rows());
    for (std::size_t i = 0; i < F.size(); ++i) b(static_cast<Eigen::Index>(i)) = F.values()[i];
    const Vector x = m.partialPivLu().solve(b);
    const Eigen::Index nc = ref.c.size(), nfx = ref.vx.size(), nfy = ref.vy.size();
    const double ds = std::max({(x.segment(0, nc) - ref.c).lpNorm<Eigen::Infinity>(),
                                (x.segment(nc, nfx) - ref.vx).lpNorm<Eigen::Infinity>(),
                                (x.segment(nc + nfx, nfy) - ref.vy).lpNorm<Eigen::Infinity>()});
    worst_solve = std::max(worst_solve, ds);

    const LinearMap act = [&](const Vector& in, Vector& y) {
      Field C(g, Location::Cell), Vx(g, Location::XFace), Vy(g, Location::YFace);
      std::copy_n(in.data(), nc, C.values().begin());
      std::copy_n(in.data() + nc, nfx, Vx.values().begin());
      std::copy_n(in.data() + nc + nfx, nfy, Vy.values().begin());
      Field r1(g, Location::Cell), r2(g, Location::XFace), r3(g, Location::YFace);
      solver.block_apply(k, C, Vx, Vy, r1, r2, r3);
      y.resize(m.rows());
      Eigen::Index o = 0;
      for (const Field* f : {&r1, &r2, &r3})
        for (double v : f->values()) y(o++) = v;
    };
    const double dp = (probe_dense(act, static_cast<int>(m.rows())) - m).cwiseAbs().maxCoeff();
    worst_probe = std::max(worst_probe, dp);
    detail("%s 5x5: block vs five-field %.2e, assembled vs probed %.2e (largest entry %.1f)", to_string(bc).c_str(), ds,
           dp, m.cwiseAbs().maxCoeff());
  }
  Outcome out;
  out.pass = worst_solve <= 1e-10 && worst_probe <= 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf, "block vs five-field %.2e (limit 1e-10), assembly vs probing %.2e (limit 1e-12)",
                worst_solve, worst_probe);
  out.summary = buf;
  return out;
}

const Field& snapshot(const RunReport& r, double t) {
  for (const Snapshot& s : r.snapshots)
    if (std::abs(s.requested - t) < 1e-9) return s.C;
  throw std::runtime_error("missing snapshot");
}

// Cells from the injector corner to the farthest cell with c >= 0.5 along a line.
int diagonal_reach(const Field& c) {
  const int n = c.n0();
  int reach = 0;
  for (int i = 0; i < n; ++i)
    if (c(i, i) >= 0.5) reach = std::max(reach, n - i);
  return reach;
}
int edge_reach(const Field& c, bool vertical) {
  const int n = c.n0();
  int reach = 0;
  for (int k = 0; k < n; ++k) {
    const double v = vertical ? c(n - 1, k) : c(k, n - 1);
    if (v >= 0.5) reach = std::max(reach, n - k);
  }
  return reach;
}

Outcome criterion_five_spot() {
  Outcome out;
  const RunReport& e3 = five_spot("e3");
  double asym = 0.0;
  for (const Snapshot& s : e3.snapshots)
    for (int i = 0; i < s.C.n0(); ++i)
      for (int j = 0; j < s.C.n1(); ++j) asym = std::max(asym, std::abs(s.C(i, j) - s.C(j, i)));
  detail("e3 max |C(i,j) - C(j,i)| over %zu snapshots = %.2e", e3.snapshots.size(), asym);

  const int d3 = diagonal_reach(snapshot(e3, 1080.0));
  const int d4 = diagonal_reach(snapshot(five_spot("e4"), 1080.0));
  detail("diagonal reach of c >= 0.5 at t = 1080: e3 %d cells, e4 %d cells", d3, d4);

  const Field& c5 = snapshot(five_spot("e5"), 1080.0);
  const int v5 = edge_reach(c5, true), h5 = edge_reach(c5, false);
  const int n = c5.n0();
  detail("e5 at t = 1080: reach down the x = 1000 edge %d cells (into lower half: %s), along the y = 1000 edge %d cells",
         v5, v5 > n / 2 ? "yes" : "no", h5);

  double slowest = 0.0;
  for (const std::string id : {"e3", "e4", "e5", "e6"}) slowest = std::max(slowest, five_spot(id).timings.total_seconds);
  detail("slowest five-spot run %.1f s", slowest);

  out.pass = asym <= 1e-8 && d4 > d3 && v5 > h5 && v5 > n / 2 && slowest < 600.0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "symmetry %.1e, diagonal e4 %d > e3 %d, e5 vertical %d > horizontal %d, max %.0f s",
                asym, d4, d3, v5, h5, slowest);
  out.summary = buf;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7};

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria = {
      {1,
       {"periodic convergence",
        [] { return convergence("e1", kPeriodic, {20, 30, 40}, {1, 10, 20}, 0.05, 3.8, 4.2); }}},
      {2, {"no-flow convergence", [] { return convergence("e2", kNoFlow, {10, 20, 30}, {1, 10}, 0.10, 3.6, 4.5); }}},
      {3, {"mass conservation", criterion_mass}},
      {4,
       {"multirate counts and speedup",
        [] {
          // reuses the criterion 1 runs
          for (int q : {1, 10, 20})
            for (int n : {20, 30, 40}) (void)manufactured("e1", n, q);
          return criterion_speedup();
        }}},
      {5, {"operator properties", criterion_operators}},
      {6, {"block/monolithic oracle", criterion_oracle}},
      {7, {"five-spot behaviour", criterion_five_spot}},
  };

  int failures = 0;
  for (int id : wanted) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) continue;
    std::printf("criterion %d (%s)\n", id, it->second.first);
    std::fflush(stdout);
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.summary.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
