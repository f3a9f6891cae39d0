#include "cbcfd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cbcfd {

double MassSeries::max_abs() const {
  double m = 0.0;
  for (double e : errors) m = std::max(m, std::abs(e));
  return m;
}

double MassSeries::max_relative() const { return scale > 0.0 ? max_abs() / scale : max_abs(); }

MassAccumulator::MassAccumulator(const OperatorContext& ctx, const Field& phi, const Field& C0)
    : ctx_(ctx), phi_(phi), omega_sqrt_(std::sqrt(ctx.grid().domain().area())) {
  m0_ = total(pointwise(C0, phi_));
  series_.steps.push_back(0);
  series_.times.push_back(0.0);
  series_.errors.push_back(0.0);
  update_scale(C0);
}

double MassAccumulator::total(const Field& w) const {
  const Field lw = ctx_.apply_L_both(w);
  CompensatedSum s;
  for (double v : lw.values()) s.add(v);
  return s.value() * ctx_.grid().cell_area();
}

void MassAccumulator::update_scale(const Field& C) {
  const double norm = discrete_norm(InnerKind::M, ctx_.apply_L_both(pointwise(C, phi_)));
  series_.scale = std::max(series_.scale, omega_sqrt_ * norm);
}

void MassAccumulator::add_step(const Field& C_old, const Field& C_new, const Field& qP_mid, const Field& qIcI_mid,
                               double dt, double t_new) {
  Field src = C_old + C_new;
  src *= 0.5;
  src.multiply(qP_mid);
  src += qIcI_mid;
  sources_.add(dt * total(src));
  const double e = (total(pointwise(C_new, phi_)) - m0_) - sources_.value();
  series_.steps.push_back(series_.steps.back() + 1);
  series_.times.push_back(t_new);
  series_.errors.push_back(e);
  update_scale(C_new);
}

ErrorRecord error_norms(const OperatorContext& ctx, const Field& C, const Field& P, const Field& Ux, const Field& Uy,
                        const Field& c_exact, const Field& p_exact, const Field& ux_exact, const Field& uy_exact) {
  ErrorRecord r;
  r.n = ctx.grid().nx();
  r.e_c = discrete_norm(InnerKind::M, c_exact - C);
  Field ep = p_exact - P;
  const double shift = ep(0, 0);
  for (double& v : ep.values()) v -= shift;
  r.e_p = discrete_norm(InnerKind::M, ep);
  r.e_u = discrete_norm_T(ux_exact - Ux, uy_exact - Uy);
  r.e_p1 = seminorm_h1(ctx, ep);
  return r;
}

double convergence_order(double e1, double e2, int n1, int n2) {
  return std::log(e1 / e2) / std::log(static_cast<double>(n2) / static_cast<double>(n1));
}

std::vector<ErrorRecord> eoc(std::vector<ErrorRecord> records) {
  if (records.size() < 2) throw std::invalid_argument("eoc: need at least two records");
  std::set<int> seen;
  for (const ErrorRecord& r : records) {
    if (!seen.insert(r.n).second) throw std::invalid_argument("eoc: duplicate N = " + std::to_string(r.n));
  }
  records.front().order_c.reset();
  records.front().order_p.reset();
  records.front().order_u.reset();
  records.front().order_p1.reset();
  for (std::size_t k = 1; k < records.size(); ++k) {
    const ErrorRecord& a = records[k - 1];
    ErrorRecord& b = records[k];
    b.order_c = convergence_order(a.e_c, b.e_c, a.n, b.n);
    b.order_p = convergence_order(a.e_p, b.e_p, a.n, b.n);
    b.order_u = convergence_order(a.e_u, b.e_u, a.n, b.n);
    b.order_p1 = convergence_order(a.e_p1, b.e_p1, a.n, b.n);
  }
  return records;
}

}  // namespace cbcfd
