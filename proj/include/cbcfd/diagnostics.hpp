#pragma once

/// @file diagnostics.hpp
/// @brief Mass-error functional, manufactured-solution error norms and EOC tables.

#include <optional>
#include <vector>

#include "cbcfd/operators.hpp"

namespace cbcfd {

struct ErrorRecord {
  int n = 0;
  double e_c = 0.0;   ///< ||c - C||_M
  double e_p = 0.0;   ///< ||p - P||_M after constant alignment
  double e_u = 0.0;   ///< ||u - U||_T
  double e_p1 = 0.0;  ///< |p - P|_1
  std::optional<double> order_c;
  std::optional<double> order_p;
  std::optional<double> order_u;
  std::optional<double> order_p1;
};

struct MassSeries {
  std::vector<int> steps;
  std::vector<double> times;
  std::vector<double> errors;
  /// |Omega|^{1/2} max_n ||L[phi C^n]||_M, used to normalise.
  double scale = 0.0;

  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double max_relative() const;
};

/// Online evaluation of
///   E^n = (L[phi C^n], 1) - (L[phi C^0], 1) - sum_l dt (L[q_P Cbar + c_I q_I]^{l+1/2}, 1)
/// with compensated sums.
class MassAccumulator {
 public:
  MassAccumulator(const OperatorContext& ctx, const Field& phi, const Field& C0);

  /// Records step n -> n+1 with the midpoint source fields used by the scheme.
  void add_step(const Field& C_old, const Field& C_new, const Field& qP_mid, const Field& qIcI_mid, double dt,
                double t_new);

  [[nodiscard]] const MassSeries& series() const { return series_; }
  /// (L[w], 1)_M
  [[nodiscard]] double total(const Field& w) const;

 private:
  void update_scale(const Field& C);

  const OperatorContext& ctx_;
  Field phi_;
  double m0_ = 0.0;
  CompensatedSum sources_;
  MassSeries series_;
  double omega_sqrt_ = 0.0;
};

/// Errors between numeric and exact samples in the discrete norms.
/// The pressure is shifted by p_exact(0,0) - P(0,0) before measuring.
ErrorRecord error_norms(const OperatorContext& ctx, const Field& C, const Field& P, const Field& Ux, const Field& Uy,
                        const Field& c_exact, const Field& p_exact, const Field& ux_exact, const Field& uy_exact);

/// Fills the order columns; throws on duplicate N.
std::vector<ErrorRecord> eoc(std::vector<ErrorRecord> records);

/// ln(e1/e2) / ln(n2/n1)
double convergence_order(double e1, double e2, int n1, int n2);

}  // namespace cbcfd
