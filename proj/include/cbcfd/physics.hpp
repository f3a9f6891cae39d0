#pragma once

/// @file physics.hpp
/// @brief Coefficient models: porosity, permeability, viscosity, dispersion, wells.

#include <functional>
#include <string>
#include <vector>

#include "cbcfd/grid.hpp"

namespace cbcfd {

class OperatorContext;

using SpatialFunction = std::function<double(double x, double y)>;

/// mu(c) = mu0 [M^{1/4} c + 1 - c]^{-4}, or an arbitrary analytic law.
class ViscosityModel {
 public:
  enum class Kind { QuarterPower, Analytic };

  static ViscosityModel quarter_power(double mu0, double mobility_ratio);
  static ViscosityModel analytic(std::function<double(double)> mu, std::string name = "analytic");

  [[nodiscard]] double operator()(double c) const;
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double mu0() const { return mu0_; }
  [[nodiscard]] double mobility_ratio() const { return ratio_; }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  Kind kind_ = Kind::QuarterPower;
  double mu0_ = 1.0;
  double ratio_ = 1.0;
  double ratio_quarter_ = 1.0;
  std::function<double(double)> law_;
  std::string name_ = "quarter-power";
};

/// D = phi (alpha_m I + alpha_l |u| E + alpha_t |u| E_perp + alpha_uu u u^T)
/// The alpha_uu term covers dispersion laws written directly in u u^T.
struct DispersionParams {
  SpatialFunction alpha_m = [](double, double) { return 0.0; };
  double alpha_l = 0.0;
  double alpha_t = 0.0;
  double alpha_uu = 0.0;
  double eps_u = 1e-14;
};

struct DispersionTensor {
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
  [[nodiscard]] double d21() const { return d12; }
};

struct PointWell {
  double x = 0.0;
  double y = 0.0;
  double rate = 0.0;           ///< > 0 injection, < 0 production (area per time)
  double concentration = 1.0;  ///< injected concentration, unused for producers
  bool operator==(const PointWell&) const = default;
};

struct PhysicsConfig {
  SpatialFunction porosity = [](double, double) { return 1.0; };
  SpatialFunction permeability = [](double, double) { return 1.0; };
  ViscosityModel viscosity = ViscosityModel::quarter_power(1.0, 1.0);
  DispersionParams dispersion;
};

/// Full tensor at a point for the velocity (ux, uy).
[[nodiscard]] DispersionTensor dispersion_tensor(const PhysicsConfig& physics, double x, double y, double ux, double uy);

/// Cell source fields at one time: q = q_I + q_P, c_I q_I and q_P.
struct SourceFields {
  Field q;
  Field qI_cI;
  Field qP;
};

[[nodiscard]] SourceFields zero_sources(const GridSpec& grid);

/// Deposits each well into the cell containing it (nearest cell for wells on
/// the boundary) with value rate / (hx hy).
[[nodiscard]] SourceFields well_source_fields(const std::vector<PointWell>& wells, const GridSpec& grid);

/// sum (L q) hx hy, which must vanish for a solvable pressure problem.
[[nodiscard]] double compatibility_defect(const OperatorContext& ctx, const Field& q);

/// Throws std::invalid_argument if |defect| > tol * max(1, sum |q| hx hy).
void require_compatible_source(const OperatorContext& ctx, const Field& q, double tol = 1e-10);

}  // namespace cbcfd
