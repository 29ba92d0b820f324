#pragma once

#include <functional>
#include <vector>

#include "herz/ext_rat.hpp"
#include "herz/quadrature.hpp"
#include "herz/radial_function.hpp"

namespace herz {

/// Phi_n(z) = int_{S^{n-1}} exp(-z (1 - cos theta)) d omega, the spherical
/// average of the heat kernel after pulling out exp(-(r-rho)^2/4t).
/// Closed forms for n = 1 and n = 3, Gauss-Legendre otherwise.
double spherical_factor(int n, double z, int angular_points = 16);

/// Radial heat kernel K_n(t, r, rho) = (4 pi t)^{-n/2} e^{-(r-rho)^2/4t} Phi_n(r rho / 2t),
/// so that (e^{t Lap} f)(r) = int_0^inf K_n(t, r, rho) f(rho) rho^{n-1} d rho.
double radial_heat_kernel(int n, double t, double r, double rho, int angular_points = 16);

/// (e^{t Lap} f)(r) at a single radius r >= 0.
double heat_value(const RadialFunction& f, double t, double r, int n, const QuadratureSpec& quad);

/// Same, also returning an error estimate (refinement difference plus
/// truncation of sampled data beyond its last radius).
double heat_value(const RadialFunction& f, double t, double r, int n, const QuadratureSpec& quad, double* error);

/// e^{t Lap} f sampled on the grid, parallel over output radii.
Sampled heat_apply(const RadialFunction& f, double t, int n, const QuadratureSpec& quad, const RadialGrid& grid);
Sampled heat_apply(const RadialFunction& f, double t, int n, const QuadratureSpec& quad);

/// Serial reference for heat_apply; results are bitwise identical.
Sampled heat_apply_serial(const RadialFunction& f, double t, int n, const QuadratureSpec& quad,
                          const RadialGrid& grid);

/// |x|^gamma |u|^{alpha-1} u.
RadialFunction nonlinearity(const RadialFunction& u, const ExtRat& alpha, const ExtRat& gamma);

/// tau -> F(tau), given by slices with linear interpolation in time or by a
/// generator.
class SpaceTimeFunction {
 public:
  SpaceTimeFunction(std::vector<double> times, std::vector<RadialFunction> slices);
  SpaceTimeFunction(std::function<RadialFunction(double)> generator, double t_max);

  /// Throws std::out_of_range outside the covered time interval.
  [[nodiscard]] RadialFunction at(double tau) const;
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<RadialFunction>& slices() const { return slices_; }
  [[nodiscard]] double t_min() const;
  [[nodiscard]] double t_max() const;

 private:
  std::vector<double> times_;
  std::vector<RadialFunction> slices_;
  std::function<RadialFunction(double)> generator_;
  double t_max_ = 0.0;
};

/// int_0^t e^{(t-tau) Lap} F(tau) d tau on the grid. Time nodes are graded
/// toward tau = t through (t - tau) = v^{1/singular_exponent}.
Sampled duhamel(const SpaceTimeFunction& F, double t, int n, const QuadratureSpec& quad, double singular_exponent,
                const RadialGrid& grid);
Sampled duhamel(const SpaceTimeFunction& F, double t, int n, const QuadratureSpec& quad, double singular_exponent);

}  // namespace herz
