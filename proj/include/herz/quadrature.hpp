#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace herz {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (1..64).
const GaussRule& gauss_legendre(int order);

/// Integrates fn over [a, b] with a single Gauss-Legendre panel.
template <class Fn>
double gauss_panel(const GaussRule& rule, double a, double b, Fn&& fn) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  return acc * half;
}

/// Discretization knobs shared by the heat, Duhamel and annulus quadratures.
struct QuadratureSpec {
  int radial_points_per_annulus = 16;  // Gauss order per log-radius panel on an annulus
  int angular_points = 16;             // Gauss order per panel of the angular factor (n != 1, 3)
  int time_points = 32;                // total Duhamel time nodes
  double grading_exponent = 1.0;       // Duhamel grading (s = v^{1/grading})
  int kernel_order = 8;                // Gauss order per heat-kernel panel
  double kernel_reach = 12.0;          // kernel truncated at |r - rho| > reach * sqrt(4t)
  double annulus_rel_tol = 1e-13;      // adaptive halving target on each annulus
  int grid_per_octave = 16;            // standard output grid density
  int grid_min_log2 = -14;             // standard output grid spans [2^min, 2^max]
  int grid_max_log2 = 6;
  bool estimate_errors = false;        // heat/duhamel refinement error estimates

  /// Throws std::invalid_argument if a field is out of range.
  void validate() const;
};

/// Radii on which heat outputs are sampled.
struct RadialGrid {
  std::vector<double> radii;
  bool log_uniform = false;
  int per_octave = 0;
  int min_log2 = 0;

  static RadialGrid log_uniform_grid(int min_log2, int max_log2, int per_octave);
  static RadialGrid standard(const QuadratureSpec& quad);
  [[nodiscard]] std::size_t size() const { return radii.size(); }
};

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Volume of the unit ball, |S^{n-1}| / n.
double ball_volume(int n);

}  // namespace herz
