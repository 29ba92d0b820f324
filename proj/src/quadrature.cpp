#include "herz/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace herz {

namespace {

GaussRule build_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  constexpr int kMax = 64;
  if (order < 1 || order > kMax) throw std::invalid_argument("gauss_legendre: order must be in [1, 64]");
  static std::array<GaussRule, kMax + 1> cache;
  static std::array<std::once_flag, kMax + 1> flags;
  std::call_once(flags[order], [order] { cache[order] = build_rule(order); });
  return cache[order];
}

void QuadratureSpec::validate() const {
  if (radial_points_per_annulus < 4) throw std::invalid_argument("quad.radial_points_per_annulus must be >= 4");
  if (angular_points < 8) throw std::invalid_argument("quad.angular_points must be >= 8");
  if (time_points < 8) throw std::invalid_argument("quad.time_points must be >= 8");
  if (!(grading_exponent > 0.0 && grading_exponent <= 1.0)) {
    throw std::invalid_argument("quad.grading_exponent must be in (0, 1]");
  }
  if (kernel_order < 2 || kernel_order > 64) throw std::invalid_argument("quad.kernel_order must be in [2, 64]");
  if (!(kernel_reach >= 4.0)) throw std::invalid_argument("quad.kernel_reach must be >= 4");
  if (!(annulus_rel_tol > 0.0)) throw std::invalid_argument("quad.annulus_rel_tol must be > 0");
  if (grid_per_octave < 1) throw std::invalid_argument("quad.grid_per_octave must be >= 1");
  if (grid_min_log2 >= grid_max_log2) throw std::invalid_argument("quad.grid_min_log2 must be < grid_max_log2");
}

RadialGrid RadialGrid::log_uniform_grid(int min_log2, int max_log2, int per_octave) {
  RadialGrid g;
  g.log_uniform = true;
  g.per_octave = per_octave;
  g.min_log2 = min_log2;
  const int count = (max_log2 - min_log2) * per_octave + 1;
  g.radii.reserve(count);
  for (int i = 0; i < count; ++i) {
    g.radii.push_back(std::exp2(min_log2 + static_cast<double>(i) / per_octave));
  }
  return g;
}

RadialGrid RadialGrid::standard(const QuadratureSpec& quad) {
  return log_uniform_grid(quad.grid_min_log2, quad.grid_max_log2, quad.grid_per_octave);
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

}  // namespace herz
