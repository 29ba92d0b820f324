#include <cmath>
#include <numbers>

#include "doctest.h"
#include "herz/annular.hpp"
#include "herz/heat.hpp"
#include "herz/norms.hpp"

using namespace herz;

namespace {

double gaussian_evolved(double t, double r, int n) {
  const double d = 1.0 + 4.0 * t;
  return std::pow(d, -0.5 * n) * std::exp(-r * r / d);
}

double mass(const RadialFunction& f, int n) {
  return std::pow(weighted_lebesgue_norm(f, 0.0, ExtRat(1), n).value, 1.0);
}

}  // namespace

TEST_CASE("gaussian closed form") {
  QuadratureSpec quad;
  for (int n : {1, 2, 3, 4, 5}) {
    for (double t : {0.01, 0.1, 1.0}) {
      double worst = 0.0;
      for (int i = 0; i <= 160; ++i) {
        const double r = 0.05 * i;
        const double want = gaussian_evolved(t, r, n);
        worst = std::max(worst, std::abs(heat_value(Gaussian{}, t, r, n, quad) - want) / want);
      }
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("kernel is symmetric and has unit mass") {
  for (int n : {1, 2, 3, 4}) {
    for (auto [r, rho] : {std::pair{0.3, 1.1}, {2.0, 0.01}, {5.0, 5.5}}) {
      const double a = radial_heat_kernel(n, 0.2, r, rho);
      const double b = radial_heat_kernel(n, 0.2, rho, r);
      CHECK(std::abs(a - b) <= 1e-14 * a);
    }
  }
  CHECK(spherical_factor(3, 0.0) == doctest::Approx(4 * std::numbers::pi));
  CHECK(spherical_factor(2, 0.0) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  CHECK(spherical_factor(1, 0.0) == doctest::Approx(2.0));
  CHECK(spherical_factor(4, 1e-3) == doctest::Approx(sphere_area(4) * std::exp(-1e-3)).epsilon(1e-6));
}

TEST_CASE("mass conservation and semigroup") {
  const int n = 3;
  QuadratureSpec quad;
  const auto grid = RadialGrid::log_uniform_grid(-14, 6, 64);
  const double m0 = ball_volume(n);
  for (double t : {0.01, 0.1, 1.0}) {
    const Sampled u = heat_apply(BallIndicator{1.0}, t, n, quad, grid);
    CHECK(std::abs(mass(HeatEvolved{BallIndicator{1.0}, t, n, quad}, n) - m0) / m0 < 1e-8);
    // sampled output adds second-order interpolation error
    CHECK(std::abs(mass(u, n) - m0) / m0 < 1e-3);
  }
  const RadialFunction ab = HeatEvolved{HeatEvolved{AnnulusIndicator{0}, 0.05, n, quad}, 0.07, n, quad};
  const RadialFunction direct = HeatEvolved{AnnulusIndicator{0}, 0.12, n, quad};
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double r = 0.05 * i;
    worst = std::max(worst, std::abs(value(ab, r) - value(direct, r)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("positivity and sup contraction") {
  QuadratureSpec quad;
  for (const RadialFunction& f :
       {RadialFunction(BallIndicator{1.0}), RadialFunction(AnnulusIndicator{2}), RadialFunction(SmoothBump{0.5, 2.0, 0.3, 2.0})}) {
    const Sampled u = heat_apply(f, 0.03, 3, quad);
    for (double v : u.data->values) {
      CHECK(v >= 0.0);
      CHECK(v <= sup_bound(f) + 1e-10);
    }
  }
}

TEST_CASE("parallel output equals serial output bitwise") {
  QuadratureSpec quad;
  const auto grid = RadialGrid::standard(quad);
  for (const RadialFunction& f : {RadialFunction(Gaussian{0.3, 2.0}), RadialFunction(AnnulusIndicator{-1}),
                                   RadialFunction(PowerWeightProduct{BallIndicator{1.0}, -1.0})}) {
    const Sampled a = heat_apply(f, 0.02, 3, quad, grid);
    const Sampled b = heat_apply_serial(f, 0.02, 3, quad, grid);
    REQUIRE(a.data->values.size() == b.data->values.size());
    bool same = true;
    for (std::size_t i = 0; i < a.data->values.size(); ++i) same = same && a.data->values[i] == b.data->values[i];
    CHECK(same);
  }
}

TEST_CASE("self-adjointness on test pairs") {
  const int n = 3;
  QuadratureSpec quad;
  const RadialFunction f = AnnulusIndicator{0};
  const RadialFunction g = SmoothBump{1.0, 3.0, 0.4, 1.0};
  const double t = 0.1;
  const double lhs = weighted_lebesgue_norm(Product{HeatEvolved{f, t, n, quad}, g}, 0.0, ExtRat(1), n).value;
  const double rhs = weighted_lebesgue_norm(Product{f, HeatEvolved{g, t, n, quad}}, 0.0, ExtRat(1), n).value;
  CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
}

TEST_CASE("nonlinearity") {
  const RadialFunction b = BallIndicator{1.0};
  CHECK(value(nonlinearity(b, 2, 0), 0.5) == 1.0);
  CHECK(value(nonlinearity(b, 2, 0), 1.5) == 0.0);
  CHECK(value(nonlinearity(-1.0 * b, 3, 0), 0.5) == -1.0);
  const auto w = nonlinearity(AnnulusIndicator{0}, 2, -1);
  CHECK(value(w, 0.75) == doctest::Approx(1.0 / 0.75));
  const auto p = annular_decompose(w, ExtRat(1), 3);
  // int_{1/2}^1 rho^{-1} rho^2 d rho * 4 pi = 4 pi * 3/8
  CHECK(p.at(0).value == doctest::Approx(4 * std::numbers::pi * 0.375).epsilon(1e-13));
}

TEST_CASE("duhamel against the scalar reference") {
  const int n = 3;
  QuadratureSpec quad;
  quad.time_points = 64;
  const double t = 0.5;
  const SpaceTimeFunction F([](double) { return RadialFunction(Gaussian{}); }, t);
  const auto grid = RadialGrid::log_uniform_grid(-8, 3, 8);
  const Sampled d = duhamel(F, t, n, quad, 1.0, grid);
  const GaussRule& rule = gauss_legendre(32);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radii[i];
    double ref = 0.0;
    for (int k = 0; k < 8; ++k) {
      ref += gauss_panel(rule, t * k / 8, t * (k + 1) / 8, [&](double tau) { return gaussian_evolved(t - tau, r, n); });
    }
    worst = std::max(worst, std::abs(d.data->values[i] - ref) / ref);
  }
  CHECK(worst < 1e-6);
  const SpaceTimeFunction zero([](double) { return RadialFunction(); }, 1.0);
  const Sampled dz = duhamel(zero, 1.0, n, quad, 1.0, grid);
  for (double v : dz.data->values) CHECK(v == 0.0);
  // bounded F: output scales linearly as t -> 0
  const double d1 = duhamel(F, 1e-3, n, quad, 1.0, grid).data->values[0];
  const double d2 = duhamel(F, 1e-4, n, quad, 1.0, grid).data->values[0];
  CHECK(d1 / d2 == doctest::Approx(10.0).epsilon(1e-2));
  CHECK_THROWS(duhamel(SpaceTimeFunction([](double) { return RadialFunction(); }, 0.1), 0.5, n, quad, 1.0, grid));
}
