#include <cmath>
#include <sstream>

#include "doctest.h"
#include "herz/annular.hpp"
#include "herz/radial_function.hpp"

using namespace herz;

TEST_CASE("pointwise values") {
  CHECK(value(Gaussian{}, 0.5) == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
  CHECK(value(AnnulusIndicator{0}, 0.75) == 1.0);
  CHECK(value(AnnulusIndicator{0}, 1.0) == 0.0);
  CHECK(value(AnnulusIndicator{0}, 0.5) == 1.0);
  CHECK(value(PowerLogCutoff{1.0, 1.0}, 0x1p-9) == 0.0);
  CHECK_FALSE(evaluate(PowerLogCutoff{1.0, 1.0}, 0.0).has_value());
  CHECK(evaluate(Gaussian{}, 0.0).value() == 1.0);
  CHECK_THROWS(evaluate(Gaussian{}, -1.0));
}

TEST_CASE("reconstruct after restrict is the identity") {
  const RadialFunction b = BallIndicator{1.0};
  const auto pieces = restrict_to_annuli(b, Window{-20, 1});
  const RadialFunction rs = reconstruct(pieces);
  for (int i = -20 * 8; i <= 8; ++i) {
    const double r = std::exp2(i / 8.0);
    CHECK(value(rs, r) == value(b, r));
  }
  const RadialFunction g = Gaussian{0.8, 1.5};
  const RadialFunction rg = reconstruct(restrict_to_annuli(g, Window{-20, 4}));
  for (int i = -19 * 8; i < 4 * 8; ++i) {
    const double r = std::exp2(i / 8.0 + 0.01);
    CHECK(std::abs(value(rg, r) - value(g, r)) <= 1e-12 * std::abs(value(g, r)));
  }
  std::map<int, RadialFunction> one{{0, RadialFunction(Constant{1.0})}};
  CHECK(std::holds_alternative<AnnulusIndicator>(reconstruct(one).node()));
  CHECK(reconstruct({}).is_zero());
}

TEST_CASE("domination implies coefficient order") {
  const auto a = annular_decompose(Gaussian{1.0, 1.0}, ExtRat(2), 3, Window{-20, 6});
  const auto b = annular_decompose(Gaussian{1.5, 1.0}, ExtRat(2), 3, Window{-20, 6});
  for (int j = -20; j <= 6; ++j) CHECK(a.at(j).value <= b.at(j).value * (1 + 1e-13));
}

TEST_CASE("gaussian coefficients decay superexponentially") {
  const auto p = annular_decompose(Gaussian{}, ExtRat(2), 3, Window{0, 6});
  for (int j = 2; j < 5; ++j) CHECK(p.at(j + 1).value / p.at(j).value < p.at(j).value / p.at(j - 1).value);
}

TEST_CASE("bump chain brackets") {
  const int n = 3;
  const auto p0 = bump_chain_profile(BumpChain{0}, 0, ExtRat(2), n, 40);
  for (int j = 3; j <= 40; ++j) {
    CHECK(p0.at(j).lower == doctest::Approx(std::sqrt(ball_volume(n))));
    CHECK(p0.at(j).upper == doctest::Approx(std::sqrt(ball_volume(n))));
  }
  const auto p2 = bump_chain_profile(BumpChain{2}, 0, ExtRat(2), n, 40);
  for (int j = 3; j <= 40; ++j) CHECK(p2.at(j).value * j == doctest::Approx(std::sqrt(ball_volume(n))));
  CHECK(p2.at(1).lower == 0.0);
  CHECK(p2.at(1).upper > 0.0);
  const auto ps = bump_chain_profile(BumpChain{1}, 1, ExtRat(2), n, 20);
  for (int j = 3; j <= 20; ++j) {
    CHECK(ps.at(j).lower <= ps.at(j).value);
    CHECK(ps.at(j).value <= ps.at(j).upper);
  }
}

TEST_CASE("sampled files round trip") {
  const Sampled s = sample(Gaussian{}, RadialGrid::log_uniform_grid(-4, 2, 4));
  std::stringstream ss;
  save_sampled(s, ss);
  CHECK(ss.str().rfind("# interpolation=", 0) == 0);
  const Sampled t = load_sampled(ss);
  CHECK(t.data->radii == s.data->radii);
  CHECK(t.data->values == s.data->values);
  // power-law interpolation is exact for power laws
  const Sampled pw = sample(PowerWeightProduct{Constant{1.0}, -1.5}, RadialGrid::log_uniform_grid(-4, 2, 2));
  CHECK(value(pw, 0.3) == doctest::Approx(std::pow(0.3, -1.5)).epsilon(1e-12));
}
