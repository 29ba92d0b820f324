#include <cmath>
#include <random>

#include "doctest.h"
#include "herz/annular.hpp"
#include "herz/norms.hpp"

using namespace herz;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

HerzIndex idx(ExtRat s, ExtRat q, ExtRat r) { return HerzIndex::make(s, q, r); }

}  // namespace

TEST_CASE("annulus indicator has a single coefficient") {
  const auto p = annular_decompose(AnnulusIndicator{0}, ExtRat(2), 3);
  for (int j = p.j_min; j <= p.j_max; ++j) {
    if (j == 0) {
      CHECK(rel(p.at(j).value, std::sqrt(annulus_volume(0, 3))) < 1e-13);
    } else {
      CHECK(p.at(j).value == 0.0);
    }
  }
  const auto nv = herz_norm(p, 1.7, ExtRat(5));
  CHECK(rel(nv.value, std::sqrt(ball_volume(3) * (1.0 - 0.125))) < 1e-13);
  CHECK(nv.finite());
}

TEST_CASE("unit ball coefficients and geometric closed form") {
  const int n = 3;
  const auto p = annular_decompose(BallIndicator{1.0}, ExtRat(2), n, Window{-40, 2});
  const double v = ball_volume(n);
  for (int j = -40; j <= 2; ++j) {
    const double want = j <= 0 ? std::sqrt(v * std::exp2(j * n) * (1.0 - std::exp2(-n))) : 0.0;
    if (want == 0.0) {
      CHECK(p.at(j).value == 0.0);
    } else {
      CHECK(rel(p.at(j).value, want) < 1e-12);
    }
  }
  for (double s : {-1.0, 0.0, 0.5, 2.0}) {
    for (double r : {0.5, 1.0, 2.0, 7.0}) {
      const double c = std::sqrt(v * (1.0 - std::exp2(-n)));
      const double g = s + n / 2.0;
      const double want = std::pow(std::pow(c, r) / (1.0 - std::exp2(-g * r)), 1.0 / r);
      const ExtRat rr = ExtRat(static_cast<std::int64_t>(r * 2), 2);
      const auto nv = herz_norm(p, s, rr);
      CHECK(rel(nv.value, want) < 1e-10);
      CHECK(nv.lower <= nv.value);
      CHECK(nv.upper >= nv.value);
      CHECK(nv.upper / nv.lower < 1.0 + 1e-9);
    }
  }
}

TEST_CASE("gaussian sup coefficients") {
  const auto p = annular_decompose(Gaussian{1.0, 1.0}, ExtRat::infinity(), 3, Window{-30, 6});
  for (int j = -30; j <= 6; ++j) {
    const double want = std::exp(-std::pow(4.0, j - 1));
    CHECK(std::abs(p.at(j).value - want) <= 1e-12 * std::max(want, 1e-300));
  }
}

TEST_CASE("gaussian membership threshold") {
  const RadialFunction g = Gaussian{1.0, 1.0};
  CHECK(herz_norm_of(g, idx(0, 2, 1), 3).finite());
  const auto d = herz_norm_of(g, idx(ExtRat(-3, 2), 2, 1), 3);
  CHECK(d.divergent);
  CHECK(herz_norm_of(g, idx(ExtRat(-3, 2), 2, ExtRat::infinity()), 3).finite());
  CHECK(herz_norm_of(g, idx(-2, 2, ExtRat::infinity()), 3).divergent);
}

TEST_CASE("power-log threshold") {
  const int n = 3;
  // a = s + n/q with s = 0, q = 3
  for (double r : {1.0, 2.0}) {
    const ExtRat rr(static_cast<std::int64_t>(r));
    const auto below = herz_norm_of(PowerLogCutoff{1.0, 1.0 / (2 * r)}, idx(0, 3, rr), n);
    const auto above = herz_norm_of(PowerLogCutoff{1.0, 2.0 / r}, idx(0, 3, rr), n);
    CHECK(below.divergent);
    CHECK(above.finite());
  }
  CHECK(herz_norm_of(PowerLogCutoff{0.9, 0.0}, idx(0, 3, 1), n).finite());
  CHECK(herz_norm_of(PowerLogCutoff{1.1, 5.0}, idx(0, 3, 1), n).divergent);
}

TEST_CASE("dyadic dilation shifts the profile") {
  const int n = 3;
  const RadialFunction f = Gaussian{0.7, 1.3};
  const auto p = annular_decompose(f, ExtRat(3), n, Window{-20, 10});
  const auto p2 = annular_decompose(dilate(f, 2.0), ExtRat(3), n, Window{-20, 10});
  for (int j = -19; j <= 9; ++j) {
    const double a = p2.at(j).value;
    const double b = std::exp2(-n / 3.0) * p.at(j + 1).value;
    if (b > 1e-250) CHECK(rel(a, b) < 1e-10);
  }
  for (int k = -2; k <= 2; ++k) {
    const auto i = idx(ExtRat(1, 2), 3, 2);
    const double lhs = herz_norm_of(dilate(f, std::exp2(k)), i, n).value;
    const double rhs = std::exp2(-k * (0.5 + 1.0)) * herz_norm_of(f, i, n).value;
    CHECK(rel(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("ball variant brackets the annulus variant") {
  const auto p = annular_decompose(AnnulusIndicator{0}, ExtRat(2), 3);
  const auto a = herz_norm(p, -1.0, ExtRat(2));
  const auto b = herz_norm_ball(p, -1.0, ExtRat(2));
  CHECK(b.value >= a.value);
  CHECK(b.value / a.value <= std::sqrt(4.0 / 3.0) * (1 + 1e-12));
  CHECK_THROWS(herz_norm_ball(p, 0.0, ExtRat(2)));
  const auto z = annular_decompose(Zero{}, ExtRat(2), 3);
  CHECK(herz_norm_ball(z, -1.0, ExtRat(2)).value == 0.0);
  CHECK(herz_norm(z, -1.0, ExtRat(2)).value == 0.0);
}

TEST_CASE("rearrangement") {
  const double v = ball_volume(3);
  CHECK(rearrangement(BallIndicator{1.0}, v / 2, 3) == 1.0);
  CHECK(rearrangement(BallIndicator{1.0}, 2 * v, 3) == 0.0);
  for (double t : {0.1, 1.0, 5.0}) CHECK(rel(rearrangement(Gaussian{}, t, 3), std::exp(-std::pow(t / v, 2.0 / 3))) < 1e-13);
  CHECK_THROWS_AS(rearrangement(AnnulusIndicator{0}, 1.0, 3), std::invalid_argument);
}

TEST_CASE("lorentz norm of a ball") {
  const int n = 3;
  for (double R : {0.5, 1.0, 3.0}) {
    for (auto [p, r] : {std::pair{ExtRat(2), ExtRat(1)}, {ExtRat(3, 2), ExtRat(4)}, {ExtRat(6), ExtRat(2)}}) {
      const double pd = p.to_double();
      const double rd = r.to_double();
      const double want = std::pow(pd / rd, 1.0 / rd) * std::pow(ball_volume(n) * std::pow(R, n), 1.0 / pd);
      const auto nv = lorentz_norm(BallIndicator{R}, 0.0, p, r, n);
      CHECK(rel(nv.value, want) < 1e-10);
    }
    const auto w = lorentz_norm(BallIndicator{R}, 0.0, ExtRat(2), ExtRat::infinity(), n);
    CHECK(rel(w.value, std::pow(ball_volume(n) * R * R * R, 0.5)) < 1e-10);
  }
  CHECK_THROWS(lorentz_norm(BallIndicator{}, 0.0, ExtRat::infinity(), ExtRat(1), 3));
}

TEST_CASE("weighted lebesgue matches herz at r = q") {
  const int n = 3;
  for (double s : {-1.0, 0.0, 1.0}) {
    const RadialFunction f = Gaussian{1.0, 1.0};
    const auto h = herz_norm_of(f, idx(ExtRat(static_cast<std::int64_t>(s)), 2, 2), n).value;
    const auto w = weighted_lebesgue_norm(f, s, ExtRat(2), n).value;
    CHECK(h / w <= std::exp2(std::abs(s)) * (1 + 1e-9));
    CHECK(w / h <= std::exp2(std::abs(s)) * (1 + 1e-9));
  }
  // s = 0: identical quantity
  const auto h0 = herz_norm_of(Gaussian{}, idx(0, 2, 2), n).value;
  const auto w0 = weighted_lebesgue_norm(Gaussian{}, 0.0, ExtRat(2), n).value;
  CHECK(rel(h0, w0) < 1e-10);
  CHECK(rel(w0, std::pow(std::pow(std::numbers::pi / 2, 1.5), 0.5)) < 1e-10);
}

TEST_CASE("power tail sums") {
  auto t = power_tail_sum(1.0, 0.0, 1.0);
  CHECK(t.converges);
  CHECK(rel(t.lo, 2.0) < 1e-15);
  CHECK(t.hi >= 2.0);
  t = power_tail_sum(0.0, 2.0, 1.0);  // sum (1+k)^{-2}
  CHECK(t.converges);
  CHECK(t.lo <= std::numbers::pi * std::numbers::pi / 6 + 1e-12);
  CHECK(t.hi >= std::numbers::pi * std::numbers::pi / 6 - 1e-12);
  CHECK_FALSE(power_tail_sum(0.0, 1.0, 1.0).converges);
  CHECK_FALSE(power_tail_sum(-0.5, 3.0, 1.0).converges);
}
