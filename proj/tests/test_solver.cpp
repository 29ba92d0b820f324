#include <cmath>

#include "doctest.h"
#include "herz/solver.hpp"

using namespace herz;

namespace {

QuadratureSpec coarse() {
  QuadratureSpec q;
  q.time_points = 16;
  q.grid_per_octave = 8;
  q.grid_min_log2 = -10;
  q.grid_max_log2 = 5;
  return q;
}

SolverOptions short_grid() {
  SolverOptions o;
  o.time_points = 8;
  return o;
}

ProblemParams small_data_params() { return ProblemParams::make(3, 2, 0, HerzIndex::make(0, 3, 1)); }

double sup_abs(const RadialFunction& f) {
  const auto* s = std::get_if<Sampled>(&f.node());
  if (!s) return f.is_zero() ? 0.0 : kInf;
  double m = 0.0;
  for (double v : s->data->values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("zero data is a fixed point") {
  const auto run = picard_solve(RadialFunction{}, small_data_params(), 0.1, coarse(), 5, 1e-12, short_grid());
  CHECK(run.converged);
  CHECK(run.iterations == 1);
  for (const auto& h : run.herz_history.back()) CHECK(h.value == 0.0);
  CHECK(run.contraction_ratios.size() + 1 == run.differences.size());
}

TEST_CASE("small data contracts and satisfies the fixed-point equation") {
  const auto quad = coarse();
  const RadialFunction u0 = Gaussian{1.0, 1e-3};
  const auto run = picard_solve(u0, small_data_params(), 0.1, quad, 20, 1e-12, short_grid());
  CHECK(run.converged);
  for (double r : run.contraction_ratios) CHECK(r < 1.0);
  for (double r : fixed_point_residual(run, u0, quad, short_grid())) CHECK(r <= 5e-12);
}

TEST_CASE("first correction is alpha-homogeneous") {
  const auto quad = coarse();
  const auto p = small_data_params();
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
  std::vector<double> size;
  for (double e : eps) {
    const auto c = first_correction(Gaussian{1.0, e}, p, 0.1, quad, short_grid());
    size.push_back(herz_norm_of(c.back(), p.index, p.n, quad).value);
  }
  CHECK(loglog_slope(eps, size) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(size[0] / size[1] == doctest::Approx(100.0).epsilon(1e-2));
}

TEST_CASE("odd nonlinearity maps negated data to the negated solution") {
  const auto quad = coarse();
  const auto p = ProblemParams::make(3, 3, 0, HerzIndex::make(0, 3, 1));
  const auto a = picard_solve(Gaussian{1.0, 1e-2}, p, 0.1, quad, 10, 1e-13, short_grid());
  const auto b = picard_solve(Gaussian{1.0, -1e-2}, p, 0.1, quad, 10, 1e-13, short_grid());
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  const auto& sa = a.iterates.back().slices();
  const auto& sb = b.iterates.back().slices();
  for (std::size_t i = 1; i < sa.size(); ++i) {
    const auto& x = std::get<Sampled>(sa[i].node()).data->values;
    const auto& y = std::get<Sampled>(sb[i].node()).data->values;
    bool exact = true;
    for (std::size_t k = 0; k < x.size(); ++k) exact = exact && x[k] == -y[k];
    CHECK(exact);
  }
}

TEST_CASE("scale-critical histories are invariant under dyadic rescaling") {
  auto quad = coarse();
  quad.grid_min_log2 = -14;
  quad.grid_max_log2 = 8;
  // s/n + 1/q = 1/q_c for alpha = 3, gamma = 0, s = 0, q = 3
  const auto p = ProblemParams::make(3, 3, 0, HerzIndex::make(0, 3, 1));
  const double lambda = 2.0;
  const double T = 0.4;
  const RadialFunction u0 = Gaussian{1.0, 0.05};
  const RadialFunction v0 = Scaled{u0, lambda, lambda};  // lambda^{(2+gamma)/(alpha-1)} u0(lambda x)
  const auto a = picard_solve(u0, p, T, quad, 10, 1e-12, short_grid());
  const auto b = picard_solve(v0, p, T / (lambda * lambda), quad, 10, 1e-12, short_grid());
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  for (std::size_t i = 0; i < a.time_grid.size(); ++i) {
    const double x = a.herz_history.back()[i].value;
    const double y = b.herz_history.back()[i].value;
    CHECK(std::abs(x - y) <= 0.02 * x);
  }
}

TEST_CASE("large data is reported as non-contractive") {
  const auto p = ProblemParams::make(3, 3, 0, HerzIndex::make(0, 3, 1));
  const auto run = picard_solve(Gaussian{1.0, 30.0}, p, 1.0, coarse(), 12, 1e-12, short_grid());
  CHECK_FALSE(run.converged);
  CHECK(run.outcome == PicardOutcome::NonContractive);
  CHECK(run.contraction_ratios.size() + 1 == run.differences.size());
}

TEST_CASE("uniqueness probe with a zero perturbation") {
  ProbeOptions opt;
  opt.solver = short_grid();
  const auto rep =
      uniqueness_probe(Gaussian{1.0, 1e-3}, small_data_params(), 0.1, RadialFunction{}, coarse(), opt);
  CHECK(rep.verdict);
  for (const auto& d : rep.diff_norms) CHECK(d.value <= opt.tol);
  CHECK(rep.hypotheses == "uniqueness (i)");
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({1, 10, 100}, {3, 0.3, 0.03}) == doctest::Approx(-1.0));
  CHECK_THROWS(loglog_slope({1}, {1}));
}
