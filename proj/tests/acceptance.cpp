// Acceptance battery: one PASS/FAIL line per criterion, each under its time limit.
// Criteria 2-5 run against the library directly, the rest through the harness.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "herz/annular.hpp"
#include "herz/harness.hpp"
#include "herz/heat.hpp"
#include "herz/norms.hpp"
#include "herz/random.hpp"

using namespace herz;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ExperimentReport harness_run(ExperimentKind kind) {
  return run_experiment(ExperimentConfig::from_table(kind, ParamTable{}));
}

const Json* find(const ExperimentReport& r, const std::string& name) {
  for (const auto& [k, v] : r.measured)
    if (k == name) return &v;
  return nullptr;
}

Outcome exponent_suite() {
  const auto r = harness_run(ExperimentKind::Classify);
  return {r.pass, "10000 random tuples, harness verdict " + std::string(r.pass ? "pass" : "fail")};
}

Outcome norm_closed_forms() {
  const int n = 3;
  const double v = ball_volume(n);
  double worst_ball = 0.0;
  const auto pb = annular_decompose(BallIndicator{1.0}, ExtRat(2), n, Window{-60, 2});
  for (double s : {-1.0, 0.0, 0.5, 2.0}) {
    for (int r2 : {1, 2, 4, 14}) {
      const double r = r2 / 2.0;
      const double c = std::sqrt(v * (1.0 - std::exp2(-n)));
      const double want = std::pow(std::pow(c, r) / (1.0 - std::exp2(-(s + n / 2.0) * r)), 1.0 / r);
      worst_ball = std::max(worst_ball, rel(herz_norm(pb, s, ExtRat(r2, 2)).value, want));
    }
  }
  // the annulus indicator has one coefficient, equal to |A_0|^{1/q}
  double worst_ann = 0.0;
  for (int q : {1, 2, 3}) {
    const auto pa = annular_decompose(AnnulusIndicator{0}, ExtRat(q), n);
    for (int j = pa.j_min; j <= pa.j_max; ++j) {
      const double want = j == 0 ? std::pow(annulus_volume(0, n), 1.0 / q) : 0.0;
      worst_ann = std::max(worst_ann, want == 0.0 ? pa.at(j).value : rel(pa.at(j).value, want));
    }
    worst_ann = std::max(worst_ann, rel(herz_norm(pa, 1.5, ExtRat(3)).value, std::pow(annulus_volume(0, n), 1.0 / q)));
  }
  double worst_gauss = 0.0;
  const auto pg = annular_decompose(Gaussian{1.0, 1.0}, ExtRat::infinity(), n, Window{-30, 6});
  for (int j = -30; j <= 6; ++j) {
    const double want = std::exp(-std::pow(4.0, j - 1));
    worst_gauss = std::max(worst_gauss, std::abs(pg.at(j).value - want) / std::max(want, 1e-300));
  }
  const bool ok = worst_ball <= 1e-10 && worst_ann <= 1e-14 && worst_gauss <= 1e-12;
  return {ok, fmt("ball rel %.2e, annulus rel %.2e, gaussian sup rel %.2e", worst_ball, worst_ann, worst_gauss)};
}

Outcome ball_equivalence() {
  std::mt19937_64 rng(20240601);
  const int n = 3;
  const double ss[] = {-2.0, -1.0, -0.5};
  const ExtRat qs[] = {ExtRat(1), ExtRat(2), ExtRat(4)};
  const ExtRat rs[] = {ExtRat(1, 2), ExtRat(1), ExtRat(2), ExtRat(4), ExtRat(8)};
  int violations = 0, checks = 0;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ExtRat q = qs[std::uniform_int_distribution<int>(0, 2)(rng)];
    const auto c = random_coefficients(rng, 24);
    const auto prof = profile_from_coefficients(q, n, -12, c);
    const double s = ss[k % 3];
    for (const auto& r : rs) {
      const double a = herz_norm(prof, s, r).value;
      if (a == 0.0) continue;
      const double b = herz_norm_ball(prof, s, r).value;
      const double qd = q.to_double(), rd = r.to_double();
      const double bound = qd >= rd ? std::pow(1.0 / (1.0 - std::exp2(s * rd)), 1.0 / rd)
                                    : std::pow(1.0 / (1.0 - std::exp2(s * qd)), 1.0 / qd);
      const double ratio = b / a;
      worst = std::max(worst, ratio / bound);
      ++checks;
      if (ratio < 1.0 || ratio > bound * (1 + 1e-9)) ++violations;
    }
  }
  return {violations == 0, fmt("%.0f checks, %.0f violations, max ratio/bound %.6f", checks, violations, worst)};
}

Outcome dyadic_scaling() {
  const int n = 3;
  const RadialFunction fs[] = {Gaussian{0.7, 1.3}, BallIndicator{1.0}, AnnulusIndicator{0}, SmoothBump{0.3, 1.2, 0.2}};
  const HerzIndex idxs[] = {HerzIndex::make(ExtRat(1, 2), 3, 2), HerzIndex::make(ExtRat(-1, 2), 3, 2),
                            HerzIndex::make(0, 2, 1), HerzIndex::make(1, ExtRat::infinity(), ExtRat::infinity())};
  double worst = 0.0;
  for (const auto& f : fs) {
    for (const auto& i : idxs) {
      const double base = herz_norm_of(f, i, n).value;
      const double g = i.s.to_double() + (i.q.is_infinite() ? 0.0 : n / i.q.to_double());
      for (int k = -2; k <= 2; ++k) {
        const double lhs = herz_norm_of(dilate(f, std::exp2(k)), i, n).value;
        worst = std::max(worst, rel(lhs, std::exp2(-k * g) * base));
      }
    }
  }
  return {worst <= 1e-10, fmt("worst relative error %.2e over 4 functions x 4 indices x 5 dilations", worst)};
}

double mass(const RadialFunction& f, int n) { return weighted_lebesgue_norm(f, 0.0, ExtRat(1), n).value; }

Outcome heat_oracle() {
  QuadratureSpec quad;
  double worst_closed = 0.0;
  for (int n : {1, 3}) {
    for (double t : {0.01, 0.1, 1.0}) {
      const double d = 1.0 + 4.0 * t;
      for (int i = 0; i <= 160; ++i) {
        const double r = 0.05 * i;
        const double want = std::pow(d, -0.5 * n) * std::exp(-r * r / d);
        worst_closed = std::max(worst_closed, rel(heat_value(Gaussian{}, t, r, n, quad), want));
      }
    }
  }
  double worst_mass = 0.0;
  for (int n : {1, 3}) {
    const double m0 = mass(BallIndicator{1.0}, n);
    for (double t : {0.01, 0.1, 1.0})
      worst_mass = std::max(worst_mass, rel(mass(HeatEvolved{BallIndicator{1.0}, t, n, quad}, n), m0));
  }
  double worst_semi = 0.0;
  for (int n : {1, 3}) {
    const RadialFunction ab = HeatEvolved{HeatEvolved{AnnulusIndicator{0}, 0.05, n, quad}, 0.07, n, quad};
    const RadialFunction direct = HeatEvolved{AnnulusIndicator{0}, 0.12, n, quad};
    double peak = 0.0, diff = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double r = 0.05 * i;
      const double b = value(direct, r);
      peak = std::max(peak, std::abs(b));
      diff = std::max(diff, std::abs(value(ab, r) - b));
    }
    worst_semi = std::max(worst_semi, diff / peak);
  }
  const bool ok = worst_closed <= 1e-8 && worst_mass <= 1e-8 && worst_semi <= 1e-6;
  return {ok, fmt("closed form %.2e, mass %.2e, semigroup %.2e", worst_closed, worst_mass, worst_semi)};
}

Outcome smoothing() {
  const auto r = harness_run(ExperimentKind::SmoothingRate);
  int passed = 0, total = 0;
  for (const auto& [k, v] : r.measured) {
    if (k.rfind("tuple", 0) != 0 || !v.is_object() || !v.contains("pass")) continue;
    ++total;
    if (v["pass"].get<bool>()) ++passed;
  }
  return {passed >= 3, fmt("%.0f of %.0f tuples within slope tolerance", passed, total)};
}

Outcome meyer() {
  const auto r = harness_run(ExperimentKind::Meyer);
  int passed = 0;
  std::string d;
  for (const auto& name : {"constant", "oscillating"}) {
    const Json* v = find(r, name);
    if (!v || !v->contains("band")) continue;
    if ((*v)["pass"].get<bool>()) ++passed;
    d += std::string(name) + fmt(" band %.3f slope %+.4f; ", (*v)["band"].get<double>(), (*v)["slope"].get<double>());
  }
  return {r.pass && passed >= 2, d + std::to_string(passed) + " sources pass"};
}

Outcome simple(ExperimentKind kind, const std::vector<std::string>& show) {
  const auto r = harness_run(kind);
  std::string d;
  for (const auto& name : show) {
    const Json* v = find(r, name);
    if (v) d += name + "=" + v->dump() + " ";
  }
  return {r.pass, d};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exponent suite", 5, exponent_suite},
      {2, "norm closed forms", 5, norm_closed_forms},
      {3, "ball equivalence", 10, ball_equivalence},
      {4, "dyadic scaling", 5, dyadic_scaling},
      {5, "heat oracle", 30, heat_oracle},
      {6, "smoothing rates", 120, smoothing},
      {7, "duhamel boundedness", 120, meyer},
      {8, "interpolation", 60,
       [] { return simple(ExperimentKind::Interpolation, {"ratio_min", "ratio_max", "k_greedy_over_brute_max"}); }},
      {9, "membership thresholds", 60,
       [] { return simple(ExperimentKind::Membership, {"checked", "mismatches", "negative_controls"}); }},
      {10, "continuity and decay", 60,
       [] {
         return simple(ExperimentKind::Continuity,
                       {"final_relative_difference", "strictly_decreasing", "worst_decay_factor_per_decade"});
       }},
      {11, "uniqueness probe", 300,
       [] {
         return simple(ExperimentKind::Uniqueness,
                       {"early_exponent", "max_converged_difference", "control_max_difference"});
       }},
      {12, "density bound", 30, [] { return simple(ExperimentKind::DensityBound, {"s=-1", "s=0", "s=1"}); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.ok && secs < c.limit_s;
    if (!ok) ++failures;
    std::printf("%s criterion %2d %-22s %7.2fs (limit %3.0fs)  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
