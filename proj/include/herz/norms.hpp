#pragma once

#include <cmath>
#include <string>

#include "herz/annular.hpp"
#include "herz/exponents.hpp"
#include "herz/ext_rat.hpp"
#include "herz/radial_function.hpp"

namespace herz {

/// A computed (quasi-)norm with two-sided bounds. A divergent norm has
/// value = lower = upper = inf and carries the growth diagnostic.
struct NormValue {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool divergent = false;
  bool heuristic = false;  // tail closed by window widening rather than a model
  double growth = 0.0;     // divergent: log2 growth per annulus of the terms (0 for logarithmic growth)
  double window_lo = 0.0;  // annulus indices or t-range
  double window_hi = 0.0;
  std::string window_kind = "annuli";
  std::string note;

  [[nodiscard]] bool finite() const { return !divergent && std::isfinite(upper); }
};

/// Herz quasi-norm (sum_j [2^{js} c_j]^r)^{1/r} (sup for r = inf), tails included.
NormValue herz_norm(const AnnularProfile& profile, double s, const ExtRat& r);

/// Same with ball coefficients ||f chi_{B(2^j)}||_q; requires s < 0.
NormValue herz_norm_ball(const AnnularProfile& profile, double s, const ExtRat& r);

/// Decomposes f and aggregates. When a tail has no model the window is
/// widened by 10 annuli at a time; the norm is Divergent once the aggregate
/// grows by more than growth_factor twice in a row.
NormValue herz_norm_of(const RadialFunction& f, const HerzIndex& idx, int n, const QuadratureSpec& quad = {},
                       Window window = {}, double growth_factor = 1.01);

/// f*(t) for radial nonincreasing |f|: f((t/v_n)^{1/n}).
/// Throws std::invalid_argument when sampling finds |f| increasing.
double rearrangement(const RadialFunction& f, double t, int n);

/// True when |f| is radially nonincreasing on sampled radii.
bool is_radially_nonincreasing(const RadialFunction& f);

/// ||(|x|^s f)||_{L^{p,r}} = (int_0^inf [t^{1/p} g*(t)]^r dt/t)^{1/r}, g = |x|^s f.
NormValue lorentz_norm(const RadialFunction& f, double s, const ExtRat& p, const ExtRat& r, int n,
                       const QuadratureSpec& quad = {}, Window window = {});

/// ||(|x|^{-s} chi_E)||_{L^{q,r}_s} for the bump chain, in closed form.
NormValue bump_chain_lorentz(const BumpChain& chain, const ExtRat& q, const ExtRat& r, int n);

/// ||(|x|^s f)||_{L^q} by direct radial quadrature (not annulus-aligned).
NormValue weighted_lebesgue_norm(const RadialFunction& f, double s, const ExtRat& q, int n,
                                 const QuadratureSpec& quad = {});

/// The couple (K^{s0}_{q,r0}, K^{s1}_{q,r1}).
struct InterpolationCouple {
  double s0 = 0.0;
  double s1 = 1.0;
  ExtRat r0 = ExtRat(1);
  ExtRat r1 = ExtRat(1);
  ExtRat q = ExtRat(2);

  void validate() const;
};

/// K(t, f) for a windowed profile: greedy whole-annulus split (value and upper)
/// and max_j min(2^{j s0}, t 2^{j s1}) a_j (lower).
NormValue k_functional(const AnnularProfile& profile, const InterpolationCouple& couple, double t);

/// (int_0^inf [t^{-theta} K(t, f)]^r dt/t)^{1/r}, integrated exactly between
/// the dyadic breakpoints of K with closed-form tails.
NormValue interpolation_norm(const AnnularProfile& profile, const InterpolationCouple& couple, double theta,
                             const ExtRat& r);

/// Result of summing sum_{k>=0} 2^{-k g} ((k0 + k)/k0)^{-m}.
struct TailSum {
  bool converges = false;
  double lo = 0.0;
  double hi = 0.0;
};

TailSum power_tail_sum(double g, double m, double k0);

}  // namespace herz
