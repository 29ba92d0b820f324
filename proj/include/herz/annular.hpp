#pragma once

#include <map>
#include <string>
#include <vector>

#include "herz/ext_rat.hpp"
#include "herz/quadrature.hpp"
#include "herz/radial_function.hpp"

namespace herz {

/// Range of annulus indices j_min..j_max (inclusive).
struct Window {
  int j_min = -60;
  int j_max = 40;
};

struct AnnularCoeff {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Coefficients outside the window. For Power tails,
///   c_j in [lo, hi] * 2^{(j - anchor) rate} * (|j| / |anchor|)^{-log_rate}
/// for every j beyond the window on that side; anchor is the first index
/// outside it.
struct TailModel {
  enum class Kind { Zero, Power, Unknown };
  Kind kind = Kind::Unknown;
  int anchor = 0;
  double lo = 0.0;
  double hi = 0.0;
  double rate = 0.0;
  double log_rate = 0.0;
  std::string note;

  static TailModel zero(int anchor, std::string note = {});
  static TailModel unknown(int anchor, std::string note);
};

/// Per-annulus L^q norms ||f chi_{A_j}||_q, without the 2^{js} weight.
struct AnnularProfile {
  ExtRat q = ExtRat(1);
  int n = 3;
  int j_min = 0;
  int j_max = -1;
  std::vector<AnnularCoeff> coeffs;  // index j - j_min
  TailModel below;
  TailModel above;

  [[nodiscard]] bool in_window(int j) const { return j >= j_min && j <= j_max; }
  /// Window coefficient; zero outside the window.
  [[nodiscard]] AnnularCoeff at(int j) const;
};

/// S operator: f -> {||f chi_{A_j}||_{L^q}}. Adaptive Gauss-Legendre in
/// log-radius on each annulus (q < inf) or a refined supremum (q = inf).
/// Tails beyond the window come from the function's origin/far-field models.
AnnularProfile annular_decompose(const RadialFunction& f, const ExtRat& q, int n, Window window = {},
                                 const QuadratureSpec& quad = {});

/// Same machinery with the measure c * rho^{dim-1} d rho on (0, inf) in place
/// of Lebesgue measure on R^n (dim may be 0).
AnnularProfile annular_decompose_measure(const RadialFunction& f, const ExtRat& q, double dim, double measure_coef,
                                         Window window, const QuadratureSpec& quad);

/// Profile from explicit coefficients with zero tails.
AnnularProfile profile_from_coefficients(const ExtRat& q, int n, int j_min, const std::vector<double>& coeffs);

/// R operator: sum_j f_j chi_{A_j}. A constant-one piece becomes the
/// annulus indicator itself.
RadialFunction reconstruct(const std::map<int, RadialFunction>& pieces);

/// Restrictions f chi_{A_j} for j in the window (inputs to reconstruct).
std::map<int, RadialFunction> restrict_to_annuli(const RadialFunction& f, Window window);

/// Union over j >= 1 of balls of radius j^{-beta/n} centred at (2^{j-1}+1) e_1.
struct BumpChain {
  ExtRat beta = ExtRat(0);
};

/// Analytic brackets for ||(|x|^{-s} chi_E) chi_{A_j}||_{L^q}, window [0, j_max].
AnnularProfile bump_chain_profile(const BumpChain& chain, const ExtRat& s, const ExtRat& q, int n, int j_max);

/// Lebesgue measure of the annulus A_j in R^n.
double annulus_volume(int j, int n);

}  // namespace herz
