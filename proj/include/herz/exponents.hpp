#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "herz/ext_rat.hpp"

namespace herz {

/// Construction of an index or problem outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal-consistency failure of an exact identity (an arithmetic bug).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Herz index (s, q, r) with q in [1, inf], r in (0, inf].
struct HerzIndex {
  ExtRat s;
  ExtRat q;
  ExtRat r;

  static HerzIndex make(ExtRat s, ExtRat q, ExtRat r);

  /// s/n + 1/q, the position on the regularity line.
  [[nodiscard]] ExtRat level(int n) const;
};

/// Parameters of the weighted semilinear problem under the standing
/// assumptions:
///   gamma > -min(2, n), alpha >= max(1, 1 + gamma/n),
///   gamma/(alpha-1) <= s <= n, alpha <= q <= inf, 0 < r <= inf.
struct ProblemParams {
  int n = 3;
  ExtRat alpha;
  ExtRat gamma;
  HerzIndex index;

  /// Validates the standing assumptions; throws ParameterError naming the
  /// violated condition.
  static ProblemParams make(int n, ExtRat alpha, ExtRat gamma, HerzIndex index);
};

struct Clause {
  std::string name;
  bool holds = false;
  bool informational = false;
};

enum class Criticality {
  DoubleSubcritical,
  SingleCriticalI,
  SingleCriticalII,
  DoubleCritical,
  Supercritical,
  NonIntegrableNonlinearity,
};

std::string to_string(Criticality c);

struct CriticalityReport {
  ExtRat q_c;
  ExtRat Q_c;
  ExtRat level;  // s/n + 1/q
  Criticality kind = Criticality::DoubleSubcritical;
  std::vector<Clause> clause_trace;
};

struct CriticalExponents {
  ExtRat q_c;
  ExtRat Q_c;
};

/// q_c = n(alpha-1)/(2+gamma), Q_c = n alpha/(n+gamma).
CriticalExponents critical_exponents(const ProblemParams& p);

/// Exactly one case. NonIntegrableNonlinearity is tested first, then
/// Supercritical, then the four (sub)critical cases.
CriticalityReport classify(const ProblemParams& p);

struct Inclusions {
  bool contains_test_functions = false;
  bool locally_integrable = false;
};

/// C_c^infty in K^s_{q,r}  <=>  s/n+1/q > 0, or = 0 with r = inf.
/// K^s_{q,r} in L^1_loc    <=>  s/n+1/q < 1, or = 1 with r <= 1.
Inclusions check_inclusions(const HerzIndex& idx, int n);

enum class Theorem { Uniqueness, CriticalUniqueness };

struct HypothesisReport {
  std::vector<Clause> clauses;
  bool verdict = false;
  std::string via;         // name of the clause that made the verdict true
  std::string resolution;  // how ambiguous statements were read
};

/// Uniqueness: L^infty(0,T; K) uniqueness hypotheses.
/// CriticalUniqueness: the scale-critical C([0,T]; closure of C_c^infty) case.
HypothesisReport check_theorem_hypotheses(const ProblemParams& p, Theorem which);

struct SigmaDelta {
  ExtRat sigma;
  ExtRat delta;
};

/// sigma = alpha s - gamma and
/// delta = 1 - (n/2)[(sigma/n + alpha/q) - (s/n + 1/q)].
/// Throws ConsistencyError if the two level equivalences fail.
SigmaDelta sigma_delta(const ProblemParams& p);

/// Exponent e with ||f(lambda .)|| ~ lambda^e ||f||, namely -(s + n/q).
ExtRat scaling_exponent(const HerzIndex& idx, int n);

/// Exponents for the Herz-space heat smoothing estimate
///   ||e^{t Lap} f||_{K^nu_{q,r}} <~ t^{-(n/2)[(mu/n+1/p)-(nu/n+1/q)]} ||f||_{K^mu_{p,r0}}.
struct SmoothingExponents {
  ExtRat mu, nu, p, q, r, r0;
};

HypothesisReport check_smoothing_hypotheses(const SmoothingExponents& e, int n);

/// -(n/2)[(mu/n+1/p) - (nu/n+1/q)]
ExtRat smoothing_rate(const SmoothingExponents& e, int n);

/// Exponents for the Duhamel estimate with weak target
///   ||int_0^t e^{(t-tau)Lap} f(tau) dtau||_{K^nu_{q,inf}} <~ sup ||f(tau)||_{K^mu_{p,r}}.
struct DuhamelExponents {
  ExtRat mu, nu, p, q, r;
};

HypothesisReport check_meyer_hypotheses(const DuhamelExponents& e, int n);

/// Continuity of the semigroup at t = 0: q < inf, or q = inf with r <= 1.
HypothesisReport check_continuity_hypotheses(const HerzIndex& idx);

/// Decay exponent beta = (n/2)[(s/n+1/q) - (s~/n+1/q~)] for the small-time
/// vanishing of t^beta ||e^{t Lap} f|| in the target index.
ExtRat decay_exponent(const HerzIndex& source, const HerzIndex& target, int n);

/// Hypotheses for the small-time decay of t^beta ||e^{t Lap} f|| (source index
/// (s, q, r), target index (s~, q~, r~)).
HypothesisReport check_decay_hypotheses(const HerzIndex& source, const HerzIndex& target, int n);

}  // namespace herz
