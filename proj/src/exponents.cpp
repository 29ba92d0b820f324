#include "herz/exponents.hpp"

#include <algorithm>

namespace herz {

namespace {

const ExtRat kZero{0};
const ExtRat kOne{1};
const ExtRat kInfinity = ExtRat::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

HerzIndex HerzIndex::make(ExtRat s, ExtRat q, ExtRat r) {
  require(s.is_finite(), "s must be finite");
  require(q >= kOne, "q must satisfy 1 <= q <= inf");
  require(r > kZero, "r must satisfy 0 < r <= inf");
  return HerzIndex{s, q, r};
}

ExtRat HerzIndex::level(int n) const { return s / ExtRat(n) + q.reciprocal(); }

ProblemParams ProblemParams::make(int n, ExtRat alpha, ExtRat gamma, HerzIndex index) {
  require(n >= 1, "n must be a positive integer");
  require(alpha.is_finite() && alpha > kOne, "alpha must be finite and > 1");
  require(gamma.is_finite(), "gamma must be finite");
  const ExtRat nn(n);
  require(gamma > -ExtRat(std::min(2, n)), "(*) gamma > -min(2, n)");
  require(alpha >= max(kOne, kOne + gamma / nn), "(*) alpha >= max(1, 1 + gamma/n)");
  require(gamma / (alpha - kOne) <= index.s, "(*) gamma/(alpha-1) <= s");
  require(index.s <= nn, "(*) s <= n");
  require(alpha <= index.q, "(*) alpha <= q <= inf");
  require(index.r > kZero, "(*) 0 < r <= inf");
  require(index.q >= kOne, "q >= 1");
  return ProblemParams{n, alpha, gamma, index};
}

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::DoubleSubcritical: return "DoubleSubcritical";
    case Criticality::SingleCriticalI: return "SingleCriticalI";
    case Criticality::SingleCriticalII: return "SingleCriticalII";
    case Criticality::DoubleCritical: return "DoubleCritical";
    case Criticality::Supercritical: return "Supercritical";
    case Criticality::NonIntegrableNonlinearity: return "NonIntegrableNonlinearity";
  }
  return "?";
}

CriticalExponents critical_exponents(const ProblemParams& p) {
  const ExtRat nn(p.n);
  const ExtRat two_plus_gamma = ExtRat(2) + p.gamma;
  const ExtRat n_plus_gamma = nn + p.gamma;
  if (two_plus_gamma.is_zero()) throw ArithmeticError("q_c undefined: 2 + gamma = 0");
  if (n_plus_gamma.is_zero()) throw ArithmeticError("Q_c undefined: n + gamma = 0");
  return {nn * (p.alpha - kOne) / two_plus_gamma, nn * p.alpha / n_plus_gamma};
}

CriticalityReport classify(const ProblemParams& p) {
  const auto [q_c, Q_c] = critical_exponents(p);
  const ExtRat v = p.index.level(p.n);
  const ExtRat a = q_c.reciprocal();
  const ExtRat b = Q_c.reciprocal();

  CriticalityReport rep{q_c, Q_c, v, Criticality::DoubleSubcritical, {}};
  auto& tr = rep.clause_trace;

  const bool above_b = v > b;
  const bool at_b_large_r = v == b && p.index.r > p.alpha;
  tr.push_back({"v > 1/Q_c", above_b});
  tr.push_back({"v = 1/Q_c and r > alpha", at_b_large_r});
  if (above_b || at_b_large_r) {
    rep.kind = Criticality::NonIntegrableNonlinearity;
    return rep;
  }
  const bool above_a = v > a;
  tr.push_back({"v > 1/q_c", above_a});
  if (above_a) {
    rep.kind = Criticality::Supercritical;
    return rep;
  }
  const bool below_both = v < a && v < b;
  tr.push_back({"v < min(1/q_c, 1/Q_c)", below_both});
  if (below_both) {
    rep.kind = Criticality::DoubleSubcritical;
    return rep;
  }
  const bool sc1 = v == b && b < a;
  tr.push_back({"v = 1/Q_c < 1/q_c", sc1});
  if (sc1) {
    rep.kind = Criticality::SingleCriticalI;
    return rep;
  }
  const bool sc2 = v == a && a < b;
  tr.push_back({"v = 1/q_c < 1/Q_c", sc2});
  if (sc2) {
    rep.kind = Criticality::SingleCriticalII;
    return rep;
  }
  const bool dc = v == a && a == b;
  tr.push_back({"v = 1/q_c = 1/Q_c", dc});
  if (!dc) throw ConsistencyError("classify: no case selected for v = " + v.str());
  rep.kind = Criticality::DoubleCritical;
  return rep;
}

Inclusions check_inclusions(const HerzIndex& idx, int n) {
  const ExtRat v = idx.level(n);
  Inclusions out;
  out.contains_test_functions = v > kZero || (v == kZero && idx.r.is_infinite());
  out.locally_integrable = v < kOne || (v == kOne && idx.r <= kOne);
  return out;
}

HypothesisReport check_theorem_hypotheses(const ProblemParams& p, Theorem which) {
  const auto [q_c, Q_c] = critical_exponents(p);
  const ExtRat v = p.index.level(p.n);
  const ExtRat a = q_c.reciprocal();
  const ExtRat b = Q_c.reciprocal();
  const ExtRat& q = p.index.q;
  const ExtRat& r = p.index.r;

  HypothesisReport rep;
  auto& cs = rep.clauses;
  const auto inc = check_inclusions(p.index, p.n);
  cs.push_back({"C_c^infty subset K (informational)", inc.contains_test_functions, true});
  cs.push_back({"K subset L^1_loc (informational)", inc.locally_integrable, true});

  if (which == Theorem::Uniqueness) {
    const bool c1 = v < min(a, b);
    const bool c2 = v == b && b < a && r <= p.alpha;
    cs.push_back({"(i) v < min(1/q_c, 1/Q_c)", c1});
    cs.push_back({"(ii) v = 1/Q_c < 1/q_c and r <= alpha", c2});
    // The Gronwall step runs the nonlinear estimate through an auxiliary
    // exponent r0 >= r/alpha; report the smallest choice and whether the
    // smoothing estimate (sigma, q/alpha, r0) -> (s, q, r) admits it.
    const ExtRat r0 = r.is_infinite() ? r : r / p.alpha;
    const auto sd = sigma_delta(p);
    const SmoothingExponents se{sd.sigma, p.index.s, q / p.alpha, q, r, r0};
    const bool r0_ok = check_smoothing_hypotheses(se, p.n).verdict;
    cs.push_back({"auxiliary r0 = r/alpha = " + r0.str() + " admissible for smoothing (informational)", r0_ok, true});
    rep.verdict = c1 || c2;
    rep.via = c1 ? "(i)" : (c2 ? "(ii)" : "");
    return rep;
  }

  const bool n3 = p.n >= 3;
  const bool s_strict = p.gamma / (p.alpha - kOne) < p.index.s;
  const bool v_pos = v > kZero;
  cs.push_back({"n >= 3", n3});
  cs.push_back({"gamma/(alpha-1) < s", s_strict});
  cs.push_back({"s/n + 1/q > 0", v_pos});
  const bool c1 = v == a && a < b && q.is_finite() && r.is_infinite();
  const bool sub_a = q.is_finite() && r <= p.alpha - kOne;
  const bool sub_b = r <= min(kOne, p.alpha - kOne);
  const bool c2 = v == a && a == b && (sub_a || sub_b);
  cs.push_back({"(i) v = 1/q_c < 1/Q_c, q < inf, r = inf", c1});
  cs.push_back({"(ii) v = 1/q_c = 1/Q_c with [q < inf, r <= alpha-1] or [r <= min(1, alpha-1)]", c2});
  rep.resolution = "(ii) sub-cases read as alternatives (disjunction)";
  const bool base = n3 && s_strict && v_pos;
  rep.verdict = base && (c1 || c2);
  if (rep.verdict) rep.via = c1 ? "(i)" : (sub_a ? "(ii) q < inf, r <= alpha-1" : "(ii) r <= min(1, alpha-1)");
  return rep;
}

SigmaDelta sigma_delta(const ProblemParams& p) {
  const ExtRat nn(p.n);
  const ExtRat sigma = p.alpha * p.index.s - p.gamma;
  const ExtRat v = p.index.level(p.n);
  const ExtRat w = sigma / nn + p.alpha * p.index.q.reciprocal();
  const ExtRat delta = kOne - nn / ExtRat(2) * (w - v);

  const auto [q_c, Q_c] = critical_exponents(p);
  const bool lhs1 = v <= q_c.reciprocal();
  const bool rhs1 = v >= w - ExtRat(2) / nn;
  const bool lhs2 = v <= Q_c.reciprocal();
  const bool rhs2 = w <= kOne;
  if (lhs1 != rhs1 || lhs2 != rhs2) {
    throw ConsistencyError("sigma_delta: level equivalences failed");
  }
  return {sigma, delta};
}

ExtRat scaling_exponent(const HerzIndex& idx, int n) { return -(idx.s + ExtRat(n) * idx.q.reciprocal()); }

ExtRat smoothing_rate(const SmoothingExponents& e, int n) {
  const ExtRat nn(n);
  const ExtRat src = e.mu / nn + e.p.reciprocal();
  const ExtRat dst = e.nu / nn + e.q.reciprocal();
  return -(nn / ExtRat(2) * (src - dst));
}

HypothesisReport check_smoothing_hypotheses(const SmoothingExponents& e, int n) {
  const ExtRat nn(n);
  const ExtRat src = e.mu / nn + e.p.reciprocal();
  const ExtRat dst = e.nu / nn + e.q.reciprocal();
  HypothesisReport rep;
  auto& cs = rep.clauses;
  cs.push_back({"1 <= p, q", e.p >= kOne && e.q >= kOne});
  cs.push_back({"r, r0 > 0", e.r > kZero && e.r0 > kZero});
  cs.push_back({"mu >= nu", e.mu >= e.nu});
  cs.push_back({"0 <= nu/n+1/q <= mu/n+1/p <= 1", kZero <= dst && dst <= src && src <= kOne});
  cs.push_back({"r0 = inf if mu/n+1/p = 0", !(src == kZero) || e.r0.is_infinite()});
  cs.push_back({"r = inf if nu/n+1/q = 0", !(dst == kZero) || e.r.is_infinite()});
  const bool finite_pq = e.p.is_finite() && e.q.is_finite();
  const bool c1 = e.mu > e.nu && finite_pq && e.r0.is_infinite() && dst < src && src < kOne;
  const bool c2 = finite_pq && e.r0 <= e.r && src < kOne;
  const bool c3 = e.r0 <= min(kOne, e.r);
  cs.push_back({"(1) mu > nu, p,q < inf, r0 = inf, nu/n+1/q < mu/n+1/p < 1", c1});
  cs.push_back({"(2) p,q < inf, r0 <= r, mu/n+1/p < 1", c2});
  cs.push_back({"(3) r0 <= min(1, r)", c3});
  const bool base = std::all_of(cs.begin(), cs.begin() + 6, [](const Clause& c) { return c.holds; });
  rep.verdict = base && (c1 || c2 || c3);
  if (rep.verdict) rep.via = c1 ? "(1)" : (c2 ? "(2)" : "(3)");
  return rep;
}

HypothesisReport check_meyer_hypotheses(const DuhamelExponents& e, int n) {
  const ExtRat nn(n);
  const ExtRat src = e.mu / nn + e.p.reciprocal();
  const ExtRat dst = e.nu / nn + e.q.reciprocal();
  HypothesisReport rep;
  auto& cs = rep.clauses;
  cs.push_back({"n >= 3", n >= 3});
  cs.push_back({"1 <= p, q", e.p >= kOne && e.q >= kOne});
  cs.push_back({"r > 0", e.r > kZero});
  cs.push_back({"mu > nu", e.mu > e.nu});
  cs.push_back({"0 < nu/n+1/q < mu/n+1/p <= 1", kZero < dst && dst < src && src <= kOne});
  cs.push_back({"nu/n+1/q = (mu/n+1/p) - 2/n", dst == src - ExtRat(2) / nn});
  const bool c1 = e.p.is_finite() && e.q.is_finite() && src < kOne;
  const bool c2 = src <= kOne && e.r <= kOne;
  cs.push_back({"(1) p,q < inf, mu/n+1/p < 1", c1});
  cs.push_back({"(2) mu/n+1/p <= 1, r <= 1", c2});
  const bool base = std::all_of(cs.begin(), cs.begin() + 6, [](const Clause& c) { return c.holds; });
  rep.verdict = base && (c1 || c2);
  if (rep.verdict) rep.via = c1 ? "(1)" : "(2)";
  return rep;
}

HypothesisReport check_continuity_hypotheses(const HerzIndex& idx) {
  HypothesisReport rep;
  const bool a = idx.q.is_finite();
  const bool b = idx.q.is_infinite() && idx.r <= kOne;
  rep.clauses.push_back({"q < inf", a});
  rep.clauses.push_back({"q = inf and r <= 1", b});
  rep.verdict = a || b;
  rep.via = a ? "q < inf" : (b ? "q = inf and r <= 1" : "");
  return rep;
}

ExtRat decay_exponent(const HerzIndex& source, const HerzIndex& target, int n) {
  const ExtRat nn(n);
  return nn / ExtRat(2) * (source.level(n) - target.level(n));
}

HypothesisReport check_decay_hypotheses(const HerzIndex& source, const HerzIndex& target, int n) {
  const ExtRat v = source.level(n);
  const ExtRat w = target.level(n);
  const ExtRat beta = decay_exponent(source, target, n);
  HypothesisReport rep;
  auto& cs = rep.clauses;
  cs.push_back({"beta > 0", beta > kZero});
  cs.push_back({"s >= s~", source.s >= target.s});
  cs.push_back({"0 <= s~/n+1/q~ <= s/n+1/q <= 1", kZero <= w && w <= v && v <= kOne});
  cs.push_back({"r = inf if s/n+1/q = 0", !(v == kZero) || source.r.is_infinite()});
  cs.push_back({"r~ = inf if s~/n+1/q~ = 0", !(w == kZero) || target.r.is_infinite()});
  const bool finite_q = source.q.is_finite() && target.q.is_finite();
  const bool c1 = source.s > target.s && finite_q && source.r.is_infinite() && w < v && v < kOne;
  const bool c2 = finite_q && source.r == target.r && v < kOne;
  const bool c3 = source.r <= kOne;
  cs.push_back({"(1) s > s~, q,q~ < inf, r = inf, s~/n+1/q~ < s/n+1/q < 1", c1});
  cs.push_back({"(2) q,q~ < inf, r = r~, s/n+1/q < 1", c2});
  cs.push_back({"(3) r <= 1", c3});
  const bool base = std::all_of(cs.begin(), cs.begin() + 5, [](const Clause& c) { return c.holds; });
  rep.verdict = base && (c1 || c2 || c3);
  if (rep.verdict) rep.via = c1 ? "(1)" : (c2 ? "(2)" : "(3)");
  return rep;
}

}  // namespace herz
