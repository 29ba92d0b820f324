#include "herz/norms.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace herz {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Aggregate {
  double val = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool divergent = false;
  bool unknown = false;
  double growth = 0.0;
  std::string note;

  void append_note(const std::string& s) {
    if (s.empty()) return;
    if (!note.empty()) note += "; ";
    note += s;
  }
};

double positive_r(const ExtRat& r) {
  if (!(r > ExtRat(0))) throw std::invalid_argument("norm: r must be positive");
  return r.to_double();
}

void add_term(Aggregate& a, double v, double lo, double hi, double r) {
  if (std::isinf(r)) {
    a.val = std::max(a.val, v);
    a.lo = std::max(a.lo, lo);
    a.hi = std::max(a.hi, hi);
  } else {
    a.val += std::pow(v, r);
    a.lo += std::pow(lo, r);
    a.hi += std::pow(hi, r);
  }
}

/// Adds sum over the tail of [2^{js} c_j]^r, c_j from the model.
void add_tail(Aggregate& a, const TailModel& t, bool below, double s, double r) {
  switch (t.kind) {
    case TailModel::Kind::Zero:
      return;
    case TailModel::Kind::Unknown:
      a.unknown = true;
      a.append_note(std::string(below ? "lower" : "upper") + " tail unknown: " + t.note);
      return;
    case TailModel::Kind::Power:
      break;
  }
  if (t.log_rate != 0.0 && t.anchor == 0) {
    a.unknown = true;
    a.append_note("logarithmic tail anchored at 0");
    return;
  }
  double step = below ? (s + t.rate) : -(s + t.rate);
  if (std::abs(step) < 1e-12) step = 0.0;
  const double shift = t.anchor * s * kLn2;
  const double lo = t.lo > 0.0 ? std::exp(shift + std::log(t.lo)) : 0.0;
  const double hi = t.hi > 0.0 ? std::exp(shift + std::log(t.hi)) : 0.0;
  const double k0 = std::max(1.0, std::abs(static_cast<double>(t.anchor)));
  bool converges = false;
  if (std::isinf(r)) {
    converges = step > 0.0 || (step == 0.0 && t.log_rate >= 0.0);
    if (converges) {
      a.lo = std::max(a.lo, lo);
      a.hi = std::max(a.hi, hi);
      a.val = std::max(a.val, 0.5 * (lo + hi));
    }
  } else {
    const TailSum ts = power_tail_sum(step * r, t.log_rate * r, k0);
    converges = ts.converges;
    if (converges) {
      const double lr = std::pow(lo, r);
      const double hr = std::pow(hi, r);
      a.lo += lr * ts.lo;
      a.hi += hr * ts.hi;
      a.val += 0.25 * (lr + hr) * (ts.lo + ts.hi);
    }
  }
  if (!converges) {
    if (lo > 0.0) {
      a.divergent = true;
      a.growth = -step;
      a.append_note(std::string(below ? "lower" : "upper") + " tail diverges");
    } else {
      a.unknown = true;
      a.append_note(std::string(below ? "lower" : "upper") + " tail bound diverges without a lower bound");
    }
  }
}

NormValue finish(const Aggregate& a, double r, double wlo, double whi, const std::string& kind) {
  NormValue nv;
  nv.window_lo = wlo;
  nv.window_hi = whi;
  nv.window_kind = kind;
  nv.note = a.note;
  if (a.divergent) {
    nv.divergent = true;
    nv.value = nv.lower = nv.upper = kInf;
    nv.growth = a.growth;
    return nv;
  }
  const double inv = std::isinf(r) ? 1.0 : 1.0 / r;
  nv.value = std::pow(a.val, inv);
  nv.lower = std::min(nv.value, std::pow(a.lo, inv));
  nv.upper = a.unknown ? kInf : std::max(nv.value, std::pow(a.hi, inv));
  return nv;
}

/// l^r norm of a finite sequence (sup for r = inf).
double lr_norm(const std::vector<double>& w, double r) {
  if (w.empty()) return 0.0;
  if (std::isinf(r)) return *std::max_element(w.begin(), w.end());
  double acc = 0.0;
  for (double x : w) acc += std::pow(x, r);
  return std::pow(acc, 1.0 / r);
}

}  // namespace

TailSum power_tail_sum(double g, double m, double k0) {
  TailSum out;
  if (std::abs(g) < 1e-12) g = 0.0;
  if (!(k0 > 0.0)) throw std::invalid_argument("power_tail_sum: k0 must be positive");
  auto term = [&](double k) { return std::exp(-k * g * kLn2 - m * std::log((k0 + k) / k0)); };
  if (g < 0.0) return out;
  if (g == 0.0) {
    if (!(m > 1.0)) return out;
    constexpr int kTerms = 20000;
    double acc = 0.0;
    for (int k = 0; k < kTerms; ++k) acc += term(k);
    const double integral = std::pow(k0, m) * std::pow(k0 + kTerms, 1.0 - m) / (m - 1.0);
    out.converges = true;
    out.lo = acc + integral;
    out.hi = acc + integral + term(kTerms);
    return out;
  }
  double acc = 0.0;
  const double q = std::exp2(-g);
  for (int k = 0; k < 5000000; ++k) {
    const double tk = term(k);
    acc += tk;
    const double next_ratio = term(k + 1) / tk;
    const double ratio = m >= 0.0 ? q : next_ratio;
    if (ratio < 1.0) {
      const double rem = tk * ratio / (1.0 - ratio);
      if (rem <= 1e-17 * acc || tk == 0.0) {
        out.converges = true;
        out.lo = acc;
        out.hi = acc + rem;
        return out;
      }
    }
  }
  return out;
}

NormValue herz_norm(const AnnularProfile& profile, double s, const ExtRat& r) {
  const double rr = positive_r(r);
  Aggregate a;
  for (int j = profile.j_min; j <= profile.j_max; ++j) {
    const auto c = profile.at(j);
    const double w = std::exp2(j * s);
    add_term(a, w * c.value, w * c.lower, w * c.upper, rr);
  }
  add_tail(a, profile.below, true, s, rr);
  add_tail(a, profile.above, false, s, rr);
  return finish(a, rr, profile.j_min, profile.j_max, "annuli");
}

NormValue herz_norm_ball(const AnnularProfile& profile, double s, const ExtRat& r) {
  if (!(s < 0.0)) throw std::invalid_argument("herz_norm_ball: requires s < 0");
  const double rr = positive_r(r);
  const bool sup = profile.q.is_infinite();
  const double q = profile.q.to_double();
  Aggregate a;

  // q-mass of f below the window
  double m_lo = 0.0;
  double m_hi = 0.0;
  const TailModel& b = profile.below;
  bool below_power = false;
  if (b.kind == TailModel::Kind::Unknown) {
    a.unknown = true;
    a.append_note("lower tail unknown: " + b.note);
  } else if (b.kind == TailModel::Kind::Power) {
    const double k0 = std::max(1.0, std::abs(static_cast<double>(b.anchor)));
    if (sup) {
      if (b.rate >= 0.0) {
        m_lo = b.lo;
        m_hi = b.hi;
        below_power = true;
      } else {
        a.divergent = b.lo > 0.0;
        a.unknown = !a.divergent;
      }
    } else {
      const TailSum ts = power_tail_sum(b.rate * q, b.log_rate * q, k0);
      if (ts.converges && b.rate > 0.0) {
        m_lo = std::pow(b.lo, q) * ts.lo;
        m_hi = std::pow(b.hi, q) * ts.hi;
        below_power = true;
      } else {
        a.divergent = b.lo > 0.0;
        a.unknown = !a.divergent;
      }
    }
    if (a.divergent) a.append_note("f is not locally in L^q");
  }
  if (a.divergent) return finish(a, rr, profile.j_min, profile.j_max, "balls");

  double run_v = sup ? m_lo : 0.5 * (m_lo + m_hi);
  double run_lo = m_lo;
  double run_hi = m_hi;
  for (int j = profile.j_min; j <= profile.j_max; ++j) {
    const auto c = profile.at(j);
    if (sup) {
      run_v = std::max(run_v, c.value);
      run_lo = std::max(run_lo, c.lower);
      run_hi = std::max(run_hi, c.upper);
    } else {
      run_v += std::pow(c.value, q);
      run_lo += std::pow(c.lower, q);
      run_hi += std::pow(c.upper, q);
    }
    const double w = std::exp2(j * s);
    const double bv = sup ? run_v : std::pow(run_v, 1.0 / q);
    const double bl = sup ? run_lo : std::pow(run_lo, 1.0 / q);
    const double bh = sup ? run_hi : std::pow(run_hi, 1.0 / q);
    add_term(a, w * bv, w * bl, w * bh, rr);
  }

  if (below_power) {
    // B_j <= hi' 2^{(j - anchor) rate} and B_j >= c_j below the window
    TailModel upper_model = b;
    upper_model.log_rate = 0.0;
    if (!sup) upper_model.hi = b.hi * std::pow(1.0 / (1.0 - std::exp2(-b.rate * q)), 1.0 / q);
    upper_model.lo = upper_model.hi;
    TailModel lower_model = b;
    lower_model.hi = lower_model.lo;
    Aggregate au;
    Aggregate al;
    add_tail(au, upper_model, true, s, rr);
    add_tail(al, lower_model, true, s, rr);
    if (au.divergent || al.divergent || au.unknown) {
      a.unknown = true;
      a.append_note("ball tail below the window not summable");
    } else {
      a.hi = std::isinf(rr) ? std::max(a.hi, au.hi) : a.hi + au.hi;
      a.lo = std::isinf(rr) ? std::max(a.lo, al.lo) : a.lo + al.lo;
      a.val = std::isinf(rr) ? std::max(a.val, 0.5 * (au.hi + al.lo)) : a.val + 0.5 * (au.hi + al.lo);
    }
  }

  // above the window B_j lies between B_{j_max} and ||f||_q
  const TailModel& t = profile.above;
  double total_hi = run_hi;
  bool above_ok = true;
  if (t.kind == TailModel::Kind::Unknown) {
    above_ok = false;
  } else if (t.kind == TailModel::Kind::Power) {
    const double k0 = std::max(1.0, std::abs(static_cast<double>(t.anchor)));
    if (sup) {
      if (t.rate <= 0.0) {
        total_hi = std::max(total_hi, t.hi);
      } else {
        above_ok = false;
      }
    } else {
      const TailSum ts = power_tail_sum(-t.rate * q, t.log_rate * q, k0);
      if (ts.converges) {
        total_hi += std::pow(t.hi, q) * ts.hi;
      } else {
        above_ok = false;
      }
    }
  }
  if (!above_ok) {
    a.unknown = true;
    a.append_note("upper tail of the ball profile unbounded");
  } else {
    const double bl = sup ? run_lo : std::pow(run_lo, 1.0 / q);
    const double bv = sup ? run_v : std::pow(run_v, 1.0 / q);
    const double bh = sup ? total_hi : std::pow(total_hi, 1.0 / q);
    const double first = std::exp2((profile.j_max + 1) * s);
    if (std::isinf(rr)) {
      a.lo = std::max(a.lo, first * bl);
      a.val = std::max(a.val, first * bv);
      a.hi = std::max(a.hi, first * bh);
    } else {
      const double geo = std::pow(first, rr) / (1.0 - std::exp2(s * rr));
      a.lo += std::pow(bl, rr) * geo;
      a.val += std::pow(bv, rr) * geo;
      a.hi += std::pow(bh, rr) * geo;
    }
  }
  return finish(a, rr, profile.j_min, profile.j_max, "balls");
}

NormValue herz_norm_of(const RadialFunction& f, const HerzIndex& idx, int n, const QuadratureSpec& quad,
                       Window window, double growth_factor) {
  const double s = idx.s.to_double();
  auto prof = annular_decompose(f, idx.q, n, window, quad);
  auto nv = herz_norm(prof, s, idx.r);
  if (nv.divergent || std::isfinite(nv.upper)) return nv;

  double prev = nv.value;
  int grew = 0;
  int flat = 0;
  for (int iter = 0; iter < 40; ++iter) {
    const bool widen_below = prof.below.kind == TailModel::Kind::Unknown;
    const bool widen_above = prof.above.kind == TailModel::Kind::Unknown;
    if (widen_below) window.j_min = std::max(-1000, window.j_min - 10);
    if (widen_above) window.j_max = std::min(1000, window.j_max + 10);
    prof = annular_decompose(f, idx.q, n, window, quad);
    nv = herz_norm(prof, s, idx.r);
    if (nv.divergent || std::isfinite(nv.upper)) return nv;
    const double cur = nv.value;
    const double growth = prev > 0.0 ? cur / prev : (cur > 0.0 ? kInf : 1.0);
    if (growth > growth_factor) {
      ++grew;
      flat = 0;
    } else {
      ++flat;
      grew = 0;
    }
    if (grew >= 2) {
      NormValue d;
      d.divergent = true;
      d.heuristic = true;
      d.value = d.lower = d.upper = kInf;
      d.growth = std::log2(growth) / 10.0;
      d.window_lo = window.j_min;
      d.window_hi = window.j_max;
      d.note = "aggregate kept growing under window widening";
      return d;
    }
    if (flat >= 2) {
      nv.heuristic = true;
      nv.lower = nv.value;
      nv.upper = nv.value * std::max(1.0, growth);
      nv.note += "; tail closed by window widening";
      return nv;
    }
    prev = cur;
  }
  nv.heuristic = true;
  nv.note += "; widening limit reached";
  return nv;
}

bool is_radially_nonincreasing(const RadialFunction& f) {
  double prev = kInf;
  for (int i = -50 * 8; i <= 30 * 8; ++i) {
    const double v = std::abs(value(f, std::exp2(i / 8.0)));
    if (v > prev * (1.0 + 1e-9) + 1e-300) return false;
    prev = v;
  }
  return true;
}

double rearrangement(const RadialFunction& f, double t, int n) {
  if (!(t > 0.0)) throw std::invalid_argument("rearrangement: t must be positive");
  if (!is_radially_nonincreasing(f)) throw std::invalid_argument("rearrangement: f is not radially nonincreasing");
  return std::abs(value(f, std::pow(t / ball_volume(n), 1.0 / n)));
}

NormValue lorentz_norm(const RadialFunction& f, double s, const ExtRat& p, const ExtRat& r, int n,
                       const QuadratureSpec& quad, Window window) {
  if (p.is_infinite() || !(p > ExtRat(0))) throw std::invalid_argument("lorentz_norm: p must be finite and positive");
  const double rr = positive_r(r);
  const double pd = p.to_double();
  const RadialFunction g = s == 0.0 ? f : RadialFunction(PowerWeightProduct{f, s});
  const double vn = ball_volume(n);
  if (is_radially_nonincreasing(g)) {
    // t = v_n rho^n turns the t-integral into a radial one with measure n v_n^{r/p} d rho / rho
    const RadialFunction h = PowerWeightProduct{g, n / pd};
    const double coef = std::isinf(rr) ? 1.0 : n * std::pow(vn, rr / pd);
    const auto prof = annular_decompose_measure(h, r, 0.0, coef, window, quad);
    auto nv = herz_norm(prof, 0.0, r);
    if (std::isinf(rr) && !nv.divergent) {
      const double c = std::pow(vn, 1.0 / pd);
      nv.value *= c;
      nv.lower *= c;
      nv.upper *= c;
    }
    nv.note = nv.note.empty() ? "monotone fast path" : "monotone fast path; " + nv.note;
    return nv;
  }
  // numeric rearrangement from fine radial samples
  struct Cell {
    double v;
    double vol;
  };
  std::vector<Cell> cells;
  constexpr int kPerOctave = 64;
  for (int i = window.j_min * kPerOctave; i < window.j_max * kPerOctave; ++i) {
    const double a = std::exp2(static_cast<double>(i) / kPerOctave);
    const double b = std::exp2(static_cast<double>(i + 1) / kPerOctave);
    const double mid = std::sqrt(a * b);
    cells.push_back({std::abs(value(g, mid)), vn * (std::pow(b, n) - std::pow(a, n))});
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.v > y.v; });
  double total = 0.0;
  double acc = 0.0;
  for (const auto& c : cells) {
    const double next = total + c.vol;
    if (std::isinf(rr)) {
      acc = std::max(acc, c.v * std::pow(next, 1.0 / pd));
    } else {
      acc += std::pow(c.v, rr) * (pd / rr) * (std::pow(next, rr / pd) - std::pow(total, rr / pd));
    }
    total = next;
  }
  NormValue nv;
  nv.value = std::isinf(rr) ? acc : std::pow(acc, 1.0 / rr);
  nv.lower = 0.95 * nv.value;
  nv.upper = 1.05 * nv.value;
  nv.heuristic = true;
  nv.window_lo = window.j_min;
  nv.window_hi = window.j_max;
  nv.note = "numeric rearrangement on 64 cells per octave";
  return nv;
}

NormValue bump_chain_lorentz(const BumpChain& chain, const ExtRat& q, const ExtRat& r, int n) {
  if (q.is_infinite()) throw std::invalid_argument("bump_chain_lorentz: q must be finite");
  const double rr = positive_r(r);
  const double qd = q.to_double();
  const double beta = chain.beta.to_double();
  NormValue nv;
  nv.window_kind = "balls";
  nv.window_lo = 1;
  nv.window_hi = kInf;
  if (!(chain.beta > ExtRat(1))) {
    nv.divergent = true;
    nv.value = nv.lower = nv.upper = kInf;
    nv.growth = 0.0;
    nv.note = "measure of the chain diverges (partial sums grow like J^{1-beta} or log J)";
    return nv;
  }
  // zeta(beta) bracketed by a partial sum and integral remainders
  constexpr int kTerms = 20000;
  double partial = 0.0;
  for (int j = 1; j <= kTerms; ++j) partial += std::pow(static_cast<double>(j), -beta);
  const double rem_lo = std::pow(kTerms + 1.0, 1.0 - beta) / (beta - 1.0);
  const double rem_hi = std::pow(static_cast<double>(kTerms), 1.0 - beta) / (beta - 1.0);
  const double vn = ball_volume(n);
  const double meas_hi = vn * (partial + rem_hi);
  const double meas_lo = vn * (partial - 1.0 + rem_lo);  // ball 1 may overlap ball 2
  const double c = std::isinf(rr) ? 1.0 : std::pow(qd / rr, 1.0 / rr);
  nv.lower = c * std::pow(meas_lo, 1.0 / qd);
  nv.upper = c * std::pow(meas_hi, 1.0 / qd);
  nv.value = c * std::pow(vn * (partial + 0.5 * (rem_lo + rem_hi)), 1.0 / qd);
  nv.note = "closed form (q/r)^{1/r} |E|^{1/q}";
  return nv;
}

NormValue weighted_lebesgue_norm(const RadialFunction& f, double s, const ExtRat& q, int n,
                                 const QuadratureSpec& quad) {
  const RadialFunction g = s == 0.0 ? f : RadialFunction(PowerWeightProduct{f, s});
  constexpr int kLowLog2 = -60;
  constexpr int kHighLog2 = 40;
  const double rlo = std::exp2(kLowLog2);
  const double rhi = std::exp2(kHighLog2);
  NormValue nv;
  nv.window_lo = kLowLog2;
  nv.window_hi = kHighLog2;
  nv.window_kind = "log2 radius";
  if (q.is_infinite()) {
    double best = 0.0;
    for (int i = kLowLog2 * 32; i <= kHighLog2 * 32; ++i) best = std::max(best, std::abs(value(g, std::exp2(i / 32.0))));
    for (double b : breakpoints(g, rlo, rhi)) {
      best = std::max(best, std::abs(value(g, b)));
      best = std::max(best, std::abs(value(g, std::nextafter(b, 0.0))));
    }
    const auto ob = origin_behavior(g, rlo);
    if (ob.known && !ob.vanishes && (ob.power < 0.0 || (ob.power == 0.0 && ob.log_power < 0.0))) {
      nv.divergent = true;
      nv.value = nv.lower = nv.upper = kInf;
      return nv;
    }
    nv.value = nv.lower = best;
    nv.upper = best * (1.0 + 1e-9);
    nv.note = "sampled supremum";
    return nv;
  }
  const double qd = q.to_double();
  const double omega = sphere_area(n);
  std::vector<double> pts;
  for (double u = std::log(rlo); u < std::log(rhi); u += 0.25) pts.push_back(u);
  pts.push_back(std::log(rhi));
  for (double b : breakpoints(g, rlo, rhi)) pts.push_back(std::log(b));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const GaussRule& rule = gauss_legendre(std::max(16, quad.radial_points_per_annulus));
  const double h = feature_scale(g);
  auto integrand = [&](double u) {
    const double v = value(g, std::exp(u));
    if (v == 0.0) return 0.0;
    return std::exp(qd * std::log(std::abs(v)) + n * u);
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k];
    const double b = pts[k + 1];
    int m = 1;
    if (std::isfinite(h)) m = std::clamp(static_cast<int>(std::ceil((std::exp(b) - std::exp(a)) / h)), 1, 256);
    for (int i = 0; i < m; ++i) total += gauss_panel(rule, a + (b - a) * i / m, a + (b - a) * (i + 1) / m, integrand);
  }
  total *= omega;
  double tail = 0.0;
  const auto ob = origin_behavior(g, rlo);
  if (!ob.known) {
    nv.heuristic = true;
    nv.note = "no model near the origin";
  } else if (!ob.vanishes) {
    const double k = ob.power * qd + n;
    const double beta_q = ob.log_power * qd;
    const double big_l = std::log(1.0 / rlo);
    if (std::abs(k) < 1e-12 && beta_q > 1.0) {
      tail = omega * std::pow(ob.hi, qd) * std::pow(big_l, 1.0 - beta_q) / (beta_q - 1.0);
    } else if (k > 0.0) {
      tail = omega * std::pow(ob.hi, qd) * std::pow(rlo, k) / k * std::pow(big_l, -std::min(0.0, -beta_q));
      if (beta_q > 0.0) tail *= std::pow(big_l, -beta_q);
    } else {
      nv.divergent = true;
      nv.value = nv.lower = nv.upper = kInf;
      nv.note = "not integrable at the origin";
      return nv;
    }
  }
  const auto ff = far_field(g);
  if (ff.kind == FarField::Kind::Compact && ff.support <= rhi) {
  } else if (ff.kind == FarField::Kind::Gaussian && (rhi / ff.width) * (rhi / ff.width) > 800.0) {
  } else {
    nv.heuristic = true;
    nv.note += nv.note.empty() ? "far field not bounded" : "; far field not bounded";
  }
  nv.value = std::pow(total + 0.5 * tail, 1.0 / qd);
  nv.lower = std::pow(total, 1.0 / qd) * (1.0 - 1e-12);
  nv.upper = std::pow(total + tail, 1.0 / qd) * (1.0 + 1e-12);
  return nv;
}

void InterpolationCouple::validate() const {
  if (s0 == s1) throw std::invalid_argument("interpolation couple: s0 must differ from s1");
  if (!(r0 > ExtRat(0)) || !(r1 > ExtRat(0))) throw std::invalid_argument("interpolation couple: r0, r1 must be > 0");
  if (!(q >= ExtRat(1))) throw std::invalid_argument("interpolation couple: q must be >= 1");
}

namespace {

struct Split {
  double a = 0.0;  // ||f0||_{X0}
  double b = 0.0;  // ||f1||_{X1}
  double c = 0.0;  // max constant part of the lower bound
  double d = 0.0;  // max slope part of the lower bound
};

Split greedy_split(const AnnularProfile& p, const InterpolationCouple& cp, double t) {
  std::vector<double> w0;
  std::vector<double> w1;
  Split out;
  for (int j = p.j_min; j <= p.j_max; ++j) {
    const double a = p.at(j).value;
    if (a == 0.0) continue;
    const double x0 = std::exp2(j * cp.s0) * a;
    const double x1 = std::exp2(j * cp.s1) * a;
    if (x0 <= t * x1) {
      w0.push_back(x0);
      out.c = std::max(out.c, x0);
    } else {
      w1.push_back(x1);
      out.d = std::max(out.d, x1);
    }
  }
  out.a = lr_norm(w0, cp.r0.to_double());
  out.b = lr_norm(w1, cp.r1.to_double());
  return out;
}

}  // namespace

NormValue k_functional(const AnnularProfile& profile, const InterpolationCouple& couple, double t) {
  couple.validate();
  if (!(t > 0.0)) throw std::invalid_argument("k_functional: t must be positive");
  if (profile.q != couple.q) throw std::invalid_argument("k_functional: profile q differs from the couple's q");
  const Split sp = greedy_split(profile, couple, t);
  NormValue nv;
  nv.value = nv.upper = sp.a + t * sp.b;
  nv.lower = 0.0;
  for (int j = profile.j_min; j <= profile.j_max; ++j) {
    const double a = profile.at(j).value;
    nv.lower = std::max(nv.lower, std::min(std::exp2(j * couple.s0), t * std::exp2(j * couple.s1)) * a);
  }
  nv.window_lo = profile.j_min;
  nv.window_hi = profile.j_max;
  nv.note = "greedy whole-annulus split";
  return nv;
}

NormValue interpolation_norm(const AnnularProfile& profile, const InterpolationCouple& couple, double theta,
                             const ExtRat& r) {
  couple.validate();
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("interpolation_norm: theta must be in (0, 1)");
  if (profile.q != couple.q) throw std::invalid_argument("interpolation_norm: profile q differs from the couple's q");
  const double rr = positive_r(r);
  const double ds = couple.s0 - couple.s1;
  std::vector<double> logt;  // ln of K's breakpoints
  for (int j = profile.j_min; j <= profile.j_max; ++j) {
    if (profile.at(j).value > 0.0) logt.push_back(j * ds * kLn2);
  }
  NormValue nv;
  nv.window_kind = "t";
  if (logt.empty()) {
    nv.note = "zero profile";
    return nv;
  }
  std::sort(logt.begin(), logt.end());
  logt.erase(std::unique(logt.begin(), logt.end()), logt.end());
  nv.window_lo = std::exp(logt.front());
  nv.window_hi = std::exp(logt.back());

  const GaussRule& rule = gauss_legendre(32);
  double up = 0.0;  // greedy K
  double lo = 0.0;  // lower K
  auto phi_up = [&](const Split& sp, double x) {
    const double t = std::exp(x);
    return std::exp(-theta * x) * (sp.a + t * sp.b);
  };
  auto phi_lo = [&](const Split& sp, double x) {
    const double t = std::exp(x);
    return std::exp(-theta * x) * std::max(sp.c, t * sp.d);
  };
  auto accumulate = [&](double& acc, double v) { acc = std::isinf(rr) ? std::max(acc, v) : acc + v; };

  for (std::size_t k = 0; k + 1 < logt.size(); ++k) {
    const double xa = logt[k];
    const double xb = logt[k + 1];
    const Split sp = greedy_split(profile, couple, std::exp(0.5 * (xa + xb)));
    std::vector<double> cuts{xa, xb};
    if (sp.c > 0.0 && sp.d > 0.0) {
      const double kink = std::log(sp.c / sp.d);
      if (kink > xa && kink < xb) cuts.push_back(kink);
    }
    std::sort(cuts.begin(), cuts.end());
    if (std::isinf(rr)) {
      for (double x : cuts) {
        accumulate(up, phi_up(sp, x));
        accumulate(lo, phi_lo(sp, x));
      }
      continue;
    }
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const int panels = std::max(1, static_cast<int>(std::ceil((cuts[c + 1] - cuts[c]) / 2.0)));
      const double w = (cuts[c + 1] - cuts[c]) / panels;
      for (int p = 0; p < panels; ++p) {
        const double a = cuts[c] + p * w;
        const double b = a + w;
        accumulate(up, gauss_panel(rule, a, b, [&](double x) { return std::pow(phi_up(sp, x), rr); }));
        accumulate(lo, gauss_panel(rule, a, b, [&](double x) { return std::pow(phi_lo(sp, x), rr); }));
      }
    }
  }
  // tails: below the first breakpoint every annulus sits in X1, above the last in X0
  const Split first = greedy_split(profile, couple, std::exp(logt.front()) * 0.5);
  const Split last = greedy_split(profile, couple, std::exp(logt.back()) * 2.0);
  const double t_min = std::exp(logt.front());
  const double t_max = std::exp(logt.back());
  if (std::isinf(rr)) {
    accumulate(up, phi_up(first, logt.front()));
    accumulate(up, phi_up(last, logt.back()));
    accumulate(lo, phi_lo(first, logt.front()));
    accumulate(lo, phi_lo(last, logt.back()));
  } else {
    accumulate(up, std::pow(first.b, rr) * std::pow(t_min, (1.0 - theta) * rr) / ((1.0 - theta) * rr));
    accumulate(up, std::pow(last.a, rr) * std::pow(t_max, -theta * rr) / (theta * rr));
    accumulate(lo, std::pow(first.d, rr) * std::pow(t_min, (1.0 - theta) * rr) / ((1.0 - theta) * rr));
    accumulate(lo, std::pow(last.c, rr) * std::pow(t_max, -theta * rr) / (theta * rr));
  }
  const double inv = std::isinf(rr) ? 1.0 : 1.0 / rr;
  nv.value = nv.upper = std::pow(up, inv);
  nv.lower = std::pow(lo, inv);
  nv.note = "exact between K breakpoints, closed-form tails";
  return nv;
}

}  // namespace herz
