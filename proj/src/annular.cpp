#include "herz/annular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace herz {

namespace {

constexpr double kLn2 = std::numbers::ln2;

/// Integrand |f(e^u)|^q e^{dim u}, evaluated in log form to survive extreme radii.
struct PowerIntegrand {
  const RadialFunction& f;
  double q;
  double dim;

  double operator()(double u) const {
    const double v = value(f, std::exp(u));
    if (v == 0.0) return 0.0;
    return std::exp(q * std::log(std::abs(v)) + dim * u);
  }
};

struct Adaptive {
  const GaussRule& rule;
  const PowerIntegrand& g;
  double tol;
  double ref;
  double err = 0.0;
  // Panel pairs left before refinement stops; a roundoff-level integrand
  // (cancelling differences) never meets a relative test.
  int budget = 256;

  double run(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss_panel(rule, a, m, g);
    const double right = gauss_panel(rule, m, b, g);
    const double refined = left + right;
    const double diff = std::abs(refined - whole);
    --budget;
    if (diff <= tol * std::max(std::abs(refined), ref) || depth >= 40 || budget <= 0 ||
        !(b - a > 1e-15 * std::abs(a) + 1e-300)) {
      err += diff;
      return refined;
    }
    return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
  }
};

/// Split points (in log radius) for the annulus [lo, hi).
std::vector<double> log_split_points(const RadialFunction& f, double lo, double hi) {
  std::vector<double> pts;
  pts.push_back(std::log(lo));
  for (double x : breakpoints(f, lo, hi)) pts.push_back(std::log(x));
  pts.push_back(std::log(hi));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

AnnularCoeff integrate_annulus(const RadialFunction& f, double q, double dim, double coef, double lo, double hi,
                               const QuadratureSpec& quad) {
  const GaussRule& rule = gauss_legendre(quad.radial_points_per_annulus);
  const PowerIntegrand g{f, q, dim};
  const auto pts = log_split_points(f, lo, hi);
  const double h = feature_scale(f);

  struct Panel {
    double a, b, est;
  };
  std::vector<Panel> panels;
  double ref = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double ua = pts[k];
    const double ub = pts[k + 1];
    int m = 1;
    if (std::isfinite(h)) {
      m = std::clamp(static_cast<int>(std::ceil((std::exp(ub) - std::exp(ua)) / (4.0 * h))), 1, 64);
    }
    for (int i = 0; i < m; ++i) {
      const double a = ua + (ub - ua) * i / m;
      const double b = i + 1 == m ? ub : ua + (ub - ua) * (i + 1) / m;
      const double est = gauss_panel(rule, a, b, g);
      panels.push_back({a, b, est});
      ref += std::abs(est);
    }
  }
  Adaptive ad{rule, g, quad.annulus_rel_tol, ref};
  double total = 0.0;
  for (const auto& p : panels) total += ad.run(p.a, p.b, p.est, 0);
  total *= coef;
  const double err = coef * ad.err + 4e-16 * std::abs(total);
  AnnularCoeff c;
  c.value = std::pow(std::max(total, 0.0), 1.0 / q);
  c.lower = std::pow(std::max(total - err, 0.0), 1.0 / q);
  c.upper = std::pow(total + err, 1.0 / q);
  return c;
}

AnnularCoeff sup_annulus(const RadialFunction& f, double lo, double hi, const QuadratureSpec& quad) {
  const GaussRule& rule = gauss_legendre(quad.radial_points_per_annulus);
  const auto pts = log_split_points(f, lo, hi);
  double best = 0.0;
  double best_u = std::log(lo);
  double best_span = 0.0;
  auto probe = [&](double u, double span) {
    const double v = std::abs(value(f, std::exp(u)));
    if (v > best) {
      best = v;
      best_u = u;
      best_span = span;
    }
  };
  probe(std::log(lo), 0.0);
  constexpr int kPanels = 16;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double ua = pts[k];
    const double ub = pts[k + 1];
    probe(ua, 0.0);
    probe(std::log(std::nextafter(std::exp(ub), 0.0)), 0.0);
    const double w = (ub - ua) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      const double a = ua + p * w;
      for (double x : rule.nodes) probe(a + 0.5 * w * (1.0 + x), w);
    }
  }
  if (best_span > 0.0) {
    // golden-section refinement around the best interior node
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::max(best_u - best_span, std::log(lo));
    double b = std::min(best_u + best_span, std::log(hi));
    auto fv = [&](double u) { return std::abs(value(f, std::exp(u))); };
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fv(c);
    double fd = fv(d);
    for (int it = 0; it < 60; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = fv(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = fv(d);
      }
    }
    best = std::max({best, fc, fd});
  }
  return {best, best, best * (1.0 + 1e-12)};
}

double log_shell_measure(int j, double dim, double coef) {
  // log of coef * int_{2^{j-1}}^{2^j} rho^{dim-1} d rho
  if (dim == 0.0) return std::log(coef * kLn2);
  return std::log(coef) + j * dim * kLn2 + std::log((1.0 - std::exp2(-dim)) / dim);
}

TailModel tail_below(const RadialFunction& f, double q, double dim, double coef, int j_min) {
  const int anchor = j_min - 1;
  const double radius = std::ldexp(1.0, anchor);
  const auto ob = origin_behavior(f, radius);
  if (!ob.known) return TailModel::unknown(anchor, "no model near the origin");
  if (ob.vanishes) return TailModel::zero(anchor, "vanishes near the origin");
  const double p = ob.power;
  const double beta = ob.log_power;
  if (beta != 0.0 && anchor >= 0) return TailModel::unknown(anchor, "logarithmic model needs radii below 1");
  double log_lo = std::log(ob.lo);
  double log_hi = std::log(ob.hi);
  double e = 0.0;
  if (std::isfinite(q)) {
    const double k = p * q + dim;
    const double g = k == 0.0 ? kLn2 : (1.0 - std::exp2(-k)) / k;
    const double base = std::log(coef * g) / q;
    log_lo += base;
    log_hi += base;
    e = p + dim / q;
  } else {
    log_lo += std::min(0.0, -p * kLn2);
    log_hi += std::max(0.0, -p * kLn2);
    e = p;
  }
  log_lo += anchor * e * kLn2;
  log_hi += anchor * e * kLn2;
  if (beta != 0.0) {
    const double a = std::abs(anchor);
    const double lf = -beta * std::log(a * kLn2);
    const double shift = -beta * std::log((a + 1.0) / a);
    log_lo += lf + std::min(0.0, shift);
    log_hi += lf + std::max(0.0, shift);
  }
  TailModel t;
  t.kind = TailModel::Kind::Power;
  t.anchor = anchor;
  t.lo = std::exp(log_lo);
  t.hi = std::exp(log_hi);
  t.rate = e;
  t.log_rate = beta;
  t.note = "power model at the origin";
  return t;
}

double log_gaussian_annulus_bound(const FarField& ff, int j, double q, double dim, double coef) {
  const double a = std::ldexp(1.0, j - 1);
  const double b = std::ldexp(1.0, j);
  auto phi = [&](double rho) { return ff.power * std::log(rho) - (rho / ff.width) * (rho / ff.width); };
  double m = std::max(phi(a), phi(b));
  if (ff.power > 0.0) {
    const double star = ff.width * std::sqrt(0.5 * ff.power);
    if (star > a && star < b) m = std::max(m, phi(star));
  }
  double lb = std::log(ff.coef) + m;
  if (std::isfinite(q)) lb += log_shell_measure(j, dim, coef) / q;
  return lb;
}

TailModel tail_above(const RadialFunction& f, double q, double dim, double coef, int j_max) {
  using K = FarField::Kind;
  const int anchor = j_max + 1;
  const double edge = std::ldexp(1.0, j_max);
  const auto ff = far_field(f);
  switch (ff.kind) {
    case K::Compact:
      if (ff.support <= edge * (1.0 + 1e-15)) return TailModel::zero(anchor, "compact support inside the window");
      return TailModel::unknown(anchor, "window does not reach the support");
    case K::Power: {
      if (ff.from > edge) return TailModel::unknown(anchor, "far-field model starts beyond the window");
      const double p = ff.power;
      double log_lo = std::log(ff.lo);
      double log_hi = std::log(ff.hi);
      double e = p;
      if (std::isfinite(q)) {
        const double k = p * q + dim;
        const double g = k == 0.0 ? kLn2 : (1.0 - std::exp2(-k)) / k;
        log_lo += std::log(coef * g) / q;
        log_hi += std::log(coef * g) / q;
        e = p + dim / q;
      } else {
        log_lo += std::min(0.0, -p * kLn2);
        log_hi += std::max(0.0, -p * kLn2);
      }
      TailModel t;
      t.kind = TailModel::Kind::Power;
      t.anchor = anchor;
      t.lo = ff.lo == 0.0 ? 0.0 : std::exp(log_lo + anchor * e * kLn2);
      t.hi = std::exp(log_hi + anchor * e * kLn2);
      t.rate = e;
      t.note = "power model at infinity";
      return t;
    }
    case K::Gaussian: {
      if (ff.from > edge) return TailModel::unknown(anchor, "far-field model starts beyond the window");
      const double l0 = log_gaussian_annulus_bound(ff, anchor, q, dim, coef);
      if (l0 < -745.0) return TailModel::zero(anchor, "Gaussian tail below 1e-300");
      const double l1 = log_gaussian_annulus_bound(ff, anchor + 1, q, dim, coef);
      const double l2 = log_gaussian_annulus_bound(ff, anchor + 2, q, dim, coef);
      const double d1 = l1 - l0;
      const double d2 = l2 - l1;
      if (!(d1 < 0.0 && d2 <= d1)) return TailModel::unknown(anchor, "Gaussian envelope not yet decreasing");
      TailModel t;
      t.kind = TailModel::Kind::Power;
      t.anchor = anchor;
      t.lo = 0.0;
      t.hi = std::exp(l0);
      t.rate = d1 / kLn2;
      t.note = "geometric majorant of a Gaussian envelope";
      return t;
    }
    case K::Unknown:
      break;
  }
  return TailModel::unknown(anchor, "no far-field model");
}

}  // namespace

TailModel TailModel::zero(int anchor, std::string note) {
  TailModel t;
  t.kind = Kind::Zero;
  t.anchor = anchor;
  t.note = std::move(note);
  return t;
}

TailModel TailModel::unknown(int anchor, std::string note) {
  TailModel t;
  t.kind = Kind::Unknown;
  t.anchor = anchor;
  t.note = std::move(note);
  return t;
}

AnnularCoeff AnnularProfile::at(int j) const {
  if (!in_window(j)) return {};
  return coeffs[static_cast<std::size_t>(j - j_min)];
}

double annulus_volume(int j, int n) { return ball_volume(n) * std::ldexp(1.0, j * n) * (1.0 - std::exp2(-n)); }

AnnularProfile annular_decompose_measure(const RadialFunction& f, const ExtRat& q, double dim, double measure_coef,
                                         Window window, const QuadratureSpec& quad) {
  if (window.j_min > window.j_max) throw std::invalid_argument("annular_decompose: empty window");
  quad.validate();
  if (q < ExtRat(1) && !q.is_infinite()) {
    if (!(q > ExtRat(0))) throw std::invalid_argument("annular_decompose: q must be positive");
  }
  AnnularProfile prof;
  prof.q = q;
  prof.j_min = window.j_min;
  prof.j_max = window.j_max;
  const int count = window.j_max - window.j_min + 1;
  prof.coeffs.resize(count);
  const double qd = q.to_double();
  const bool sup = q.is_infinite();
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    const int j = window.j_min + k;
    const double lo = std::ldexp(1.0, j - 1);
    const double hi = std::ldexp(1.0, j);
    prof.coeffs[k] = sup ? sup_annulus(f, lo, hi, quad) : integrate_annulus(f, qd, dim, measure_coef, lo, hi, quad);
  }
  if (const auto* s = std::get_if<Sampled>(&f.node()); s && !s->data->errors.empty()) {
    // widen by the profile of the per-node error envelope (Minkowski)
    const Sampled env = Sampled::make(s->data->radii, s->data->errors);
    for (int k = 0; k < count; ++k) {
      const int j = window.j_min + k;
      const double lo = std::ldexp(1.0, j - 1);
      const double hi = std::ldexp(1.0, j);
      const AnnularCoeff e =
          sup ? sup_annulus(env, lo, hi, quad) : integrate_annulus(env, qd, dim, measure_coef, lo, hi, quad);
      prof.coeffs[k].lower = std::max(0.0, prof.coeffs[k].lower - e.upper);
      prof.coeffs[k].upper += e.upper;
    }
  }
  prof.below = tail_below(f, qd, dim, measure_coef, window.j_min);
  prof.above = tail_above(f, qd, dim, measure_coef, window.j_max);
  return prof;
}

AnnularProfile annular_decompose(const RadialFunction& f, const ExtRat& q, int n, Window window,
                                 const QuadratureSpec& quad) {
  if (n < 1) throw std::invalid_argument("annular_decompose: n must be >= 1");
  auto prof = annular_decompose_measure(f, q, n, sphere_area(n), window, quad);
  prof.n = n;
  return prof;
}

AnnularProfile profile_from_coefficients(const ExtRat& q, int n, int j_min, const std::vector<double>& coeffs) {
  AnnularProfile prof;
  prof.q = q;
  prof.n = n;
  prof.j_min = j_min;
  prof.j_max = j_min + static_cast<int>(coeffs.size()) - 1;
  for (double c : coeffs) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("profile coefficients must be finite and >= 0");
    prof.coeffs.push_back({c, c, c});
  }
  prof.below = TailModel::zero(j_min - 1, "explicit profile");
  prof.above = TailModel::zero(prof.j_max + 1, "explicit profile");
  return prof;
}

RadialFunction reconstruct(const std::map<int, RadialFunction>& pieces) {
  RadialFunction out;
  for (const auto& [j, fj] : pieces) {
    if (fj.is_zero()) continue;
    const double lo = std::ldexp(1.0, j - 1);
    const double hi = std::ldexp(1.0, j);
    RadialFunction term;
    if (const auto* c = std::get_if<Constant>(&fj.node()); c && c->value == 1.0) {
      term = AnnulusIndicator{j};
    } else {
      term = Restricted{fj, lo, hi};
    }
    out = out + term;
  }
  return out;
}

std::map<int, RadialFunction> restrict_to_annuli(const RadialFunction& f, Window window) {
  std::map<int, RadialFunction> out;
  for (int j = window.j_min; j <= window.j_max; ++j) {
    out.emplace(j, Restricted{f, std::ldexp(1.0, j - 1), std::ldexp(1.0, j)});
  }
  return out;
}

AnnularProfile bump_chain_profile(const BumpChain& chain, const ExtRat& s, const ExtRat& q, int n, int j_max) {
  if (chain.beta < ExtRat(0)) throw std::invalid_argument("bump chain: beta must be >= 0");
  if (j_max < 3) throw std::invalid_argument("bump chain: j_max must be >= 3");
  if (n < 1) throw std::invalid_argument("bump chain: n must be >= 1");
  const double beta = chain.beta.to_double();
  const double sd = s.to_double();
  const bool sup = q.is_infinite();
  const double qd = q.to_double();
  const double vn = ball_volume(n);

  auto radius = [&](int j) { return std::pow(static_cast<double>(j), -beta / n); };
  auto center = [&](int j) { return std::ldexp(1.0, j - 1) + 1.0; };
  // |x|^{-s} over |x| in [a, b]
  auto wmin = [&](double a, double b) { return sd >= 0.0 ? std::pow(b, -sd) : std::pow(a, -sd); };
  auto wmax = [&](double a, double b) { return sd >= 0.0 ? std::pow(a, -sd) : std::pow(b, -sd); };

  AnnularProfile prof;
  prof.q = q;
  prof.n = n;
  prof.j_min = 0;
  prof.j_max = j_max;
  prof.coeffs.resize(j_max + 1);
  for (int j = 3; j <= j_max; ++j) {
    const double rho = radius(j);
    const double a = center(j) - rho;
    const double b = center(j) + rho;
    AnnularCoeff c;
    if (sup) {
      c.value = c.lower = c.upper = wmax(a, b);
    } else {
      const double mass = std::pow(vn * std::pow(rho, n), 1.0 / qd);
      c.lower = mass * wmin(a, b);
      c.upper = mass * wmax(a, b);
      c.value = std::sqrt(c.lower * c.upper);
    }
    prof.coeffs[j] = c;
  }
  // balls 1 and 2 straddle annulus boundaries: bracket by whole-ball masses
  auto ball_part = [&](int i) {
    const double rho = radius(i);
    const double a = center(i) - rho;
    const double b = center(i) + rho;
    return sup ? wmax(a, b) : vn * std::pow(rho, n) * std::pow(wmax(a, b), qd);
  };
  for (int j : {1, 2}) {
    double acc = 0.0;
    for (int i : {1, 2}) {
      const double rho = radius(i);
      const double a = center(i) - rho;
      const double b = center(i) + rho;
      const bool touches = a < std::ldexp(1.0, j) && b > std::ldexp(1.0, j - 1);
      if (!touches) continue;
      acc = sup ? std::max(acc, ball_part(i)) : acc + ball_part(i);
    }
    AnnularCoeff c;
    c.upper = sup ? acc : std::pow(acc, 1.0 / qd);
    c.lower = 0.0;
    c.value = 0.5 * c.upper;
    prof.coeffs[j] = c;
  }
  prof.below = TailModel::zero(-1, "bump chain lies outside the unit ball");

  const int anchor = j_max + 1;
  const double slack = std::pow(1.0 + std::ldexp(1.0, 2 - anchor), -sd);
  const double wl = std::min(1.0, slack);
  const double wh = std::max(1.0, slack);
  const double weight = std::pow(2.0, -(anchor - 1) * sd);
  TailModel t;
  t.kind = TailModel::Kind::Power;
  t.anchor = anchor;
  t.rate = -sd;
  if (sup) {
    t.lo = weight * wl;
    t.hi = weight * wh;
    t.log_rate = 0.0;
  } else {
    const double mass = std::pow(vn, 1.0 / qd) * std::pow(static_cast<double>(anchor), -beta / qd);
    t.lo = mass * weight * wl;
    t.hi = mass * weight * wh;
    t.log_rate = beta / qd;
  }
  t.note = "analytic bump-chain brackets";
  prof.above = t;
  return prof;
}

}  // namespace herz
