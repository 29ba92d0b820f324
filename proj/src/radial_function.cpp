#include "herz/radial_function.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "herz/heat.hpp"

namespace herz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double bump_value(const SmoothBump& b, double r) {
  if (r >= b.outer) return 0.0;
  if (b.inner > 0.0 && r <= b.inner) return 0.0;
  double v = b.amplitude;
  if (b.inner > 0.0) v *= smooth_step((r - b.inner) / b.ramp);
  v *= smooth_step((b.outer - r) / b.ramp);
  return v;
}

double sampled_value(const SampledData& d, double r) {
  const auto& x = d.radii;
  const std::size_t n = x.size();
  if (r <= x.front()) return d.values.front();
  if (r > x.back()) return 0.0;
  if (n == 1) return d.values.front();
  std::size_t i = 0;
  if (d.log_uniform) {
    const double pos = (std::log(r) - d.log_r0) * d.inv_log_step;
    i = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), n - 2);
    while (i + 1 < n - 1 && x[i + 1] < r) ++i;
    while (i > 0 && x[i] > r) --i;
  } else {
    i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin());
    i = std::min(i == 0 ? 0 : i - 1, n - 2);
  }
  const double slope = d.slopes[i];
  if (std::isfinite(slope)) return d.values[i] * std::exp(slope * std::log(r / x[i]));
  const double w = (r - x[i]) / (x[i + 1] - x[i]);
  return d.values[i] + w * (d.values[i + 1] - d.values[i]);
}

double signed_power(double u, double alpha) {
  if (u == 0.0) return 0.0;
  const double m = std::pow(std::abs(u), alpha);
  return u < 0.0 ? -m : m;
}

}  // namespace

RadialFunction::RadialFunction() : node_(std::make_shared<const RadialNode>(Zero{})) {}

bool RadialFunction::is_zero() const { return std::holds_alternative<Zero>(*node_); }

Sampled Sampled::make(std::vector<double> radii, std::vector<double> values, std::vector<double> errors) {
  if (radii.empty() || radii.size() != values.size()) {
    throw std::invalid_argument("Sampled: radii and values must be nonempty and of equal length");
  }
  if (!errors.empty() && errors.size() != radii.size()) {
    throw std::invalid_argument("Sampled: errors must match radii in length");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw std::invalid_argument("Sampled: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("Sampled: radii must be strictly increasing");
    if (!std::isfinite(values[i])) throw std::invalid_argument("Sampled: values must be finite");
  }
  auto d = std::make_shared<SampledData>();
  d->radii = std::move(radii);
  d->values = std::move(values);
  d->errors = std::move(errors);
  const std::size_t n = d->radii.size();
  d->slopes.assign(n > 1 ? n - 1 : 0, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = d->values[i];
    const double b = d->values[i + 1];
    if (a != 0.0 && b != 0.0 && (a > 0.0) == (b > 0.0)) {
      d->slopes[i] = std::log(b / a) / std::log(d->radii[i + 1] / d->radii[i]);
    }
  }
  if (n > 2) {
    const double step = std::log(d->radii[1] / d->radii[0]);
    bool uniform = true;
    for (std::size_t i = 1; i + 1 < n && uniform; ++i) {
      uniform = std::abs(std::log(d->radii[i + 1] / d->radii[i]) - step) <= 1e-9 * step;
    }
    if (uniform) {
      d->log_uniform = true;
      d->log_r0 = std::log(d->radii[0]);
      d->inv_log_step = 1.0 / step;
    }
  }
  Sampled s;
  s.data = std::move(d);
  return s;
}

Sampled Sampled::on_grid(const RadialGrid& grid, std::vector<double> values, std::vector<double> errors) {
  return make(grid.radii, std::move(values), std::move(errors));
}

double value(const RadialFunction& f, double r) {
  return std::visit(
      overloaded{
          [](const Zero&) { return 0.0; },
          [](const Constant& c) { return c.value; },
          [r](const Gaussian& g) { return g.amplitude * std::exp(-(r / g.width) * (r / g.width)); },
          [r](const PowerLogCutoff& p) {
            if (r >= p.cutoff) return 0.0;
            double v = p.decay == 0.0 ? 1.0 : std::pow(r, -p.decay);
            if (p.log_exp != 0.0) v *= std::pow(std::log(1.0 / r), -p.log_exp);
            return v;
          },
          [r](const AnnulusIndicator& a) {
            return (r >= std::ldexp(1.0, a.j - 1) && r < std::ldexp(1.0, a.j)) ? 1.0 : 0.0;
          },
          [r](const BallIndicator& b) { return r < b.radius ? 1.0 : 0.0; },
          [r](const SmoothBump& b) { return bump_value(b, r); },
          [r](const Sampled& s) { return sampled_value(*s.data, r); },
          [r](const PowerWeightProduct& p) {
            const double b = value(p.base, r);
            return b == 0.0 ? 0.0 : std::pow(r, p.exponent) * b;
          },
          [r](const SignedPower& p) { return signed_power(value(p.base, r), p.exponent); },
          [r](const Product& p) {
            const double a = value(p.left, r);
            return a == 0.0 ? 0.0 : a * value(p.right, r);
          },
          [r](const Sum& s) {
            double acc = 0.0;
            for (const auto& t : s.terms) acc += value(t, r);
            return acc;
          },
          [r](const Scaled& s) { return s.amplitude * value(s.base, s.dilation * r); },
          [r](const Restricted& s) { return (r >= s.lo && r < s.hi) ? value(s.base, r) : 0.0; },
          [r](const HeatEvolved& h) { return heat_value(h.base, h.t, r, h.n, h.quad); },
      },
      static_cast<const RadialNode::variant&>(f.node()));
}

std::optional<double> evaluate(const RadialFunction& f, double r) {
  if (r < 0.0 || std::isnan(r)) throw std::invalid_argument("evaluate: radius must be >= 0");
  if (r > 0.0) return value(f, r);
  using Opt = std::optional<double>;
  return std::visit(
      overloaded{
          [](const Zero&) -> Opt { return 0.0; },
          [](const Constant& c) -> Opt { return c.value; },
          [](const Gaussian& g) -> Opt { return g.amplitude; },
          [](const PowerLogCutoff& p) -> Opt {
            if (p.decay > 0.0 || p.log_exp < 0.0) return std::nullopt;
            return p.log_exp > 0.0 ? 0.0 : 1.0;
          },
          [](const AnnulusIndicator&) -> Opt { return 0.0; },
          [](const BallIndicator&) -> Opt { return 1.0; },
          [](const SmoothBump& b) -> Opt { return b.inner > 0.0 ? 0.0 : b.amplitude; },
          [](const Sampled& s) -> Opt { return s.data->values.front(); },
          [&f](const PowerWeightProduct& p) -> Opt {
            const auto b = evaluate(p.base, 0.0);
            if (p.exponent == 0.0) return b;
            const auto ob = origin_behavior(f, 1e-300);
            if (ob.known && ob.vanishes) return 0.0;
            if (ob.known && (ob.power > 0.0 || (ob.power == 0.0 && ob.log_power > 0.0))) return 0.0;
            if (ob.known && ob.power == 0.0 && ob.log_power == 0.0 && b) return b;
            return std::nullopt;
          },
          [](const SignedPower& p) -> Opt {
            const auto b = evaluate(p.base, 0.0);
            if (!b) return std::nullopt;
            return signed_power(*b, p.exponent);
          },
          [](const Product& p) -> Opt {
            const auto a = evaluate(p.left, 0.0);
            const auto b = evaluate(p.right, 0.0);
            if (!a || !b) return std::nullopt;
            return *a * *b;
          },
          [](const Sum& s) -> Opt {
            double acc = 0.0;
            for (const auto& t : s.terms) {
              const auto v = evaluate(t, 0.0);
              if (!v) return std::nullopt;
              acc += *v;
            }
            return acc;
          },
          [](const Scaled& s) -> Opt {
            const auto b = evaluate(s.base, 0.0);
            if (!b) return std::nullopt;
            return s.amplitude * *b;
          },
          [](const Restricted& s) -> Opt {
            if (s.lo > 0.0) return 0.0;
            return evaluate(s.base, 0.0);
          },
          [](const HeatEvolved& h) -> Opt { return heat_value(h.base, h.t, 0.0, h.n, h.quad); },
      },
      static_cast<const RadialNode::variant&>(f.node()));
}

namespace {

void collect_breakpoints(const RadialFunction& f, double lo, double hi, std::vector<double>& out, bool jumps_only) {
  auto push = [&](double x) {
    if (x > lo && x < hi) out.push_back(x);
  };
  std::visit(overloaded{
                 [](const Zero&) {},
                 [](const Constant&) {},
                 [](const Gaussian&) {},
                 [&](const PowerLogCutoff& p) { push(p.cutoff); },
                 [&](const AnnulusIndicator& a) {
                   push(std::ldexp(1.0, a.j - 1));
                   push(std::ldexp(1.0, a.j));
                 },
                 [&](const BallIndicator& b) { push(b.radius); },
                 [&](const SmoothBump& b) {
                   if (b.inner > 0.0) {
                     push(b.inner);
                     push(b.inner + b.ramp);
                   }
                   push(b.outer - b.ramp);
                   push(b.outer);
                 },
                 [&](const Sampled& s) {
                   const auto& x = s.data->radii;
                   if (jumps_only) {
                     push(x.back());
                     return;
                   }
                   auto first = std::upper_bound(x.begin(), x.end(), lo);
                   auto last = std::lower_bound(x.begin(), x.end(), hi);
                   out.insert(out.end(), first, last);
                 },
                 [&](const PowerWeightProduct& p) { collect_breakpoints(p.base, lo, hi, out, jumps_only); },
                 [&](const SignedPower& p) { collect_breakpoints(p.base, lo, hi, out, jumps_only); },
                 [&](const Product& p) {
                   collect_breakpoints(p.left, lo, hi, out, jumps_only);
                   collect_breakpoints(p.right, lo, hi, out, jumps_only);
                 },
                 [&](const Sum& s) {
                   for (const auto& t : s.terms) collect_breakpoints(t, lo, hi, out, jumps_only);
                 },
                 [&](const Scaled& s) {
                   std::vector<double> inner;
                   collect_breakpoints(s.base, lo * s.dilation, hi * s.dilation, inner, jumps_only);
                   for (double x : inner) push(x / s.dilation);
                 },
                 [&](const Restricted& s) {
                   push(s.lo);
                   push(s.hi);
                   collect_breakpoints(s.base, std::max(lo, s.lo), std::min(hi, s.hi), out, jumps_only);
                 },
                 [](const HeatEvolved&) {},
             },
             static_cast<const RadialNode::variant&>(f.node()));
}

}  // namespace

std::vector<double> breakpoints(const RadialFunction& f, double lo, double hi, bool jumps_only) {
  std::vector<double> out;
  collect_breakpoints(f, lo, hi, out, jumps_only);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double feature_scale(const RadialFunction& f) {
  return std::visit(overloaded{
                        [](const Gaussian& g) { return g.width / 4.0; },
                        [](const SmoothBump& b) { return b.ramp / 4.0; },
                        [](const PowerWeightProduct& p) { return feature_scale(p.base); },
                        [](const SignedPower& p) { return feature_scale(p.base); },
                        [](const Product& p) { return std::min(feature_scale(p.left), feature_scale(p.right)); },
                        [](const Sum& s) {
                          double h = kInf;
                          for (const auto& t : s.terms) h = std::min(h, feature_scale(t));
                          return h;
                        },
                        [](const Scaled& s) { return feature_scale(s.base) / s.dilation; },
                        [](const Restricted& s) { return feature_scale(s.base); },
                        [](const HeatEvolved& h) { return std::sqrt(4.0 * h.t) / 4.0; },
                        [](const auto&) { return kInf; },
                    },
                    static_cast<const RadialNode::variant&>(f.node()));
}

double sup_bound(const RadialFunction& f) {
  return std::visit(
      overloaded{
          [](const Zero&) { return 0.0; },
          [](const Constant& c) { return std::abs(c.value); },
          [](const Gaussian& g) { return std::abs(g.amplitude); },
          [](const PowerLogCutoff& p) {
            if (p.decay > 0.0) return kInf;
            if (p.log_exp >= 0.0) return std::pow(std::log(1.0 / p.cutoff), -p.log_exp);
            return kInf;
          },
          [](const AnnulusIndicator&) { return 1.0; },
          [](const BallIndicator&) { return 1.0; },
          [](const SmoothBump& b) { return std::abs(b.amplitude); },
          [](const Sampled& s) {
            double m = 0.0;
            for (double v : s.data->values) m = std::max(m, std::abs(v));
            return m;
          },
          [](const PowerWeightProduct& p) {
            const double b = sup_bound(p.base);
            if (p.exponent == 0.0 || b == 0.0) return b;
            if (p.exponent > 0.0) {
              const auto ff = far_field(p.base);
              if (ff.kind == FarField::Kind::Compact) return b * std::pow(ff.support, p.exponent);
            }
            return kInf;
          },
          [](const SignedPower& p) { return std::pow(sup_bound(p.base), p.exponent); },
          [](const Product& p) {
            const double a = sup_bound(p.left);
            const double b = sup_bound(p.right);
            return (a == 0.0 || b == 0.0) ? 0.0 : a * b;
          },
          [](const Sum& s) {
            double m = 0.0;
            for (const auto& t : s.terms) m += sup_bound(t);
            return m;
          },
          [](const Scaled& s) { return std::abs(s.amplitude) * sup_bound(s.base); },
          [](const Restricted& s) { return sup_bound(s.base); },
          [](const HeatEvolved& h) { return sup_bound(h.base); },
      },
      static_cast<const RadialNode::variant&>(f.node()));
}

OriginBehavior origin_behavior(const RadialFunction& f, double radius) {
  OriginBehavior ob;
  ob.radius = radius;
  auto constant = [&](double c) {
    ob.known = true;
    if (c == 0.0) {
      ob.vanishes = true;
      return ob;
    }
    ob.lo = ob.hi = std::abs(c);
    return ob;
  };
  auto vanish = [&] {
    ob.known = true;
    ob.vanishes = true;
    return ob;
  };
  return std::visit(
      overloaded{
          [&](const Zero&) { return vanish(); },
          [&](const Constant& c) { return constant(c.value); },
          [&](const Gaussian& g) {
            ob.known = true;
            ob.hi = std::abs(g.amplitude);
            ob.lo = ob.hi * std::exp(-(radius / g.width) * (radius / g.width));
            if (ob.hi == 0.0) ob.vanishes = true;
            return ob;
          },
          [&](const PowerLogCutoff& p) {
            if (radius >= p.cutoff) return ob;
            ob.known = true;
            ob.power = -p.decay;
            ob.log_power = p.log_exp;
            ob.lo = ob.hi = 1.0;
            return ob;
          },
          [&](const AnnulusIndicator& a) {
            if (radius < std::ldexp(1.0, a.j - 1)) return vanish();
            return ob;
          },
          [&](const BallIndicator& b) {
            if (radius < b.radius) return constant(1.0);
            return ob;
          },
          [&](const SmoothBump& b) {
            if (b.inner > 0.0) {
              if (radius <= b.inner) return vanish();
              return ob;
            }
            if (radius <= b.outer - b.ramp) return constant(b.amplitude);
            return ob;
          },
          [&](const Sampled& s) {
            if (radius <= s.data->radii.front()) return constant(s.data->values.front());
            return ob;
          },
          [&](const PowerWeightProduct& p) {
            auto b = origin_behavior(p.base, radius);
            if (b.known && !b.vanishes) b.power += p.exponent;
            return b;
          },
          [&](const SignedPower& p) {
            auto b = origin_behavior(p.base, radius);
            if (b.known && !b.vanishes) {
              b.power *= p.exponent;
              b.log_power *= p.exponent;
              b.lo = std::pow(b.lo, p.exponent);
              b.hi = std::pow(b.hi, p.exponent);
            }
            return b;
          },
          [&](const Product& p) {
            const auto a = origin_behavior(p.left, radius);
            const auto b = origin_behavior(p.right, radius);
            if ((a.known && a.vanishes) || (b.known && b.vanishes)) return vanish();
            if (!a.known || !b.known) return ob;
            ob.known = true;
            ob.power = a.power + b.power;
            ob.log_power = a.log_power + b.log_power;
            ob.lo = a.lo * b.lo;
            ob.hi = a.hi * b.hi;
            return ob;
          },
          [&](const Sum& s) {
            std::vector<OriginBehavior> parts;
            for (const auto& t : s.terms) {
              auto b = origin_behavior(t, radius);
              if (!b.known) return ob;
              if (!b.vanishes) parts.push_back(b);
            }
            if (parts.empty()) return vanish();
            if (parts.size() == 1) return parts.front();
            const double beta = parts.front().log_power;
            double pmin = kInf;
            for (const auto& b : parts) {
              if (b.log_power != beta) return ob;
              pmin = std::min(pmin, b.power);
            }
            ob.known = true;
            ob.power = pmin;
            ob.log_power = beta;
            int dominant = 0;
            double dom_lo = 0.0;
            double rest = 0.0;
            for (const auto& b : parts) {
              const double shift = b.power == pmin ? 1.0 : std::pow(radius, b.power - pmin);
              ob.hi += b.hi * shift;
              if (b.power == pmin) {
                ++dominant;
                dom_lo = b.lo;
              } else {
                rest += b.hi * shift;
              }
            }
            ob.lo = dominant == 1 ? std::max(0.0, dom_lo - rest) : 0.0;
            return ob;
          },
          [&](const Scaled& s) {
            auto b = origin_behavior(s.base, radius * s.dilation);
            if (!b.known || b.vanishes) {
              b.radius = radius;
              return b;
            }
            const double amp = std::abs(s.amplitude) * std::pow(s.dilation, b.power);
            double lo_f = 1.0;
            double hi_f = 1.0;
            if (b.log_power != 0.0 && s.dilation != 1.0) {
              if (!(radius * s.dilation < 1.0 && radius < 1.0)) return ob;
              const double e = std::pow(1.0 - std::log(s.dilation) / std::log(1.0 / radius), -b.log_power);
              lo_f = std::min(1.0, e);
              hi_f = std::max(1.0, e);
            }
            b.lo *= amp * lo_f;
            b.hi *= amp * hi_f;
            b.radius = radius;
            return b;
          },
          [&](const Restricted& s) {
            if (radius < s.lo) return vanish();
            if (s.lo == 0.0 && radius < s.hi) return origin_behavior(s.base, radius);
            return ob;
          },
          [&](const HeatEvolved& h) {
            if (radius > 0.1 * std::sqrt(h.t)) return ob;
            const double v0 = std::abs(heat_value(h.base, h.t, 0.0, h.n, h.quad));
            const double vr = std::abs(heat_value(h.base, h.t, radius, h.n, h.quad));
            ob.known = true;
            ob.lo = 0.0;
            ob.hi = 2.0 * std::max(v0, vr) + 1e-300;
            return ob;
          },
      },
      static_cast<const RadialNode::variant&>(f.node()));
}

FarField far_field(const RadialFunction& f) {
  using K = FarField::Kind;
  auto compact = [](double support) {
    FarField ff;
    ff.kind = K::Compact;
    ff.support = support;
    return ff;
  };
  return std::visit(
      overloaded{
          [&](const Zero&) { return compact(0.0); },
          [](const Constant& c) {
            FarField ff;
            ff.kind = K::Power;
            ff.lo = ff.hi = std::abs(c.value);
            return ff;
          },
          [](const Gaussian& g) {
            FarField ff;
            ff.kind = K::Gaussian;
            ff.coef = std::abs(g.amplitude);
            ff.width = g.width;
            return ff;
          },
          [&](const PowerLogCutoff& p) { return compact(p.cutoff); },
          [&](const AnnulusIndicator& a) { return compact(std::ldexp(1.0, a.j)); },
          [&](const BallIndicator& b) { return compact(b.radius); },
          [&](const SmoothBump& b) { return compact(b.outer); },
          [&](const Sampled& s) { return compact(std::nextafter(s.data->radii.back(), kInf)); },
          [](const PowerWeightProduct& p) {
            auto ff = far_field(p.base);
            if (ff.kind == K::Gaussian || ff.kind == K::Power) ff.power += p.exponent;
            return ff;
          },
          [](const SignedPower& p) {
            auto ff = far_field(p.base);
            const double a = p.exponent;
            if (ff.kind == K::Gaussian) {
              ff.coef = std::pow(ff.coef, a);
              ff.power *= a;
              ff.width /= std::sqrt(a);
            } else if (ff.kind == K::Power) {
              ff.lo = std::pow(ff.lo, a);
              ff.hi = std::pow(ff.hi, a);
              ff.power *= a;
            }
            return ff;
          },
          [&](const Product& p) {
            const auto a = far_field(p.left);
            const auto b = far_field(p.right);
            if (a.kind == K::Compact || b.kind == K::Compact) {
              const double sa = a.kind == K::Compact ? a.support : kInf;
              const double sb = b.kind == K::Compact ? b.support : kInf;
              return compact(std::min(sa, sb));
            }
            FarField ff;
            ff.from = std::max(a.from, b.from);
            if (a.kind == K::Gaussian && b.kind == K::Gaussian) {
              ff.kind = K::Gaussian;
              ff.coef = a.coef * b.coef;
              ff.power = a.power + b.power;
              ff.width = 1.0 / std::sqrt(1.0 / (a.width * a.width) + 1.0 / (b.width * b.width));
            } else if (a.kind == K::Gaussian || b.kind == K::Gaussian) {
              const auto& g = a.kind == K::Gaussian ? a : b;
              const auto& q = a.kind == K::Gaussian ? b : a;
              if (q.kind != K::Power) return FarField{};
              ff.kind = K::Gaussian;
              ff.coef = g.coef * q.hi;
              ff.power = g.power + q.power;
              ff.width = g.width;
            } else if (a.kind == K::Power && b.kind == K::Power) {
              ff.kind = K::Power;
              ff.lo = a.lo * b.lo;
              ff.hi = a.hi * b.hi;
              ff.power = a.power + b.power;
            }
            return ff;
          },
          [&](const Sum& s) {
            double support = 0.0;
            bool all_compact = true;
            bool any_power = false;
            FarField g;
            g.kind = K::Gaussian;
            g.power = -kInf;
            for (const auto& t : s.terms) {
              const auto ff = far_field(t);
              switch (ff.kind) {
                case K::Compact:
                  support = std::max(support, ff.support);
                  break;
                case K::Gaussian:
                  all_compact = false;
                  g.coef += ff.coef;
                  g.power = std::max(g.power, ff.power);
                  g.width = std::max(g.width, ff.width);
                  g.from = std::max(g.from, ff.from);
                  break;
                case K::Power:
                  all_compact = false;
                  any_power = true;
                  break;
                case K::Unknown:
                  return FarField{};
              }
            }
            if (all_compact) return compact(support);
            if (any_power) return FarField{};
            g.from = std::max({g.from, support, 1.0});
            return g;
          },
          [&](const Scaled& s) {
            auto ff = far_field(s.base);
            const double l = s.dilation;
            switch (ff.kind) {
              case K::Compact:
                ff.support /= l;
                break;
              case K::Gaussian:
                ff.coef *= std::abs(s.amplitude) * std::pow(l, ff.power);
                ff.width /= l;
                ff.from /= l;
                break;
              case K::Power:
                ff.lo *= std::abs(s.amplitude) * std::pow(l, ff.power);
                ff.hi *= std::abs(s.amplitude) * std::pow(l, ff.power);
                ff.from /= l;
                break;
              case K::Unknown:
                break;
            }
            if (s.amplitude == 0.0) return compact(0.0);
            return ff;
          },
          [&](const Restricted& s) {
            auto ff = far_field(s.base);
            if (std::isfinite(s.hi)) {
              const double sup = ff.kind == K::Compact ? std::min(ff.support, s.hi) : s.hi;
              return compact(sup);
            }
            return ff;
          },
          [&](const HeatEvolved& h) {
            const auto ff = far_field(h.base);
            FarField out;
            if (ff.kind == K::Compact) {
              if (ff.support == 0.0) return compact(0.0);
              const double m = sup_bound(h.base);
              if (!std::isfinite(m)) return out;
              out.kind = K::Gaussian;
              out.coef = std::pow(4.0 * std::numbers::pi * h.t, -0.5 * h.n) * m * ball_volume(h.n) *
                         std::pow(ff.support, h.n);
              out.width = 4.0 * std::sqrt(h.t);
              out.from = 2.0 * ff.support;
            } else if (ff.kind == K::Gaussian && ff.power == 0.0 && ff.from == 0.0) {
              const double w2 = ff.width * ff.width;
              out.kind = K::Gaussian;
              out.coef = ff.coef * std::pow(w2 / (w2 + 4.0 * h.t), 0.5 * h.n);
              out.width = std::sqrt(w2 + 4.0 * h.t);
            }
            return out;
          },
      },
      static_cast<const RadialNode::variant&>(f.node()));
}

namespace {

std::optional<const Sampled*> as_sampled(const RadialFunction& f) {
  if (const auto* s = std::get_if<Sampled>(&f.node())) return s;
  return std::nullopt;
}

void append_terms(const RadialFunction& f, std::vector<RadialFunction>& out) {
  if (f.is_zero()) return;
  if (const auto* s = std::get_if<Sum>(&f.node())) {
    for (const auto& t : s->terms) append_terms(t, out);
    return;
  }
  out.push_back(f);
}

}  // namespace

std::optional<Sampled> combine_sampled(const RadialFunction& a, double ca, const RadialFunction& b, double cb) {
  const auto sa = as_sampled(a);
  const auto sb = as_sampled(b);
  if (!sa || !sb) return std::nullopt;
  const auto& da = *(*sa)->data;
  const auto& db = *(*sb)->data;
  if (da.radii != db.radii) return std::nullopt;
  std::vector<double> v(da.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = ca * da.values[i] + cb * db.values[i];
  std::vector<double> e;
  if (!da.errors.empty() && !db.errors.empty()) {
    e.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::abs(ca) * da.errors[i] + std::abs(cb) * db.errors[i];
  }
  return Sampled::make(da.radii, std::move(v), std::move(e));
}

RadialFunction operator+(const RadialFunction& a, const RadialFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (auto c = combine_sampled(a, 1.0, b, 1.0)) return *c;
  Sum s;
  append_terms(a, s.terms);
  append_terms(b, s.terms);
  return s;
}

RadialFunction operator-(const RadialFunction& a, const RadialFunction& b) {
  if (auto c = combine_sampled(a, 1.0, b, -1.0)) return *c;
  return a + (-1.0) * b;
}

RadialFunction operator*(double c, const RadialFunction& f) {
  if (c == 0.0 || f.is_zero()) return RadialFunction{};
  if (c == 1.0) return f;
  if (const auto* s = std::get_if<Sampled>(&f.node())) {
    std::vector<double> v = s->data->values;
    for (double& x : v) x *= c;
    std::vector<double> e = s->data->errors;
    for (double& x : e) x *= std::abs(c);
    return Sampled::make(s->data->radii, std::move(v), std::move(e));
  }
  if (const auto* s = std::get_if<Scaled>(&f.node())) return Scaled{s->base, c * s->amplitude, s->dilation};
  return Scaled{f, c, 1.0};
}

RadialFunction dilate(const RadialFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
  if (lambda == 1.0 || f.is_zero()) return f;
  if (const auto* s = std::get_if<Scaled>(&f.node())) return Scaled{s->base, s->amplitude, s->dilation * lambda};
  return Scaled{f, 1.0, lambda};
}

Sampled sample(const RadialFunction& f, const RadialGrid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(f, grid.radii[i]);
  return Sampled::on_grid(grid, std::move(v));
}

void save_sampled(const Sampled& f, std::ostream& os) {
  os << "# interpolation=power-law-loglog\n";
  os.precision(17);
  const auto& d = *f.data;
  for (std::size_t i = 0; i < d.radii.size(); ++i) os << d.radii[i] << ' ' << d.values[i] << '\n';
}

Sampled load_sampled(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind('#', 0) != 0 ||
      header.find("interpolation=power-law") == std::string::npos) {
    throw std::runtime_error("sampled file: missing '# interpolation=power-law-loglog' header");
  }
  std::vector<double> r;
  std::vector<double> v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double a = 0.0;
    double b = 0.0;
    if (!(ls >> a >> b)) throw std::runtime_error("sampled file: malformed line '" + line + "'");
    r.push_back(a);
    v.push_back(b);
  }
  return Sampled::make(std::move(r), std::move(v));
}

std::string describe(const RadialFunction& f) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Zero&) { os << "zero"; },
                 [&](const Constant& c) { os << "const(" << c.value << ")"; },
                 [&](const Gaussian& g) { os << "gaussian(width=" << g.width << ",amp=" << g.amplitude << ")"; },
                 [&](const PowerLogCutoff& p) {
                   os << "powerlog(a=" << p.decay << ",beta=" << p.log_exp << ",cutoff=" << p.cutoff << ")";
                 },
                 [&](const AnnulusIndicator& a) { os << "annulus(" << a.j << ")"; },
                 [&](const BallIndicator& b) { os << "ball(" << b.radius << ")"; },
                 [&](const SmoothBump& b) {
                   os << "bump(" << b.inner << "," << b.outer << ",ramp=" << b.ramp << ",amp=" << b.amplitude << ")";
                 },
                 [&](const Sampled& s) { os << "sampled(" << s.data->radii.size() << " nodes)"; },
                 [&](const PowerWeightProduct& p) { os << "|x|^" << p.exponent << "*" << describe(p.base); },
                 [&](const SignedPower& p) { os << "spow(" << describe(p.base) << "," << p.exponent << ")"; },
                 [&](const Product& p) { os << "(" << describe(p.left) << ")*(" << describe(p.right) << ")"; },
                 [&](const Sum& s) {
                   os << "sum(";
                   for (std::size_t i = 0; i < s.terms.size(); ++i) os << (i ? "," : "") << describe(s.terms[i]);
                   os << ")";
                 },
                 [&](const Scaled& s) { os << s.amplitude << "*" << describe(s.base) << "(" << s.dilation << "r)"; },
                 [&](const Restricted& s) { os << describe(s.base) << "|[" << s.lo << "," << s.hi << ")"; },
                 [&](const HeatEvolved& h) { os << "heat(t=" << h.t << "," << describe(h.base) << ")"; },
             },
             static_cast<const RadialNode::variant&>(f.node()));
  return os.str();
}

}  // namespace herz
