#include "herz/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace herz {

namespace {

double int_pow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

/// Per-function data reused across output radii.
struct Prepared {
  double clip = kInf;
  double scale = kInf;
  double origin_power = 0.0;
  const SampledData* sampled = nullptr;
};

Prepared prepare(const RadialFunction& f) {
  Prepared p;
  const auto ff = far_field(f);
  switch (ff.kind) {
    case FarField::Kind::Compact:
      p.clip = ff.support;
      break;
    case FarField::Kind::Gaussian: {
      double reach = ff.width * std::sqrt(std::max(0.0, std::log(std::max(ff.coef, 1e-300)) + 745.0));
      if (ff.power > 0.0) reach += ff.width * ff.power;
      p.clip = std::max(ff.from, reach);
      break;
    }
    default:
      break;
  }
  p.scale = feature_scale(f);
  const auto ob = origin_behavior(f, 1e-8);
  if (ob.known && !ob.vanishes) p.origin_power = ob.power;
  if (ob.known && ob.vanishes) p.origin_power = 10.0;
  if (const auto* s = std::get_if<Sampled>(&f.node())) p.sampled = s->data.get();
  return p;
}

struct KernelAt {
  int n;
  double coef;
  double inv4t;
  double zr;  // z = zr * rho
  double r;
  int angular;

  double operator()(double rho) const {
    const double d = r - rho;
    const double g = std::exp(-d * d * inv4t);
    if (g == 0.0) return 0.0;
    return coef * g * spherical_factor(n, zr * rho, angular) * int_pow(rho, n - 1);
  }
};

double integrate(const RadialFunction& f, const Prepared& prep, double t, double r, int n,
                 const QuadratureSpec& quad, int order) {
  const double w = std::sqrt(4.0 * t);
  const double a = std::max(0.0, r - quad.kernel_reach * w);
  const double b = std::min(r + quad.kernel_reach * w, prep.clip);
  if (!(b > a)) return 0.0;

  const KernelAt kernel{n, std::pow(4.0 * std::numbers::pi * t, -0.5 * n), 1.0 / (4.0 * t), r / (2.0 * t), r,
                        quad.angular_points};
  auto integrand = [&](double rho) {
    const double k = kernel(rho);
    if (k == 0.0) return 0.0;
    return k * value(f, rho);
  };
  const GaussRule& rule = gauss_legendre(order);
  const double h = std::min(w, prep.scale);

  std::vector<double> pts = breakpoints(f, a, b, true);
  pts.push_back(a);
  pts.push_back(b);
  if (r > a && r < b) pts.push_back(r);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double x0 = pts[k];
    const double x1 = pts[k + 1];
    double x = x0;
    if (x0 < 1e-20 * x1) {
      const double dim = n + prep.origin_power;
      if (dim <= 0.0) throw std::domain_error("heat: function is not locally integrable at the origin");
      const int levels = std::clamp(static_cast<int>(std::ceil(57.0 / dim)), 8, 400);
      x = std::ldexp(x1, -levels);
      total += integrand(x) * x / dim;
    }
    while (x < x1 && x < h) {
      const double nx = std::min(2.0 * x, x1);
      total += gauss_panel(rule, x, nx, integrand);
      x = nx;
    }
    if (x < x1) {
      const int m = static_cast<int>(std::ceil((x1 - x) / h - 1e-12));
      const double d = (x1 - x) / m;
      for (int i = 0; i < m; ++i) {
        const double lo = x + i * d;
        const double hi = i + 1 == m ? x1 : x + (i + 1) * d;
        total += gauss_panel(rule, lo, hi, integrand);
      }
    }
  }
  return total;
}

double heat_value_prepared(const RadialFunction& f, const Prepared& prep, double t, double r, int n,
                           const QuadratureSpec& quad, double* error) {
  if (!(t > 0.0)) throw std::invalid_argument("heat: t must be positive");
  if (r < 0.0) throw std::invalid_argument("heat: radius must be >= 0");
  if (f.is_zero()) {
    if (error) *error = 0.0;
    return 0.0;
  }
  const double v = integrate(f, prep, t, r, n, quad, quad.kernel_order);
  if (error) {
    const double fine = integrate(f, prep, t, r, n, quad, std::min(64, 2 * quad.kernel_order));
    double err = std::abs(fine - v);
    if (prep.sampled) {
      const double w = std::sqrt(4.0 * t);
      const double edge = prep.sampled->radii.back();
      if (r + quad.kernel_reach * w > edge) {
        err += std::abs(prep.sampled->values.back()) * 0.5 * std::erfc((edge - r) / w);
      }
    }
    *error = err;
    return fine;
  }
  return v;
}

}  // namespace

double spherical_factor(int n, double z, int angular_points) {
  if (n < 1) throw std::invalid_argument("spherical_factor: n must be >= 1");
  if (n == 1) return 1.0 + std::exp(-2.0 * z);
  if (n == 3) {
    if (z < 1e-8) return 4.0 * std::numbers::pi * (1.0 - z);
    return 4.0 * std::numbers::pi * (-std::expm1(-2.0 * z)) / (2.0 * z);
  }
  const int m = n - 2;
  const double phimax = z > 0.0 ? std::min(0.5 * std::numbers::pi, 10.0 / std::sqrt(2.0 * z)) : 0.5 * std::numbers::pi;
  const GaussRule& rule = gauss_legendre(angular_points);
  constexpr int kPanels = 4;
  double acc = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = phimax * p / kPanels;
    const double hi = phimax * (p + 1) / kPanels;
    acc += gauss_panel(rule, lo, hi, [&](double phi) {
      const double s = std::sin(phi);
      return std::exp(-2.0 * z * s * s) * int_pow(s * std::cos(phi), m);
    });
  }
  return sphere_area(n - 1) * std::ldexp(acc, m + 1);
}

double radial_heat_kernel(int n, double t, double r, double rho, int angular_points) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel: t must be positive");
  const double d = r - rho;
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-d * d / (4.0 * t)) *
         spherical_factor(n, r * rho / (2.0 * t), angular_points);
}

double heat_value(const RadialFunction& f, double t, double r, int n, const QuadratureSpec& quad) {
  return heat_value(f, t, r, n, quad, nullptr);
}

double heat_value(const RadialFunction& f, double t, double r, int n, const QuadratureSpec& quad, double* error) {
  const Prepared prep = prepare(f);
  return heat_value_prepared(f, prep, t, r, n, quad, error);
}

Sampled heat_apply_serial(const RadialFunction& f, double t, int n, const QuadratureSpec& quad,
                          const RadialGrid& grid) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_apply: t must be positive");
  const Prepared prep = prepare(f);
  const std::size_t m = grid.size();
  std::vector<double> v(m);
  std::vector<double> e(quad.estimate_errors ? m : 0);
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = heat_value_prepared(f, prep, t, grid.radii[i], n, quad, quad.estimate_errors ? &e[i] : nullptr);
  }
  return Sampled::on_grid(grid, std::move(v), std::move(e));
}

Sampled heat_apply(const RadialFunction& f, double t, int n, const QuadratureSpec& quad, const RadialGrid& grid) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_apply: t must be positive");
  const Prepared prep = prepare(f);
  const auto m = static_cast<long>(grid.size());
  std::vector<double> v(m);
  std::vector<double> e(quad.estimate_errors ? m : 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < m; ++i) {
    v[i] = heat_value_prepared(f, prep, t, grid.radii[i], n, quad, quad.estimate_errors ? &e[i] : nullptr);
  }
  return Sampled::on_grid(grid, std::move(v), std::move(e));
}

Sampled heat_apply(const RadialFunction& f, double t, int n, const QuadratureSpec& quad) {
  return heat_apply(f, t, n, quad, RadialGrid::standard(quad));
}

RadialFunction nonlinearity(const RadialFunction& u, const ExtRat& alpha, const ExtRat& gamma) {
  if (alpha.is_infinite() || alpha < ExtRat(1)) throw std::invalid_argument("nonlinearity: alpha must be finite >= 1");
  if (gamma.is_infinite()) throw std::invalid_argument("nonlinearity: gamma must be finite");
  if (u.is_zero()) return u;
  const double a = alpha.to_double();
  RadialFunction core;
  if (const auto* s = std::get_if<Sampled>(&u.node())) {
    const auto& d = *s->data;
    std::vector<double> v(d.values.size());
    std::vector<double> e(d.errors.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = d.values[i];
      v[i] = x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), a), x);
      if (!e.empty()) e[i] = a * std::pow(std::abs(x) + d.errors[i], a - 1.0) * d.errors[i];
    }
    core = Sampled::make(d.radii, std::move(v), std::move(e));
  } else if (alpha == ExtRat(1)) {
    core = u;
  } else {
    core = SignedPower{u, a};
  }
  if (gamma.is_zero()) return core;
  return PowerWeightProduct{core, gamma.to_double()};
}

SpaceTimeFunction::SpaceTimeFunction(std::vector<double> times, std::vector<RadialFunction> slices)
    : times_(std::move(times)), slices_(std::move(slices)) {
  if (times_.empty() || times_.size() != slices_.size()) {
    throw std::invalid_argument("SpaceTimeFunction: times and slices must be nonempty and of equal length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] < 0.0) throw std::invalid_argument("SpaceTimeFunction: times must be >= 0");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("SpaceTimeFunction: times must be increasing");
    }
  }
  t_max_ = times_.back();
}

SpaceTimeFunction::SpaceTimeFunction(std::function<RadialFunction(double)> generator, double t_max)
    : generator_(std::move(generator)), t_max_(t_max) {
  if (!generator_) throw std::invalid_argument("SpaceTimeFunction: empty generator");
  if (!(t_max > 0.0)) throw std::invalid_argument("SpaceTimeFunction: t_max must be positive");
}

double SpaceTimeFunction::t_min() const { return generator_ ? 0.0 : times_.front(); }
double SpaceTimeFunction::t_max() const { return t_max_; }

RadialFunction SpaceTimeFunction::at(double tau) const {
  const double slack = 1e-12 * std::max(1.0, t_max_);
  if (tau < t_min() - slack || tau > t_max_ + slack) {
    throw std::out_of_range("SpaceTimeFunction: time " + std::to_string(tau) + " outside covered interval");
  }
  if (generator_) return generator_(std::clamp(tau, 0.0, t_max_));
  if (times_.size() == 1) return slices_.front();
  tau = std::clamp(tau, times_.front(), times_.back());
  const auto it = std::upper_bound(times_.begin(), times_.end(), tau);
  std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (k + 1 >= times_.size()) return slices_.back();
  if (tau == times_[k]) return slices_[k];
  const double lam = (tau - times_[k]) / (times_[k + 1] - times_[k]);
  if (auto c = combine_sampled(slices_[k], 1.0 - lam, slices_[k + 1], lam)) return *c;
  return (1.0 - lam) * slices_[k] + lam * slices_[k + 1];
}

namespace {

void accumulate_duhamel(const SpaceTimeFunction& F, double t, int n, const QuadratureSpec& quad, double expo,
                        const RadialGrid& grid, int panels, int order, std::vector<double>& acc,
                        std::vector<double>* err) {
  const double vmax = std::pow(t, expo);
  const GaussRule& rule = gauss_legendre(order);
  const double pw = vmax / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * pw;
    for (int g = 0; g < order; ++g) {
      const double v = lo + 0.5 * pw * (1.0 + rule.nodes[g]);
      const double s = std::pow(v, 1.0 / expo);
      const double jac = std::pow(v, 1.0 / expo - 1.0) / expo;
      const double weight = 0.5 * pw * rule.weights[g] * jac;
      const RadialFunction slice = F.at(t - s);
      if (slice.is_zero()) continue;
      const Sampled h = heat_apply(slice, s, n, quad, grid);
      const auto& d = *h.data;
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weight * d.values[i];
      if (err && !d.errors.empty()) {
        for (std::size_t i = 0; i < acc.size(); ++i) (*err)[i] += std::abs(weight) * d.errors[i];
      }
    }
  }
}

}  // namespace

Sampled duhamel(const SpaceTimeFunction& F, double t, int n, const QuadratureSpec& quad, double singular_exponent,
                const RadialGrid& grid) {
  if (!(t > 0.0)) throw std::invalid_argument("duhamel: t must be positive");
  if (!(singular_exponent > 0.0 && singular_exponent <= 1.0)) {
    throw std::invalid_argument("duhamel: singular exponent must be in (0, 1]");
  }
  if (F.t_min() > 1e-12 * t) throw std::out_of_range("duhamel: F does not cover times near 0");
  if (F.t_max() < t * (1.0 - 1e-12)) throw std::out_of_range("duhamel: F does not cover times up to t");
  constexpr int kOrder = 8;
  const int panels = std::max(1, quad.time_points / kOrder);
  std::vector<double> acc(grid.size(), 0.0);
  std::vector<double> err;
  if (quad.estimate_errors) err.assign(grid.size(), 0.0);
  accumulate_duhamel(F, t, n, quad, singular_exponent, grid, panels, kOrder, acc,
                     quad.estimate_errors ? &err : nullptr);
  if (quad.estimate_errors) {
    std::vector<double> coarse(grid.size(), 0.0);
    QuadratureSpec q2 = quad;
    q2.estimate_errors = false;
    if (panels >= 2) {
      accumulate_duhamel(F, t, n, q2, singular_exponent, grid, panels / 2, kOrder, coarse, nullptr);
    } else {
      accumulate_duhamel(F, t, n, q2, singular_exponent, grid, 1, kOrder / 2, coarse, nullptr);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) err[i] += std::abs(acc[i] - coarse[i]);
  }
  return Sampled::on_grid(grid, std::move(acc), std::move(err));
}

Sampled duhamel(const SpaceTimeFunction& F, double t, int n, const QuadratureSpec& quad, double singular_exponent) {
  return duhamel(F, t, n, quad, singular_exponent, RadialGrid::standard(quad));
}

}  // namespace herz
