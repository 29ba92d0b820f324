#include "herz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace herz {

namespace {

std::vector<double> geometric_times(double T, const SolverOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("solver: horizon must be positive");
  if (opt.time_points < 2) throw std::invalid_argument("solver: need at least two grid times");
  if (!(opt.time_ratio > 1.0)) throw std::invalid_argument("solver: time ratio must exceed 1");
  std::vector<double> t(opt.time_points);
  for (int i = 0; i < opt.time_points; ++i) t[i] = T * std::pow(opt.time_ratio, -(opt.time_points - 1 - i));
  return t;
}

RadialFunction drop_if_zero(const Sampled& s) {
  for (double v : s.data->values) {
    if (v != 0.0) return s;
  }
  return {};
}

Sampled as_grid_sampled(const RadialFunction& f, const RadialGrid& grid) {
  if (const auto* s = std::get_if<Sampled>(&f.node())) {
    if (s->data->radii == grid.radii) return *s;
  }
  return sample(f, grid);
}

NormValue index_norm(const RadialFunction& f, const ProblemParams& p, const QuadratureSpec& quad, const Window& w) {
  if (f.is_zero()) return {};
  return herz_norm_of(f, p.index, p.n, quad, w);
}

double grading_for(const ProblemParams& p, const SolverOptions& opt, std::string& note) {
  if (opt.grading > 0.0) return std::min(opt.grading, 1.0);
  const double d = sigma_delta(p).delta.to_double();
  if (d <= 0.0) {
    note = "delta <= 0; Duhamel grading falls back to 1";
    return 1.0;
  }
  return std::min(d, 1.0);
}

struct Stepper {
  const ProblemParams& params;
  const QuadratureSpec& quad;
  const RadialGrid& grid;
  double grading;
  std::vector<double> times;         // 0 followed by the grid times
  std::vector<Sampled> linear;       // e^{t Lap} u0 at the grid times

  /// One application of the Picard map to the slices of u.
  std::vector<Sampled> apply(const SpaceTimeFunction& u) const {
    const SpaceTimeFunction F(
        [&u, this](double tau) {
          const RadialFunction ut = u.at(tau);
          if (ut.is_zero()) return RadialFunction{};
          return nonlinearity(ut, params.alpha, params.gamma);
        },
        u.t_max());
    const auto m = static_cast<long>(linear.size());
    std::vector<Sampled> out(m);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < m; ++i) {
      const Sampled d = duhamel(F, times[i + 1], params.n, quad, grading, grid);
      out[i] = *combine_sampled(linear[i], 1.0, d, 1.0);
    }
    return out;
  }

  SpaceTimeFunction assemble(const RadialFunction& at_zero, const std::vector<Sampled>& slices) const {
    std::vector<RadialFunction> s;
    s.reserve(slices.size() + 1);
    s.push_back(at_zero);
    for (const auto& x : slices) s.push_back(drop_if_zero(x));
    return SpaceTimeFunction(times, std::move(s));
  }
};

Stepper make_stepper(const RadialFunction& u0, const ProblemParams& params, double T, const QuadratureSpec& quad,
                     const RadialGrid& grid, const SolverOptions& opt, double grading) {
  Stepper st{params, quad, grid, grading, {0.0}, {}};
  const auto tg = geometric_times(T, opt);
  st.times.insert(st.times.end(), tg.begin(), tg.end());
  st.linear.resize(tg.size());
  for (std::size_t i = 0; i < tg.size(); ++i) {
    st.linear[i] = u0.is_zero() ? Sampled::on_grid(grid, std::vector<double>(grid.size(), 0.0))
                                : heat_apply(u0, tg[i], params.n, quad, grid);
  }
  return st;
}

}  // namespace

std::string to_string(PicardOutcome o) {
  switch (o) {
    case PicardOutcome::Converged:
      return "Converged";
    case PicardOutcome::NonContractive:
      return "NonContractive";
    case PicardOutcome::MaxIterations:
      return "MaxIterations";
  }
  return "?";
}

PicardRun picard_solve(const RadialFunction& u0, const ProblemParams& params, double T, const QuadratureSpec& quad,
                       int max_iter, double tol, const SolverOptions& opt, const RadialFunction& zeroth_shift) {
  if (max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  quad.validate();
  PicardRun run{params, T, geometric_times(T, opt), {}, {}, {}, {}, PicardOutcome::MaxIterations, false, 0, 1.0, {}};
  run.grading = grading_for(params, opt, run.note);
  const RadialGrid grid = RadialGrid::standard(quad);
  const Stepper st = make_stepper(u0, params, T, quad, grid, opt, run.grading);

  const RadialFunction start = u0 + zeroth_shift;
  const RadialFunction at_zero = start.is_zero() ? RadialFunction{} : RadialFunction(as_grid_sampled(start, grid));
  std::vector<Sampled> cur = st.linear;
  if (!zeroth_shift.is_zero()) {
    const Sampled shift = as_grid_sampled(zeroth_shift, grid);
    for (auto& c : cur) c = *combine_sampled(c, 1.0, shift, 1.0);
  }
  auto record = [&](const std::vector<Sampled>& slices) {
    std::vector<NormValue> h(slices.size());
    for (std::size_t i = 0; i < slices.size(); ++i) h[i] = index_norm(drop_if_zero(slices[i]), params, quad, opt.window);
    run.herz_history.push_back(std::move(h));
    if (opt.keep_iterates || run.iterates.empty()) {
      run.iterates.push_back(st.assemble(at_zero, slices));
    } else {
      run.iterates.back() = st.assemble(at_zero, slices);
    }
  };
  record(cur);

  int rising = 0;
  for (int k = 0; k < max_iter; ++k) {
    const SpaceTimeFunction u = st.assemble(at_zero, cur);
    std::vector<Sampled> next = st.apply(u);
    double d = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const Sampled diff = *combine_sampled(next[i], 1.0, cur[i], -1.0);
      d = std::max(d, index_norm(drop_if_zero(diff), params, quad, opt.window).value);
    }
    if (!run.differences.empty()) {
      const double prev = run.differences.back();
      const double ratio = prev > 0.0 ? d / prev : (d > 0.0 ? kInf : 0.0);
      run.contraction_ratios.push_back(ratio);
      rising = ratio > 1.0 ? rising + 1 : 0;
    }
    run.differences.push_back(d);
    cur = std::move(next);
    record(cur);
    run.iterations = k + 1;
    if (d <= tol) {
      run.outcome = PicardOutcome::Converged;
      run.converged = true;
      break;
    }
    if (rising >= 3) {
      run.outcome = PicardOutcome::NonContractive;
      break;
    }
  }
  return run;
}

std::vector<Sampled> first_correction(const RadialFunction& u0, const ProblemParams& params, double T,
                                      const QuadratureSpec& quad, const SolverOptions& opt) {
  std::string note;
  const RadialGrid grid = RadialGrid::standard(quad);
  const Stepper st = make_stepper(u0, params, T, quad, grid, opt, grading_for(params, opt, note));
  const RadialFunction at_zero = u0.is_zero() ? RadialFunction{} : RadialFunction(as_grid_sampled(u0, grid));
  std::vector<Sampled> next = st.apply(st.assemble(at_zero, st.linear));
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = *combine_sampled(next[i], 1.0, st.linear[i], -1.0);
  return next;
}

std::vector<double> fixed_point_residual(const PicardRun& run, const RadialFunction& u0, const QuadratureSpec& quad,
                                         const SolverOptions& opt) {
  const RadialGrid grid = RadialGrid::standard(quad);
  const Stepper st = make_stepper(u0, run.params, run.horizon, quad, grid, opt, run.grading);
  const SpaceTimeFunction& u = run.iterates.back();
  const std::vector<Sampled> next = st.apply(u);
  std::vector<double> out(next.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const Sampled ui = as_grid_sampled(u.slices()[i + 1], grid);
    out[i] = index_norm(drop_if_zero(*combine_sampled(next[i], 1.0, ui, -1.0)), run.params, quad, opt.window).value;
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]);
    const double b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

DifferenceReport uniqueness_probe(const RadialFunction& u0, const ProblemParams& params, double T,
                                  const RadialFunction& perturbation, const QuadratureSpec& quad,
                                  const ProbeOptions& opt) {
  DifferenceReport rep;
  rep.tol = opt.tol;
  const auto sd = sigma_delta(params);
  rep.delta = sd.delta.to_double();

  const auto h1 = check_theorem_hypotheses(params, Theorem::Uniqueness);
  const auto h2 = check_theorem_hypotheses(params, Theorem::CriticalUniqueness);
  if (h1.verdict) {
    rep.hypotheses = "uniqueness " + h1.via;
  } else if (h2.verdict) {
    rep.hypotheses = "critical uniqueness " + h2.via;
  } else {
    rep.hypotheses = "none";
  }

  SolverOptions so = opt.solver;
  so.keep_iterates = true;
  const PicardRun a = picard_solve(u0, params, T, quad, opt.max_iter, opt.tol, so);
  const PicardRun b = picard_solve(u0, params, T, quad, opt.max_iter, opt.tol, so, perturbation);
  rep.outcome_plain = a.outcome;
  rep.outcome_perturbed = b.outcome;
  rep.times = a.time_grid;
  const RadialGrid grid = RadialGrid::standard(quad);

  const auto& ua = a.iterates.back().slices();
  const auto& ub = b.iterates.back().slices();
  bool small = true;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const Sampled x = as_grid_sampled(ua[i + 1], grid);
    const Sampled y = as_grid_sampled(ub[i + 1], grid);
    rep.diff_norms.push_back(index_norm(drop_if_zero(*combine_sampled(x, 1.0, y, -1.0)), params, quad, so.window));
    small = small && rep.diff_norms.back().value <= 10.0 * opt.tol;
  }

  // the first application of the map to both zeroth iterates
  const auto& fa = a.iterates.at(std::min<std::size_t>(1, a.iterates.size() - 1)).slices();
  const auto& fb = b.iterates.at(std::min<std::size_t>(1, b.iterates.size() - 1)).slices();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const Sampled x = as_grid_sampled(fa[i + 1], grid);
    const Sampled y = as_grid_sampled(fb[i + 1], grid);
    rep.first_step_diff.push_back(
        index_norm(drop_if_zero(*combine_sampled(x, 1.0, y, -1.0)), params, quad, so.window).value);
  }
  // both u^1 carry the same linear term, so this is a difference of Duhamel integrals
  const double p_norm = perturbation.is_zero() ? 0.0 : index_norm(perturbation, params, quad, so.window).value;
  std::vector<double> et;
  std::vector<double> ed;
  const int early = std::min<int>(opt.early_points, static_cast<int>(rep.times.size()));
  for (int i = 0; i < early; ++i) {
    if (rep.first_step_diff[i] > 0.0) {
      et.push_back(rep.times[i]);
      ed.push_back(rep.first_step_diff[i]);
    }
  }
  bool early_ok = true;
  if (et.size() >= 2 && p_norm > 0.0) {
    rep.early_exponent = loglog_slope(et, ed);
    early_ok = rep.early_exponent >= rep.delta - 0.1;
    for (std::size_t i = 0; i < et.size(); ++i) {
      rep.envelope_constant = std::max(rep.envelope_constant, ed[i] / (std::pow(et[i], rep.delta) * p_norm));
    }
  } else {
    rep.early_exponent = std::nan("");
    rep.note = "no early-time difference to fit";
  }
  for (double t : rep.times) rep.gronwall_envelope.push_back(rep.envelope_constant * std::pow(t, rep.delta) * p_norm);

  // sup_t t^beta ||e^{t Lap} u0|| at an auxiliary (s, q~, r)
  const ExtRat n(params.n);
  const ExtRat v = params.index.level(params.n);
  const ExtRat lo = v - ExtRat(2) / (n * (params.alpha - ExtRat(1)));
  const ExtRat hi = critical_exponents(params).q_c.reciprocal();
  if (lo < hi) {
    const double level = lo.to_double() + opt.aux_level * (hi.to_double() - lo.to_double());
    const double qinv = level - params.index.s.to_double() / params.n;
    if (qinv >= 0.0 && qinv <= 1.0) {
      rep.aux_defined = true;
      rep.aux_q_inv = qinv;
      rep.aux_beta = 0.5 * params.n * (v.to_double() - level);
      // q~ is generally irrational here; round to a nearby rational for the index
      const auto qt = qinv == 0.0 ? ExtRat::infinity() : ExtRat(1000000, std::llround(qinv * 1000000));
      const HerzIndex aux = HerzIndex::make(params.index.s, qt, params.index.r);
      for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const RadialFunction& ui = a.iterates.front().slices()[i + 1];
        if (ui.is_zero()) continue;
        const double nv = herz_norm_of(ui, aux, params.n, quad, so.window).value;
        rep.aux_sup = std::max(rep.aux_sup, std::pow(rep.times[i], rep.aux_beta) * nv);
      }
    }
  }

  rep.inconclusive = a.outcome != PicardOutcome::Converged || b.outcome != PicardOutcome::Converged;
  if (rep.inconclusive) {
    rep.verdict = false;
    rep.note += rep.note.empty() ? "" : "; ";
    rep.note += "Inconclusive: " + to_string(a.outcome) + " / " + to_string(b.outcome);
  } else {
    rep.verdict = small && early_ok;
  }
  return rep;
}

}  // namespace herz
