// Experiments on the heat flow: smoothing rates, the Duhamel bound,
// continuity at t = 0 and the uniqueness probe.

#include <cmath>
#include <numbers>

#include "experiment_util.hpp"
#include "herz/heat.hpp"
#include "herz/solver.hpp"

namespace herz {

using namespace detail;

namespace {

struct SmoothingTuple {
  SmoothingExponents e;
  std::string text;
};

std::vector<SmoothingTuple> parse_tuples(const std::string& key, const std::string& text) {
  std::vector<SmoothingTuple> out;
  for (const auto& item : split(text, ';')) {
    auto parts = split(item, ',');
    if (parts.size() != 6) throw ConfigError("config key '" + key + "': want mu,p,nu,q,r0,r per tuple: " + item);
    std::vector<ExtRat> v;
    for (const auto& p : parts) {
      try {
        v.push_back(ExtRat::parse(p));
      } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a rational: " + p);
      }
    }
    SmoothingTuple t;
    t.e.mu = v[0];
    t.e.p = v[1];
    t.e.nu = v[2];
    t.e.q = v[3];
    t.e.r0 = v[4];
    t.e.r = v[5];
    t.text = item;
    out.push_back(t);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': no tuples");
  return out;
}

// e^{t Lap} of amplitude-1 Gaussian of width a, in closed form
RadialFunction evolved_gaussian(double a, double t, int n) {
  const double w2 = a * a + 4.0 * t;
  return Gaussian{std::sqrt(w2), std::pow(a * a / w2, 0.5 * n)};
}

}  // namespace

ExperimentReport run_smoothing_rate(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = cfg.kind;
  rep.anchor = "heat semigroup smoothing estimate on Herz spaces";
  const auto& P = cfg.params;
  const int n = P.get_int("n", 3);
  const std::string tuples_text =
      P.get_string("tuples", "0,1,0,3,1,1; 0,2,-1/2,3,inf,2; 0,2,0,2,inf,inf; 0,3/2,0,3,2,2");
  const auto tuples = parse_tuples("smoothing.tuples", tuples_text);
  const double t_min = P.get_double("t_min", 1e-3);
  const double t_max = P.get_double("t_max", 1e-1);
  const int t_points = P.get_int("t_points", 9);
  const double band_max = P.get_double("band", 10.0);
  const double width = P.get_double("gaussian_width", 1e-4);
  const int lo_log2 = P.get_int("homogeneous_lo_log2", -20);
  const int hi_log2 = P.get_int("homogeneous_hi_log2", 4);
  const std::string family = P.get_string("family", "auto");
  const double tol = tol_or(cfg, 0.05);
  if (t_points < 4) throw ConfigError("config key 'smoothing.t_points': need at least 4 points");
  if (!(t_min > 0 && t_max > t_min)) throw ConfigError("config key 'smoothing.t_min': need 0 < t_min < t_max");
  if (family != "auto" && family != "gaussian" && family != "homogeneous")
    throw ConfigError("config key 'smoothing.family': expected auto, gaussian or homogeneous");

  QuadratureSpec quad;
  const auto grid = RadialGrid::standard(quad);
  const auto times = log_points(t_min, t_max, t_points);
  rep.config = {{"n", n},         {"tuples", tuples_text}, {"t_min", t_min},     {"t_max", t_max},
                {"t_points", t_points}, {"band", band_max}, {"family", family}, {"tolerance", tol}};
  target(rep, "slope_tolerance", tol);
  target(rep, "band_max", band_max);

  bool all = true;
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    const auto& tp = tuples[k];
    const std::string tag = "tuple" + std::to_string(k);
    const auto hyp = check_smoothing_hypotheses(tp.e, n);
    if (!hyp.verdict) {
      measure(rep, tag + ".hypotheses", clause_trace(hyp));
      all = false;
      continue;
    }
    const double theory = smoothing_rate(tp.e, n).to_double();
    const HerzIndex src = HerzIndex::make(tp.e.mu, tp.e.p, tp.e.r0);
    const HerzIndex dst = HerzIndex::make(tp.e.nu, tp.e.q, tp.e.r);
    const ExtRat kappa = src.level(n);
    const bool gaussian = family == "gaussian" || (family == "auto" && kappa == ExtRat(1));

    RadialFunction f;
    if (gaussian) {
      f = Gaussian{width, 1.0};
    } else {
      f = PowerWeightProduct{Restricted{Constant{1.0}, std::exp2(lo_log2), std::exp2(hi_log2)},
                             -n * kappa.to_double()};
    }
    const NormValue rhs = herz_norm_of(f, src, n, quad);
    std::vector<double> ratio(times.size());
    std::vector<double> lhs(times.size());
    CsvTrace trace{"smoothing_" + tag, {"t", "lhs", "rhs", "ratio", "scaled_ratio"}, {}};
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      RadialFunction evolved = gaussian ? evolved_gaussian(width, t, n) : RadialFunction(heat_apply(f, t, n, quad, grid));
      lhs[i] = herz_norm_of(evolved, dst, n, quad).value;
      ratio[i] = lhs[i] / rhs.value;
    }
    std::vector<double> scaled(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      scaled[i] = ratio[i] * std::pow(times[i], -theory);
      trace.rows.push_back({times[i], json_number(lhs[i]), json_number(rhs.value), json_number(ratio[i]),
                            json_number(scaled[i])});
    }
    const double slope = trimmed_slope(times, ratio);
    const double b = band(scaled);
    const bool ok = rhs.finite() && std::isfinite(slope) && std::abs(slope - theory) <= tol && b <= band_max;
    all = all && ok;
    measure(rep, tag, {{"exponents", tp.text},
                       {"function", gaussian ? "concentrated gaussian" : "truncated homogeneous"},
                       {"hypotheses", hyp.via},
                       {"slope", json_number(slope)},
                       {"theory", theory},
                       {"band", json_number(b)},
                       {"pass", ok}});
    target(rep, tag + ".slope", theory);
    rep.traces.push_back(std::move(trace));
  }
  rep.pass = all;
  return rep;
}

ExperimentReport run_meyer(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = cfg.kind;
  rep.anchor = "Meyer-type Duhamel inequality with weak target";
  const auto& P = cfg.params;
  const int n = P.get_int("n", 3);
  DuhamelExponents e;
  e.mu = P.get_rat("mu", 0);
  e.p = P.get_rat("p", 1);
  e.nu = P.get_rat("nu", -1);
  e.q = P.get_rat("q", ExtRat(3, 2));
  e.r = P.get_rat("r", 1);
  const double t_min = P.get_double("t_min", 1e-2);
  const double t_max = P.get_double("t_max", 10.0);
  const int t_points = P.get_int("t_points", 25);
  const double band_max = P.get_double("band", 10.0);
  const double width = P.get_double("gaussian_width", 1e-2);
  const double shell_inner = P.get_double("shell_inner", 0.005);
  const double shell_outer = P.get_double("shell_outer", 0.02);
  const double shell_ramp = P.get_double("shell_ramp", 0.003);
  const double period = P.get_double("period", 0.05);
  const double grading = P.get_double("grading", 0.1);
  const int time_nodes = P.get_int("time_nodes", 128);
  const auto sources = split(P.get_string("sources", "constant,oscillating"), ',');
  const double tol = tol_or(cfg, 0.1);
  if (t_points < 4) throw ConfigError("config key 'meyer.t_points': need at least 4 points");
  if (!(t_min > 0 && t_max > t_min)) throw ConfigError("config key 'meyer.t_min': need 0 < t_min < t_max");
  if (!(grading > 0 && grading <= 1)) throw ConfigError("config key 'meyer.grading': must lie in (0, 1]");

  const auto hyp = check_meyer_hypotheses(e, n);
  if (!hyp.verdict) {
    throw ConfigError("config keys 'meyer.mu,p,nu,q,r': exponents violate the Duhamel hypotheses (need n >= 3, "
                      "nu/n+1/q = mu/n+1/p - 2/n and case (1) or (2))");
  }
  const HerzIndex src = HerzIndex::make(e.mu, e.p, e.r);
  const HerzIndex dst = HerzIndex::make(e.nu, e.q, ExtRat::infinity());

  QuadratureSpec quad;
  quad.time_points = time_nodes;
  const auto grid = RadialGrid::standard(quad);
  const auto times = log_points(t_min, t_max, t_points);
  rep.config = {{"n", n},
                {"mu", rat(e.mu)},
                {"p", rat(e.p)},
                {"nu", rat(e.nu)},
                {"q", rat(e.q)},
                {"r", rat(e.r)},
                {"t_min", t_min},
                {"t_max", t_max},
                {"t_points", t_points},
                {"grading", grading},
                {"time_nodes", time_nodes},
                {"sources", P.get_string("sources", "constant,oscillating")},
                {"tolerance", tol}};
  measure(rep, "hypotheses", clause_trace(hyp));
  target(rep, "band_max", band_max);
  target(rep, "slope_abs_max", tol);

  bool all = true;
  for (const auto& name : sources) {
    RadialFunction profile;
    std::function<double(double)> amp;
    std::function<double(double)> sup_amp;  // sup of |amp| on [0, t]
    if (name == "constant") {
      profile = Gaussian{width, 1.0};
      amp = [](double) { return 1.0; };
      sup_amp = [](double) { return 1.0; };
    } else if (name == "oscillating") {
      profile = SmoothBump{shell_inner, shell_outer, shell_ramp, 1.0};
      amp = [period](double tau) { return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * tau / period); };
      sup_amp = [period, amp](double t) { return t >= period / 4 ? 1.5 : amp(t); };
    } else if (name == "zero") {
      profile = RadialFunction{};
      amp = [](double) { return 0.0; };
      sup_amp = [](double) { return 0.0; };
    } else {
      throw ConfigError("config key 'meyer.sources': unknown source '" + name + "'");
    }
    const NormValue base = herz_norm_of(profile, src, n, quad);
    if (profile.is_zero() || base.value == 0.0) {
      measure(rep, name, {{"vacuous", true}, {"pass", true}});
      continue;
    }
    const SpaceTimeFunction F([profile, amp](double tau) -> RadialFunction { return Scaled{profile, amp(tau), 1.0}; },
                              t_max);
    std::vector<double> R(times.size());
    CsvTrace trace{"meyer_" + name, {"t", "duhamel_norm", "source_sup", "R"}, {}};
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Sampled d = duhamel(F, times[i], n, quad, grading, grid);
      const double num = herz_norm_of(d, dst, n, quad).value;
      const double den = sup_amp(times[i]) * base.value;
      R[i] = num / den;
      trace.rows.push_back({times[i], json_number(num), json_number(den), json_number(R[i])});
    }
    const double slope = trimmed_slope(times, R);
    const double b = band(R);
    const bool ok = std::isfinite(b) && b <= band_max && std::abs(slope) <= tol;
    all = all && ok;
    measure(rep, name, {{"band", json_number(b)}, {"slope", json_number(slope)}, {"pass", ok}});
    rep.traces.push_back(std::move(trace));
  }
  rep.pass = all;
  return rep;
}

ExperimentReport run_continuity(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = cfg.kind;
  rep.anchor = "continuity of the heat semigroup at t = 0 and small-time decay";
  const auto& P = cfg.params;
  const int n = P.get_int("n", 3);
  const HerzIndex idx = HerzIndex::make(P.get_rat("s", 0), P.get_rat("q", 2), P.get_rat("r", 2));
  const HerzIndex tgt =
      HerzIndex::make(P.get_rat("target_s", 0), P.get_rat("target_q", 6), P.get_rat("target_r", 2));
  const double outer = P.get_double("bump_outer", 1.0);
  const double ramp = P.get_double("bump_ramp", 0.25);
  const auto times = P.get_doubles("times", {1e-1, 1e-2, 1e-3, 1e-4});
  const double decay_factor = P.get_double("decay_factor", 1.5);
  const double tol = tol_or(cfg, 1e-2);
  if (times.size() < 2) throw ConfigError("config key 'continuity.times': need at least two times");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] < times[i - 1] && times[i] > 0))
      throw ConfigError("config key 'continuity.times': must be positive and decreasing");

  rep.config = {{"n", n},
                {"index", {rat(idx.s), rat(idx.q), rat(idx.r)}},
                {"target_index", {rat(tgt.s), rat(tgt.q), rat(tgt.r)}},
                {"bump_outer", outer},
                {"bump_ramp", ramp},
                {"times", times},
                {"decay_factor", decay_factor},
                {"tolerance", tol}};

  QuadratureSpec quad;
  const Window window{-12, 4};
  const RadialFunction f = SmoothBump{0.0, outer, ramp, 1.0};
  const auto hyp = check_continuity_hypotheses(idx);
  const auto dhyp = check_decay_hypotheses(idx, tgt, n);
  measure(rep, "continuity_hypotheses", clause_trace(hyp));
  measure(rep, "decay_hypotheses", clause_trace(dhyp));
  target(rep, "final_relative_difference_max", tol);
  target(rep, "decay_factor_per_step_min", decay_factor);

  // continuity: ||e^{t Lap} f - f||
  const double fnorm = herz_norm_of(f, idx, n, quad, window).value;
  std::vector<double> diff(times.size());
  CsvTrace ct{"continuity_difference", {"t", "difference", "relative"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const RadialFunction d = Sum{{HeatEvolved{f, times[i], n, quad}, Scaled{f, -1.0, 1.0}}};
    diff[i] = herz_norm_of(d, idx, n, quad, window).value;
    ct.rows.push_back({times[i], json_number(diff[i]), json_number(diff[i] / fnorm)});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < diff.size(); ++i) decreasing = decreasing && diff[i] < diff[i - 1];
  const double final_rel = diff.back() / fnorm;
  const bool cont_ok = hyp.verdict && decreasing && final_rel <= tol;
  measure(rep, "norm_f", json_number(fnorm));
  measure(rep, "differences", diff);
  measure(rep, "strictly_decreasing", decreasing);
  measure(rep, "final_relative_difference", json_number(final_rel));

  // zero control: e^{t Lap} 0 - 0 is exactly 0
  const RadialFunction z{};
  double zero_max = 0.0;
  for (double t : times) {
    const RadialFunction d = Sum{{HeatEvolved{z, t, n, quad}, Scaled{z, -1.0, 1.0}}};
    zero_max = std::max(zero_max, herz_norm_of(d, idx, n, quad, window).value);
  }
  measure(rep, "zero_control", zero_max);

  // decay: t^beta ||e^{t Lap} f|| at the target index
  const double beta = decay_exponent(idx, tgt, n).to_double();
  std::vector<double> scaled(times.size());
  CsvTrace dt{"continuity_decay", {"t", "scaled_norm"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double v = herz_norm_of(HeatEvolved{f, times[i], n, quad}, tgt, n, quad, window).value;
    scaled[i] = std::pow(times[i], beta) * v;
    dt.rows.push_back({times[i], json_number(scaled[i])});
  }
  double worst = kInf;
  for (std::size_t i = 1; i < scaled.size(); ++i) {
    const double decades = std::log10(times[i - 1] / times[i]);
    worst = std::min(worst, std::pow(scaled[i - 1] / scaled[i], 1.0 / decades));
  }
  const bool decay_ok = dhyp.verdict && worst >= decay_factor;
  measure(rep, "beta", beta);
  measure(rep, "scaled_norms", scaled);
  measure(rep, "worst_decay_factor_per_decade", json_number(worst));

  rep.traces.push_back(std::move(ct));
  rep.traces.push_back(std::move(dt));
  rep.pass = cont_ok && decay_ok && zero_max == 0.0;
  return rep;
}

ExperimentReport run_uniqueness(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.kind = cfg.kind;
  rep.anchor = "unconditional uniqueness via the Gronwall argument";
  const auto& P = cfg.params;
  const int n = P.get_int("n", 3);
  const ExtRat alpha = P.get_rat("alpha", 2);
  const ExtRat gamma = P.get_rat("gamma", 0);
  const HerzIndex idx = HerzIndex::make(P.get_rat("s", 0), P.get_rat("q", 3), P.get_rat("r", 1));
  const double eps = P.get_double("eps", 1e-3);
  const double width = P.get_double("width", 1.0);
  const double pert = P.get_double("perturbation", 1e-4);
  const double T = P.get_double("T", 0.1);
  ProbeOptions opt;
  opt.tol = P.get_double("solver_tol", 1e-12);
  opt.max_iter = P.get_int("max_iter", 40);
  opt.early_points = P.get_int("early_points", 6);
  opt.aux_level = P.get_double("aux_level", 0.5);
  opt.solver.time_points = P.get_int("time_points", 16);
  const bool control = P.get_bool("control", true);
  const double slack = tol_or(cfg, 0.1);

  ProblemParams params;
  try {
    params = ProblemParams::make(n, alpha, gamma, idx);
  } catch (const ParameterError& err) {
    throw ConfigError(std::string("config keys 'unique.n,alpha,gamma,s,q,r': ") + err.what());
  }
  rep.config = {{"n", n},
                {"alpha", rat(alpha)},
                {"gamma", rat(gamma)},
                {"index", {rat(idx.s), rat(idx.q), rat(idx.r)}},
                {"eps", eps},
                {"width", width},
                {"perturbation", pert},
                {"T", T},
                {"solver_tol", opt.tol},
                {"max_iter", opt.max_iter},
                {"time_points", opt.solver.time_points},
                {"tolerance", slack}};

  const QuadratureSpec quad;
  const RadialFunction u0 = Gaussian{width, eps};
  const RadialFunction w = Scaled{AnnulusIndicator{0}, pert, 1.0};
  const auto crit = classify(params);
  measure(rep, "case", to_string(crit.kind));
  const auto d = uniqueness_probe(u0, params, T, w, quad, opt);
  double max_diff = 0.0;
  CsvTrace tr{"uniqueness_difference", {"t", "converged_difference", "first_step_difference", "envelope"}, {}};
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    max_diff = std::max(max_diff, d.diff_norms[i].value);
    tr.rows.push_back({d.times[i], json_number(d.diff_norms[i].value), json_number(d.first_step_diff[i]),
                       json_number(d.gronwall_envelope[i])});
  }
  measure(rep, "hypotheses", d.hypotheses);
  measure(rep, "outcome_plain", to_string(d.outcome_plain));
  measure(rep, "outcome_perturbed", to_string(d.outcome_perturbed));
  measure(rep, "delta", d.delta);
  measure(rep, "early_exponent", json_number(d.early_exponent));
  measure(rep, "envelope_constant", json_number(d.envelope_constant));
  measure(rep, "max_converged_difference", json_number(max_diff));
  if (d.aux_defined) measure(rep, "aux", {{"inv_q", d.aux_q_inv}, {"beta", d.aux_beta}, {"sup", json_number(d.aux_sup)}});
  if (!d.note.empty()) measure(rep, "probe_note", d.note);
  target(rep, "converged_difference_max", 10.0 * opt.tol);
  target(rep, "early_exponent_min", d.delta - slack);

  bool ok = !d.inconclusive && d.outcome_plain == PicardOutcome::Converged &&
            d.outcome_perturbed == PicardOutcome::Converged && max_diff <= 10.0 * opt.tol &&
            d.early_exponent >= d.delta - slack;

  if (control) {
    const auto z = uniqueness_probe(u0, params, T, RadialFunction{}, quad, opt);
    double zmax = 0.0;
    for (const auto& v : z.diff_norms) zmax = std::max(zmax, v.value);
    const bool zok = z.outcome_plain == PicardOutcome::Converged && zmax <= opt.tol;
    measure(rep, "control_max_difference", json_number(zmax));
    target(rep, "control_difference_max", opt.tol);
    ok = ok && zok;
  }
  rep.traces.push_back(std::move(tr));
  rep.pass = ok;
  return rep;
}

}  // namespace herz
