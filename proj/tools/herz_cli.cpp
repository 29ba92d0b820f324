// Command-line front end for the experiment harness.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "herz/harness.hpp"
#include "herz/solver.hpp"

using namespace herz;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string csv_dir;
  std::vector<std::string> sets;
  bool no_runtime = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key=value config file");
  app->add_option("--out", c.out, "write the JSON report here instead of stdout");
  app->add_option("--csv-dir", c.csv_dir, "directory for CSV traces");
  app->add_option("--set", c.sets, "override a config key (key=value), repeatable");
  app->add_flag("--no-runtime", c.no_runtime, "omit runtime_ms so reports are byte-identical across runs");
}

ParamTable load_table(const Common& c) {
  ParamTable t = c.config.empty() ? ParamTable{} : load_config(c.config);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
    t.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return t;
}

void emit(const Json& j, const Common& c) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << j.dump(2) << '\n';
}

void emit_traces(const ExperimentReport& r, const Common& c) {
  if (c.csv_dir.empty()) return;
  for (const auto& t : r.traces) write_csv(t, c.csv_dir);
}

// A shared config file may carry keys for other commands; anything without a
// known prefix is an error.
void reject_foreign(const ParamTable& table, const std::string&) {
  for (const auto& [k, v] : table.values()) {
    if (k == "seed" || k == "suite.run") continue;
    const auto dot = k.find('.');
    const std::string pre = dot == std::string::npos ? k : k.substr(0, dot);
    if (pre == "norm" || pre == "solve") continue;
    try {
      kind_from_prefix(pre);
    } catch (const ConfigError&) {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
}

int run_norm(const ParamTable& table, const Common& c) {
  reject_foreign(table, "norm");
  ParamTable p;
  for (const auto& [k, v] : table.values())
    if (k.rfind("norm.", 0) == 0) p.set(k.substr(5), v);
  const std::string func = p.get_string("func", "gaussian");
  const RadialFunction f = parse_function(func, p, "");
  const int n = p.get_int("n", 3);
  HerzIndex idx;
  try {
    idx = HerzIndex::make(p.get_rat("s", 0), p.get_rat("q", 2), p.get_rat("r", 1));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config keys 'norm.s,q,r': ") + e.what());
  }
  const std::string variant = p.get_string("variant", "annulus");
  if (variant != "annulus" && variant != "ball") throw ConfigError("config key 'norm.variant': expected annulus or ball");
  const auto left = p.unused();
  if (!left.empty()) throw ConfigError("unknown config key 'norm." + left.front() + "'");
  NormValue v;
  if (variant == "ball") {
    const auto prof = annular_decompose(f, idx.q, n);
    v = herz_norm_ball(prof, idx.s.to_double(), idx.r);
  } else {
    v = herz_norm_of(f, idx, n);
  }
  const auto inc = check_inclusions(idx, n);
  Json j = {{"schema", 1},
            {"kind", "Norm"},
            {"function", describe(f)},
            {"n", n},
            {"index", {{"s", idx.s.str()}, {"q", idx.q.str()}, {"r", idx.r.str()}}},
            {"variant", variant},
            {"verdict", v.divergent ? "Divergent" : "Finite"},
            {"norm", to_json(v)},
            {"contains_test_functions", inc.contains_test_functions}};
  emit(j, c);
  return 0;
}

int run_solve(const ParamTable& table, const Common& c) {
  reject_foreign(table, "solve");
  ParamTable p;
  for (const auto& [k, v] : table.values())
    if (k.rfind("solve.", 0) == 0) p.set(k.substr(6), v);
  ProblemParams params;
  try {
    params = ProblemParams::make(p.get_int("n", 3), p.get_rat("alpha", 2), p.get_rat("gamma", 0),
                                 HerzIndex::make(p.get_rat("s", 0), p.get_rat("q", 3), p.get_rat("r", 1)));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config keys 'solve.n,alpha,gamma,s,q,r': ") + e.what());
  }
  const RadialFunction u0 = parse_function(p.get_string("func", "gaussian"), p, "u0");
  const double T = p.get_double("T", 0.1);
  const int max_iter = p.get_int("max_iter", 40);
  const double tol = p.get_double("tol", 1e-12);
  SolverOptions opt;
  opt.time_points = p.get_int("time_points", 16);
  opt.keep_iterates = false;
  const auto left = p.unused();
  if (!left.empty()) throw ConfigError("unknown config key 'solve." + left.front() + "'");
  const QuadratureSpec quad;
  const auto run = picard_solve(u0, params, T, quad, max_iter, tol, opt);
  Json hist = Json::array();
  CsvTrace tr{"solve_history", {"iteration", "difference"}, {}};
  for (std::size_t k = 0; k < run.differences.size(); ++k) tr.rows.push_back({k + 1, json_number(run.differences[k])});
  Json last = Json::array();
  if (!run.herz_history.empty())
    for (const auto& v : run.herz_history.back()) last.push_back(json_number(v.value));
  Json j = {{"schema", 1},
            {"kind", "Solve"},
            {"case", to_string(classify(params).kind)},
            {"u0", describe(u0)},
            {"T", T},
            {"outcome", to_string(run.outcome)},
            {"iterations", run.iterations},
            {"grading", run.grading},
            {"time_grid", run.time_grid},
            {"differences", run.differences},
            {"contraction_ratios", run.contraction_ratios},
            {"final_norms", last}};
  if (!run.note.empty()) j["note"] = run.note;
  emit(j, c);
  if (!c.csv_dir.empty()) write_csv(tr, c.csv_dir);
  return 0;  // non-contraction is a result, not a failure
}

int run_single(ExperimentKind kind, const ParamTable& table, const Common& c) {
  reject_foreign(table, prefix(kind));
  const auto cfg = ExperimentConfig::from_table(kind, table);
  const auto rep = run_experiment(cfg);
  emit(to_json(rep, !c.no_runtime), c);
  emit_traces(rep, c);
  return rep.pass ? 0 : 1;
}

int run_suite_cmd(const ParamTable& table, const Common& c) {
  const auto kinds = suite_kinds(table);
  const auto reps = run_suite(table, kinds);
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : reps) {
    arr.push_back(to_json(r, !c.no_runtime));
    all = all && r.pass;
    emit_traces(r, c);
    std::cerr << (r.pass ? "PASS " : "FAIL ") << to_string(r.kind) << " (" << r.runtime_ms << " ms)\n";
  }
  emit(Json{{"schema", 1}, {"kind", "Suite"}, {"pass", all}, {"reports", arr}}, c);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Herz-space numerical laboratory"};
  app.require_subcommand(1);
  Common common;

  struct Sub {
    std::string name;
    std::optional<ExperimentKind> kind;
    std::string help;
  };
  const std::vector<Sub> subs = {
      {"classify", ExperimentKind::Classify, "classify a parameter tuple, or sweep random tuples"},
      {"norm", std::nullopt, "Herz norm of a named function"},
      {"smoothing", ExperimentKind::SmoothingRate, "heat smoothing rates"},
      {"meyer", ExperimentKind::Meyer, "Duhamel boundedness with weak target"},
      {"embed", ExperimentKind::Embeddings, "embedding checks"},
      {"membership", ExperimentKind::Membership, "membership threshold sweeps"},
      {"continuity", ExperimentKind::Continuity, "continuity at t = 0 and small-time decay"},
      {"interp", ExperimentKind::Interpolation, "real interpolation ratio band and K-functional oracle"},
      {"density", ExperimentKind::DensityBound, "density lower bound at q = inf"},
      {"solve", std::nullopt, "Picard iteration for the mild solution"},
      {"unique", ExperimentKind::Uniqueness, "uniqueness probe"},
      {"suite", std::nullopt, "run the full battery"},
  };

  // shortcuts for the common parameters; they become <prefix>.<key> settings
  std::map<std::string, std::string> shortcut;
  std::vector<std::pair<std::string, CLI::App*>> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, common);
    apps.emplace_back(s.name, sub);
    if (s.name == "classify" || s.name == "solve") {
      for (const char* k : {"n", "alpha", "gamma", "s", "q", "r"})
        sub->add_option_function<std::string>(std::string("--") + k,
                                              [&shortcut, k](const std::string& v) { shortcut[k] = v; });
    }
    if (s.name == "norm") {
      for (const char* k : {"func", "n", "s", "q", "r", "variant"})
        sub->add_option_function<std::string>(std::string("--") + k,
                                              [&shortcut, k](const std::string& v) { shortcut[k] = v; });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (const auto& [name, sub] : apps) {
      if (!sub->parsed()) continue;
      ParamTable table = load_table(common);
      for (const auto& [k, v] : shortcut) table.set(name + "." + k, v);
      if (name == "classify" && !shortcut.empty() && !table.has("classify.mode")) table.set("classify.mode", "single");
      if (name == "norm") return run_norm(table, common);
      if (name == "solve") return run_solve(table, common);
      if (name == "suite") return run_suite_cmd(table, common);
      for (const auto& s : subs)
        if (s.name == name) return run_single(*s.kind, table, common);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
