#include <chrono>
#include <future>

#include "experiment_util.hpp"

namespace herz {

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  switch (cfg.kind) {
    case ExperimentKind::SmoothingRate: rep = run_smoothing_rate(cfg); break;
    case ExperimentKind::Meyer: rep = run_meyer(cfg); break;
    case ExperimentKind::Embeddings: rep = run_embeddings(cfg); break;
    case ExperimentKind::Membership: rep = run_membership(cfg); break;
    case ExperimentKind::Continuity: rep = run_continuity(cfg); break;
    case ExperimentKind::Interpolation: rep = run_interpolation(cfg); break;
    case ExperimentKind::DensityBound: rep = run_density_bound(cfg); break;
    case ExperimentKind::Uniqueness: rep = run_uniqueness(cfg); break;
    case ExperimentKind::Classify: rep = run_classify(cfg); break;
  }
  cfg.reject_unused();
  rep.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<ExperimentReport> run_suite(const ParamTable& table, const std::vector<ExperimentKind>& kinds) {
  // every key must belong to a known experiment or be global
  for (const auto& [key, v] : table.values()) {
    if (key == "seed" || key == "suite.run") continue;
    const auto dot = key.find('.');
    bool known = false;
    if (dot != std::string::npos) {
      try {
        kind_from_prefix(key.substr(0, dot));
        known = true;
      } catch (const ConfigError&) {
      }
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  std::vector<ExperimentConfig> cfgs;
  for (auto k : kinds) cfgs.push_back(ExperimentConfig::from_table(k, table));
  std::vector<std::future<ExperimentReport>> futures;
  for (const auto& c : cfgs) futures.push_back(std::async(std::launch::async, [&c] { return run_experiment(c); }));
  std::vector<ExperimentReport> out;
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

RadialFunction parse_function(const std::string& name, const ParamTable& params, const std::string& prefix) {
  auto key = [&](const std::string& k) { return prefix.empty() ? k : prefix + "." + k; };
  if (name == "gaussian") return Gaussian{params.get_double(key("width"), 1.0), params.get_double(key("amplitude"), 1.0)};
  if (name == "ball") return BallIndicator{params.get_double(key("radius"), 1.0)};
  if (name == "annulus") return AnnulusIndicator{params.get_int(key("j"), 0)};
  if (name == "powerlog")
    return PowerLogCutoff{params.get_double(key("decay"), 1.0), params.get_double(key("log_exp"), 0.0),
                          params.get_double(key("cutoff"), 0x1p-10)};
  if (name == "bump")
    return SmoothBump{params.get_double(key("inner"), 0.0), params.get_double(key("outer"), 1.0),
                      params.get_double(key("ramp"), 0.1), params.get_double(key("amplitude"), 1.0)};
  throw ConfigError("config key '" + key("func") + "': unknown function '" + name +
                    "' (gaussian, ball, annulus, powerlog, bump)");
}

}  // namespace herz
