#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "herz/ext_rat.hpp"
#include "herz/norms.hpp"

namespace herz {

using Json = nlohmann::ordered_json;

/// Bad configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value table that remembers which keys were read.
class ParamTable {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  ExtRat get_rat(const std::string& key, const ExtRat& def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def) const;
  std::vector<ExtRat> get_rats(const std::string& key, const std::vector<ExtRat>& def) const;

  /// Keys present but never read.
  [[nodiscard]] std::vector<std::string> unused() const;
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }
  [[nodiscard]] Json to_json() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

/// Parses key=value lines with # comments. Throws ConfigError on malformed lines.
ParamTable parse_config(std::istream& in);
ParamTable load_config(const std::filesystem::path& path);

enum class ExperimentKind {
  SmoothingRate,
  Meyer,
  Embeddings,
  Membership,
  Continuity,
  Interpolation,
  DensityBound,
  Uniqueness,
  Classify,
};

std::string to_string(ExperimentKind k);
/// Short name used for subcommands and config prefixes ("smoothing", "meyer", ...).
std::string prefix(ExperimentKind k);
ExperimentKind kind_from_prefix(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Classify;
  ParamTable params;  // keys without the kind prefix
  double tolerance = 0.0;
  std::uint64_t seed = 0;

  /// Keys "<prefix>.<key>" of the table, plus the global seed.
  static ExperimentConfig from_table(ExperimentKind kind, const ParamTable& table);
  /// Throws ConfigError naming the first unknown key.
  void reject_unused() const;
};

struct CsvTrace {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::Classify;
  std::string anchor;
  Json config = Json::object();
  std::vector<std::pair<std::string, Json>> measured;
  std::vector<std::pair<std::string, Json>> target;
  bool pass = false;
  long runtime_ms = 0;
  std::string note;
  std::vector<CsvTrace> traces;
};

/// {schema, kind, anchor, config, measured[], target[], pass, runtime_ms}
Json to_json(const ExperimentReport& r, bool include_runtime = true);
Json to_json(const NormValue& v);
/// Numbers as JSON; infinities and NaN become strings.
Json json_number(double x);
void write_csv(const CsvTrace& trace, const std::filesystem::path& dir);

ExperimentReport run_smoothing_rate(const ExperimentConfig& cfg);
ExperimentReport run_meyer(const ExperimentConfig& cfg);
ExperimentReport run_embeddings(const ExperimentConfig& cfg);
ExperimentReport run_membership(const ExperimentConfig& cfg);
ExperimentReport run_continuity(const ExperimentConfig& cfg);
ExperimentReport run_interpolation(const ExperimentConfig& cfg);
ExperimentReport run_density_bound(const ExperimentConfig& cfg);
ExperimentReport run_uniqueness(const ExperimentConfig& cfg);
ExperimentReport run_classify(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind, checks for unknown keys and fills runtime_ms.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Kinds listed by "suite.run" (all kinds when absent), in that order.
std::vector<ExperimentKind> suite_kinds(const ParamTable& table);

/// Reports in the order of `kinds`; experiments run in parallel.
std::vector<ExperimentReport> run_suite(const ParamTable& table, const std::vector<ExperimentKind>& kinds);

/// K(t, f) by exhaustive whole-annulus assignment (2^m) and a Pareto sweep
/// over a 21-point fractional split per annulus. At most 8 nonzero annuli.
double k_functional_brute_force(const AnnularProfile& profile, const InterpolationCouple& couple, double t);

/// Parses a function name for the CLI: gaussian, ball, annulus, powerlog, bump.
RadialFunction parse_function(const std::string& name, const ParamTable& params, const std::string& prefix);

}  // namespace herz
