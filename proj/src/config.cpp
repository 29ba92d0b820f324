#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "herz/harness.hpp"

namespace herz {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t == "inf" || t == "infinity") return kInf;
  // ratios like 1/3 are accepted too
  if (t.find('/') != std::string::npos) {
    try {
      return ExtRat::parse(t).to_double();
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': not a number: " + text);
    }
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("config key '" + key + "': not a number: " + text);
  return v;
}

}  // namespace

std::string ParamTable::get_string(const std::string& key, const std::string& def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  return it->second;
}

double ParamTable::get_double(const std::string& key, double def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  return parse_double(key, it->second);
}

int ParamTable::get_int(const std::string& key, int def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  std::string t = trim(it->second);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("config key '" + key + "': not an integer: " + it->second);
  return v;
}

ExtRat ParamTable::get_rat(const std::string& key, const ExtRat& def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  try {
    return ExtRat::parse(trim(it->second));
  } catch (const std::exception& e) {
    throw ConfigError("config key '" + key + "': not a rational: " + it->second);
  }
}

bool ParamTable::get_bool(const std::string& key, bool def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  std::string t = trim(it->second);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("config key '" + key + "': not a boolean: " + it->second);
}

std::vector<double> ParamTable::get_doubles(const std::string& key, const std::vector<double>& def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<ExtRat> ParamTable::get_rats(const std::string& key, const std::vector<ExtRat>& def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  used_.insert(key);
  std::vector<ExtRat> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(ExtRat::parse(trim(item)));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': not a rational: " + item);
    }
  }
  return out;
}

std::vector<std::string> ParamTable::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

Json ParamTable::to_json() const {
  Json j = Json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

ParamTable parse_config(std::istream& in) {
  ParamTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (t.has(key)) throw ConfigError("config key '" + key + "' given twice");
    t.set(key, value);
  }
  return t;
}

ParamTable load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SmoothingRate: return "SmoothingRate";
    case ExperimentKind::Meyer: return "Meyer";
    case ExperimentKind::Embeddings: return "Embeddings";
    case ExperimentKind::Membership: return "Membership";
    case ExperimentKind::Continuity: return "Continuity";
    case ExperimentKind::Interpolation: return "Interpolation";
    case ExperimentKind::DensityBound: return "DensityBound";
    case ExperimentKind::Uniqueness: return "Uniqueness";
    case ExperimentKind::Classify: return "Classify";
  }
  return "?";
}

std::string prefix(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SmoothingRate: return "smoothing";
    case ExperimentKind::Meyer: return "meyer";
    case ExperimentKind::Embeddings: return "embed";
    case ExperimentKind::Membership: return "membership";
    case ExperimentKind::Continuity: return "continuity";
    case ExperimentKind::Interpolation: return "interp";
    case ExperimentKind::DensityBound: return "density";
    case ExperimentKind::Uniqueness: return "unique";
    case ExperimentKind::Classify: return "classify";
  }
  return "?";
}

static const ExperimentKind kAllKinds[] = {
    ExperimentKind::Classify,      ExperimentKind::Membership,   ExperimentKind::Embeddings,
    ExperimentKind::Interpolation, ExperimentKind::DensityBound, ExperimentKind::Continuity,
    ExperimentKind::SmoothingRate, ExperimentKind::Meyer,        ExperimentKind::Uniqueness,
};

ExperimentKind kind_from_prefix(const std::string& name) {
  for (auto k : kAllKinds)
    if (prefix(k) == name || to_string(k) == name) return k;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_table(ExperimentKind kind, const ParamTable& table) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  const std::string pre = prefix(kind) + ".";
  for (const auto& [k, v] : table.values())
    if (k.rfind(pre, 0) == 0) cfg.params.set(k.substr(pre.size()), v);
  std::string seed_text = table.values().count("seed") ? table.values().at("seed") : "";
  if (cfg.params.has("seed")) seed_text = cfg.params.values().at("seed");
  if (!seed_text.empty()) {
    std::uint64_t s = 0;
    auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), s);
    if (ec != std::errc() || ptr != seed_text.data() + seed_text.size()) throw ConfigError("config key 'seed': not an integer");
    cfg.seed = s;
  }
  cfg.params.get_string("seed", "");  // consumed above
  cfg.tolerance = cfg.params.get_double("tolerance", 0.0);
  return cfg;
}

void ExperimentConfig::reject_unused() const {
  auto left = params.unused();
  if (!left.empty()) throw ConfigError("unknown config key '" + prefix(kind) + "." + left.front() + "'");
}

std::vector<ExperimentKind> suite_kinds(const ParamTable& table) {
  std::string list = table.get_string("suite.run", "");
  std::vector<ExperimentKind> out;
  if (list.empty()) {
    out.assign(std::begin(kAllKinds), std::end(kAllKinds));
    return out;
  }
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      try {
        out.push_back(kind_from_prefix(item));
      } catch (const ConfigError&) {
        throw ConfigError("config key 'suite.run': unknown experiment '" + item + "'");
      }
    }
  }
  return out;
}

}  // namespace herz
