#pragma once

// Small helpers shared by the experiment sources.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "herz/exponents.hpp"
#include "herz/harness.hpp"
#include "herz/solver.hpp"

namespace herz::detail {

inline double tol_or(const ExperimentConfig& cfg, double def) { return cfg.tolerance > 0.0 ? cfg.tolerance : def; }

inline void measure(ExperimentReport& r, const std::string& name, Json value) {
  r.measured.emplace_back(name, std::move(value));
}

inline void target(ExperimentReport& r, const std::string& name, Json value) {
  r.target.emplace_back(name, std::move(value));
}

inline Json clause_trace(const HypothesisReport& h) {
  Json a = Json::array();
  for (const auto& c : h.clauses) {
    Json e = {{"clause", c.name}, {"holds", c.holds}};
    if (c.informational) e["informational"] = true;
    a.push_back(e);
  }
  Json j = {{"verdict", h.verdict}, {"via", h.via}, {"clauses", a}};
  if (!h.resolution.empty()) j["resolution"] = h.resolution;
  return j;
}

inline std::string rat(const ExtRat& x) { return x.str(); }

/// log-uniform points between lo and hi (inclusive)
inline std::vector<double> log_points(double lo, double hi, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i)
    t[i] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
  return t;
}

/// Splits "a;b;c" into items.
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline double band(const std::vector<double>& v) {
  double lo = kInf, hi = 0.0;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return lo > 0.0 ? hi / lo : kInf;
}

/// Least-squares slope with the first and last point dropped.
inline double trimmed_slope(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() < 4) return loglog_slope(t, y);
  std::vector<double> a(t.begin() + 1, t.end() - 1);
  std::vector<double> b(y.begin() + 1, y.end() - 1);
  return loglog_slope(a, b);
}

}  // namespace herz::detail
