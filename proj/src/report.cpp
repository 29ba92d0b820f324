#include <cmath>
#include <fstream>
#include <stdexcept>

#include "herz/harness.hpp"

namespace herz {

namespace {

Json num(double x) { return json_number(x); }

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

// JSON has no infinity; keep it readable instead of null.
Json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

Json to_json(const NormValue& v) {
  Json j = Json::object();
  j["value"] = num(v.value);
  j["lower"] = num(v.lower);
  j["upper"] = num(v.upper);
  j["divergent"] = v.divergent;
  j["heuristic"] = v.heuristic;
  if (v.divergent) j["growth"] = num(v.growth);
  j["window"] = Json::array({num(v.window_lo), num(v.window_hi)});
  j["window_kind"] = v.window_kind;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json to_json(const ExperimentReport& r, bool include_runtime) {
  Json j = Json::object();
  j["schema"] = 1;
  j["kind"] = to_string(r.kind);
  j["anchor"] = r.anchor;
  j["config"] = r.config;
  Json measured = Json::array();
  for (const auto& [name, value] : r.measured) measured.push_back(Json{{"name", name}, {"value", value}});
  j["measured"] = measured;
  Json target = Json::array();
  for (const auto& [name, value] : r.target) target.push_back(Json{{"name", name}, {"value", value}});
  j["target"] = target;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  if (include_runtime) j["runtime_ms"] = r.runtime_ms;
  return j;
}

void write_csv(const CsvTrace& trace, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto path = dir / (trace.name + ".csv");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < trace.columns.size(); ++i) out << (i ? "," : "") << trace.columns[i];
  out << '\n';
  for (const auto& row : trace.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

}  // namespace herz
