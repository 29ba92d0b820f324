#include <sstream>

#include "doctest.h"
#include "herz/harness.hpp"

using namespace herz;

namespace {

ParamTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentReport run(ExperimentKind kind, const ParamTable& t) {
  return run_experiment(ExperimentConfig::from_table(kind, t));
}

}  // namespace

TEST_CASE("config parsing") {
  const auto t = parse("# header\nseed = 7\ninterp.theta = 1/2   # inline\n\nembed.profiles=12\n");
  CHECK(t.values().size() == 3);
  CHECK(t.get_int("seed", 0) == 7);
  CHECK(t.get_double("interp.theta", 0) == 0.5);
  CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("a=1\na=2\n"), ConfigError);
  CHECK_THROWS_AS(parse("=3\n"), ConfigError);
  CHECK_THROWS_AS(parse("x=abc\n").get_double("x", 0), ConfigError);
  CHECK(parse("x=inf\n").get_rat("x", 0).is_infinite());
}

TEST_CASE("prefixes round trip") {
  for (auto k : {ExperimentKind::SmoothingRate, ExperimentKind::Meyer, ExperimentKind::Embeddings,
                 ExperimentKind::Membership, ExperimentKind::Continuity, ExperimentKind::Interpolation,
                 ExperimentKind::DensityBound, ExperimentKind::Uniqueness, ExperimentKind::Classify})
    CHECK(kind_from_prefix(prefix(k)) == k);
  CHECK_THROWS_AS(kind_from_prefix("nope"), ConfigError);
}

TEST_CASE("unknown keys are rejected") {
  ParamTable t;
  t.set("density.widht", "0.1");
  CHECK_THROWS_AS(run(ExperimentKind::DensityBound, t), ConfigError);
  ParamTable u;
  u.set("bogus.key", "1");
  CHECK_THROWS_AS(run_suite(u, {ExperimentKind::DensityBound}), ConfigError);
}

TEST_CASE("interpolation rejects equal smoothness indices") {
  ParamTable t;
  t.set("interp.s0", "1");
  t.set("interp.s1", "1");
  CHECK_THROWS_AS(run(ExperimentKind::Interpolation, t), ConfigError);
}

TEST_CASE("reports are deterministic apart from runtime") {
  ParamTable t;
  t.set("seed", "11");
  const auto a = to_json(run(ExperimentKind::Interpolation, t), false).dump();
  const auto b = to_json(run(ExperimentKind::Interpolation, t), false).dump();
  CHECK(a == b);
  const auto j = to_json(run(ExperimentKind::Membership, ParamTable{}));
  CHECK(j["schema"] == 1);
  CHECK(j.contains("runtime_ms"));
  for (const char* k : {"kind", "anchor", "config", "measured", "target", "pass"}) CHECK(j.contains(k));
}

TEST_CASE("suite keeps config order") {
  ParamTable t;
  t.set("suite.run", "density,classify,membership");
  const auto kinds = suite_kinds(t);
  REQUIRE(kinds.size() == 3);
  const auto reps = run_suite(t, kinds);
  CHECK(reps[0].kind == ExperimentKind::DensityBound);
  CHECK(reps[1].kind == ExperimentKind::Classify);
  CHECK(reps[2].kind == ExperimentKind::Membership);
  for (const auto& r : reps) CHECK(r.pass);
}

TEST_CASE("non-finite numbers serialize as strings") {
  CHECK(json_number(kInf) == "inf");
  CHECK(json_number(1.5) == 1.5);
}
