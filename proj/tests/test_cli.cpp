#include <cmath>

#include "confmass/cli.hpp"
#include "doctest.h"

using namespace confmass;

namespace {

std::string error_of(const std::string& text, const std::string& command = "") {
  try {
    parse_config(text, command);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const Record& find(const Report& r, const std::string& check) {
  for (const Record& rec : r.records)
    if (rec.check == check) return rec;
  FAIL("missing record " << check);
  return r.records.front();
}

}  // namespace

TEST_CASE("config errors name the field or the position") {
  CHECK(contains(error_of(R"({"command": "verify", "family": "flat", "suite": "lemma2.1", "colour": 1})"), "'colour'"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat", "schedule": {"start": 8, "rate": 2}})"),
                 "schedule.rate"));
  const std::string syntax = error_of("{\n  \"command\": \"af-mass\",\n  \"family\": flat\n}");
  CHECK(contains(syntax, "line 3"));
  CHECK(contains(syntax, "column"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat",
                             "conformal": {"family": "af_factor", "params": {"a": 0.2, "tau": 1}, "beta": [0.5, 1.5]}})"),
                 "conformal.beta"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat", "schedule": {"ratio": 0.5}})"), "schedule.ratio"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat", "schedule": {"step": -1}})"), "schedule.step"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat", "schedule": {"count": 3}})"), "schedule.count"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat", "tolerances": {"identity": 0}})"),
                 "tolerances.identity"));
  CHECK(contains(error_of(R"({"command": "verify", "family": "flat"})"), "suite"));
  CHECK(contains(error_of(R"({"command": "verify", "family": "flat", "suite": "lemma9"})"), "lemma9"));
  CHECK(contains(error_of(R"({"command": "ah-mass", "family": "hyperbolic", "boundary": {"radius": 1}})"),
                 "boundary.yamabe"));
  CHECK(contains(error_of(R"({"command": "ah-mass", "family": "hyperbolic"})", "af-mass"), "command"));
  CHECK(contains(error_of(R"({"family": "flat"})"), "command"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "schwarzschild_isotropic"})"), "family"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": {"name": "flat", "params": {"m": 1}}})"), "family"));
  CHECK(contains(error_of(R"({"command": "af-mass", "family": "flat", "conformal": {"family": "ah_factor"}})"),
                 "conformal.family"));
  CHECK(error_of(R"({"command": "af-mass", "family": "flat"})").empty());
}

TEST_CASE("defaults are filled and echoed") {
  const RunConfig af = parse_config(R"({"family": {"name": "schwarzschild_isotropic", "params": {"m": 1}}})", "af-mass");
  CHECK(af.command == "af-mass");
  CHECK(af.schedule.start == 32.0);
  CHECK(af.schedule.ratio.value() == 2.0);
  CHECK(af.schedule.count == 5);
  CHECK(af.order == 24);
  const RunConfig ah = parse_config(R"({"command": "ah-mass", "family": "hyperbolic", "dimension": 4})");
  CHECK(ah.schedule.start == 3.0);
  CHECK(ah.schedule.step.value() == 0.5);
  CHECK(ah.schedule.count == 6);
  CHECK(ah.order == 12);
  const json env = config_to_json(ah);
  CHECK(env["schedule"]["step"] == 0.5);
  CHECK(env["quadrature"]["order"] == 12);
  CHECK(env["tolerances"]["identity"] == 1e-8);
  // The echoed configuration parses back to itself.
  CHECK(config_to_json(parse_config(env.dump())) == env);
}

TEST_CASE("report serialization round-trips") {
  Report r;
  r.command = "verify";
  r.environment = {{"dimension", 3}};
  Record a;
  a.check = "mu";
  a.anchor = "lemma2.3";
  a.inputs = {{"beta", 0.5}};
  a.values = {{"max", 1e-12}};
  a.series = {json{{"x", {1.0, 2.0, 3.0}}, {"e", 0.1}}, json{{"x", {0.5, 0.0, 0.0}}, {"e", 0.2}}};
  a.residual = 1e-12;
  a.tolerance = 1e-8;
  Record b;
  b.check = "E";
  b.anchor = "plumbing";
  b.residual = std::nan("");
  b.pass = false;
  b.converged = false;
  r.records = {a, b};
  const json j = to_json(r);
  CHECK(j["records"][1]["residual"].is_null());
  CHECK(j["summary"]["failed"] == 1);
  const Report back = report_from_json(json::parse(j.dump()));
  CHECK(to_json(back) == j);

  const std::string csv = to_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header, two series rows, one bare record
  CHECK(contains(csv, "\"{\"\"beta\"\":0.5}\""));
}

TEST_CASE("exit codes") {
  Report r;
  CHECK(exit_code(r) == 0);
  Record ok;
  r.records.push_back(ok);
  CHECK(exit_code(r) == 0);
  Record failed;
  failed.pass = false;
  r.records.push_back(failed);
  CHECK(exit_code(r) == 1);
  Record diverged;
  diverged.pass = false;
  diverged.converged = false;
  r.records.push_back(diverged);
  CHECK(exit_code(r) == 3);
}

TEST_CASE("verify lemma2.1 on conformally_flat") {
  const Report r = run(parse_config(R"({
    "command": "verify", "suite": "lemma2.1",
    "family": {"name": "conformally_flat", "params": {"a": 0.3, "tau": 1}},
    "conformal": {"family": "af_factor", "params": {"a": 0.2, "tau": 1}, "beta": 0.5}})"));
  REQUIRE(r.records.size() == 3);
  for (const Record& rec : r.records) {
    CHECK(rec.anchor == "lemma2.1");
    CHECK(rec.residual <= 1e-8);
    CHECK(rec.series.size() == 100);
  }
  CHECK(exit_code(r) == 0);
}

TEST_CASE("af-mass on Schwarzschild") {
  const Report r = run(parse_config(R"({"family": {"name": "schwarzschild_isotropic", "params": {"m": 1}}})", "af-mass"));
  const Record& e = find(r, "E");
  CHECK(std::abs(e.values["E"].get<double>() - 1.0) <= 1e-4);
  CHECK(e.series.size() == 5);
  for (const json& p : find(r, "P").values["P"]) CHECK(std::abs(p.get<double>()) <= 1e-12);
  CHECK(exit_code(r) == 0);
}

TEST_CASE("verify lemma3.5 on the hyperbolic background") {
  const Report r = run(parse_config(R"({
    "command": "verify", "suite": "lemma3.5", "family": "hyperbolic",
    "conformal": {"family": "ah_factor", "params": {"a": 0.1, "tau": 3}, "beta": 0.5}})"));
  const Record& rec = find(r, "ah_linearity");
  CHECK(rec.residual <= 1e-4);
  CHECK(exit_code(r) == 0);
}

TEST_CASE("negative control: ah_conformal with tau below n/2 fails validation") {
  const Report r = run(parse_config(R"({"command": "validate",
    "family": {"name": "ah_conformal", "params": {"a": 0.1, "tau": 1}}})"));
  CHECK(exit_code(r) != 0);
  CHECK_FALSE(find(r, "decay.summary").pass);
}

TEST_CASE("suites must match the end and carry a factor") {
  CHECK_THROWS_AS(run(parse_config(R"({"command": "verify", "suite": "lemma3.5", "family": "flat",
    "conformal": {"family": "af_factor", "params": {"a": 0.1, "tau": 1}}})")), ConfigError);
  CHECK_THROWS_AS(run(parse_config(R"({"command": "verify", "suite": "lemma2.1", "family": "flat"})")), ConfigError);
  CHECK_THROWS_AS(run(parse_config(R"({"command": "ah-mass", "family": "flat"})")), ConfigError);
}

TEST_CASE("record order follows suite declaration and output is deterministic") {
  const std::string text = R"({
    "command": "verify", "suite": ["killing-data", "lemma2.3", "lemma2.1"], "family": "hyperbolic",
    "sample": {"count": 20},
    "conformal": {"family": "ah_factor", "params": {"a": 0.1, "tau": 3}, "beta": [0.25, 0.5]}})";
  const Report r = run(parse_config(text));
  std::vector<std::string> anchors;
  for (const Record& rec : r.records)
    if (anchors.empty() || anchors.back() != rec.anchor) anchors.push_back(rec.anchor);
  CHECK(anchors == std::vector<std::string>{"killing-data", "lemma2.3", "lemma2.1"});
  CHECK(r.records.size() == 3 + 2 * 2 + 2 * 3);
  CHECK(exit_code(r) == 0);
  CHECK(to_json(r).dump() == to_json(run(parse_config(text))).dump());
}
