#include "confmass/cli.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace confmass {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config field '" + path + "': " + message);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(join(path, it.key()), "unknown field");
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    if (out.empty()) fail(path, "expected at least one number");
  } else {
    out.push_back(as_number(j, path));
  }
  return out;
}

std::map<std::string, std::vector<double>> as_params(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of numbers");
  std::map<std::string, std::vector<double>> out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = as_numbers(it.value(), join(path, it.key()));
  return out;
}

// "name" or {"name": ..., "params": {...}}
FamilySpec as_family(const json& j, const std::string& path, int n, const std::vector<std::string>& names) {
  FamilySpec spec;
  spec.dimension = n;
  if (j.is_string()) {
    spec.name = j.get<std::string>();
  } else {
    only_keys(j, path, {"name", "params"});
    if (!j.contains("name")) fail(join(path, "name"), "missing");
    spec.name = as_string(j["name"], join(path, "name"));
    if (j.contains("params")) spec.params = as_params(j["params"], join(path, "params"));
  }
  if (std::find(names.begin(), names.end(), spec.name) == names.end()) fail(path, "unknown family '" + spec.name + "'");
  return spec;
}

// Builds the object once so parameter errors surface with the field path.
template <class Make>
void check_buildable(const std::string& path, Make make) {
  try {
    make();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

bool hyperbolic_family(const std::string& name) {
  return name == "hyperbolic" || name == "ah_conformal" || name == "ads_schwarzschild";
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json params_json(const std::map<std::string, std::vector<double>>& params) {
  json out = json::object();
  for (const auto& [k, v] : params) out[k] = v.size() == 1 ? json(v[0]) : json(v);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"af-mass", "ah-mass", "constraints", "verify", "validate"};
  return names;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma2.1", "lemma2.3", "corollary2.5", "lemma2.7",     "theorem2.8",
                                              "lemma3.4", "lemma3.5", "theorem3.6",   "killing-data", "asymptotics"};
  return names;
}

RunConfig parse_config(const std::string& text, const std::string& command_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": " + e.what());
  }
  only_keys(j, "", {"command", "dimension", "family", "extrinsic", "conformal", "suite", "quadrature", "schedule",
                    "sample", "boundary", "tolerances", "format"});
  RunConfig c;
  if (j.contains("command")) c.command = as_string(j["command"], "command");
  if (!command_override.empty()) {
    if (!c.command.empty() && c.command != command_override)
      fail("command", "'" + c.command + "' disagrees with the command line ('" + command_override + "')");
    c.command = command_override;
  }
  if (c.command.empty()) fail("command", "missing");
  const auto& cmds = command_names();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) fail("command", "unknown command '" + c.command + "'");

  if (j.contains("dimension")) {
    const long long n = as_integer(j["dimension"], "dimension");
    if (n < 3 || n > 16) fail("dimension", "must lie in [3, 16]");
    c.dimension = static_cast<int>(n);
  }
  const int n = c.dimension;
  if (!j.contains("family")) fail("family", "missing");
  c.family = as_family(j["family"], "family", n, metric_family_names());
  check_buildable("family", [&] { make_family(c.family); });
  const bool ah = hyperbolic_family(c.family.name);

  if (j.contains("extrinsic")) {
    if (ah) fail("extrinsic", "not defined for hyperbolic families");
    static const std::vector<std::string> extrinsic_names{"zero", "bowen_york"};
    c.extrinsic = as_family(j["extrinsic"], "extrinsic", n, extrinsic_names);
    check_buildable("extrinsic", [&] { make_extrinsic(*c.extrinsic); });
  }
  if (j.contains("conformal")) {
    const json& cj = j["conformal"];
    only_keys(cj, "conformal", {"family", "params", "beta"});
    ConformalConfig cc;
    if (!cj.contains("family")) fail("conformal.family", "missing");
    cc.family = as_string(cj["family"], "conformal.family");
    const auto& names = factor_family_names();
    if (std::find(names.begin(), names.end(), cc.family) == names.end())
      fail("conformal.family", "unknown factor family '" + cc.family + "'");
    if (cc.family == "ah_factor" && !ah) fail("conformal.family", "ah_factor needs a hyperbolic family");
    if (cc.family.rfind("af_", 0) == 0 && ah) fail("conformal.family", cc.family + " needs an asymptotically flat family");
    if (cj.contains("params")) cc.params = as_params(cj["params"], "conformal.params");
    check_buildable("conformal", [&] { make_factor(FamilySpec{cc.family, n, cc.params}); });
    if (cj.contains("beta")) cc.beta = as_numbers(cj["beta"], "conformal.beta");
    for (double b : cc.beta)
      if (!(b > 0.0 && b <= 1.0)) fail("conformal.beta", "values must lie in (0, 1]");
    c.conformal = cc;
  }
  if (j.contains("suite")) {
    const json& sj = j["suite"];
    if (sj.is_string()) {
      c.suites.push_back(sj.get<std::string>());
    } else if (sj.is_array() && !sj.empty()) {
      for (std::size_t i = 0; i < sj.size(); ++i) c.suites.push_back(as_string(sj[i], "suite[" + std::to_string(i) + "]"));
    } else {
      fail("suite", "expected a suite name or a non-empty list of names");
    }
    const auto& names = suite_names();
    for (const std::string& s : c.suites)
      if (std::find(names.begin(), names.end(), s) == names.end()) fail("suite", "unknown suite '" + s + "'");
  }
  if (c.command == "verify" && c.suites.empty()) fail("suite", "required by the verify command");

  c.order = n == 3 ? 24 : 12;
  c.validation_order = n == 3 ? 6 : 3;
  if (j.contains("quadrature")) {
    const json& q = j["quadrature"];
    only_keys(q, "quadrature", {"order", "validation_order"});
    if (q.contains("order")) c.order = static_cast<int>(as_integer(q["order"], "quadrature.order"));
    if (q.contains("validation_order"))
      c.validation_order = static_cast<int>(as_integer(q["validation_order"], "quadrature.validation_order"));
    if (c.order < 2 || c.order > 96) fail("quadrature.order", "must lie in [2, 96]");
    if (c.validation_order < 2 || c.validation_order > 96) fail("quadrature.validation_order", "must lie in [2, 96]");
  }

  if (ah) {
    c.schedule.start = 3.0;
    c.schedule.step = 0.5;
    c.schedule.count = 6;
  } else {
    c.schedule.start = 32.0;
    c.schedule.ratio = 2.0;
    c.schedule.count = 5;
  }
  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    only_keys(s, "schedule", {"start", "ratio", "step", "count"});
    if (s.contains("ratio") && s.contains("step")) fail("schedule", "give either ratio or step, not both");
    if (s.contains("start")) c.schedule.start = positive(s["start"], "schedule.start");
    if (s.contains("ratio")) {
      c.schedule.ratio = as_number(s["ratio"], "schedule.ratio");
      c.schedule.step.reset();
      if (!(*c.schedule.ratio > 1.0)) fail("schedule.ratio", "must exceed 1 so the schedule increases");
    }
    if (s.contains("step")) {
      c.schedule.step = as_number(s["step"], "schedule.step");
      c.schedule.ratio.reset();
      if (!(*c.schedule.step > 0.0)) fail("schedule.step", "must be positive so the schedule increases");
    }
    if (s.contains("count")) c.schedule.count = static_cast<int>(as_integer(s["count"], "schedule.count"));
    if (c.schedule.count < 4 || c.schedule.count > 64) fail("schedule.count", "must lie in [4, 64]");
  }

  c.sample.min = ah ? 0.5 : 2.0;
  c.sample.max = ah ? 5.0 : 50.0;
  if (j.contains("sample")) {
    const json& s = j["sample"];
    only_keys(s, "sample", {"count", "seed", "min", "max"});
    if (s.contains("count")) {
      const long long k = as_integer(s["count"], "sample.count");
      if (k < 1 || k > 100000) fail("sample.count", "must lie in [1, 100000]");
      c.sample.count = static_cast<std::size_t>(k);
    }
    if (s.contains("seed")) {
      const long long seed = as_integer(s["seed"], "sample.seed");
      if (seed < 0) fail("sample.seed", "must be non-negative");
      c.sample.seed = static_cast<std::uint64_t>(seed);
    }
    if (s.contains("min")) c.sample.min = positive(s["min"], "sample.min");
    if (s.contains("max")) c.sample.max = positive(s["max"], "sample.max");
  }
  if (!(c.sample.max >= c.sample.min)) fail("sample", "max must not be below min");

  if (j.contains("boundary")) {
    if (!ah) fail("boundary", "only used with hyperbolic families");
    const json& b = j["boundary"];
    only_keys(b, "boundary", {"radius", "yamabe", "orientation", "order"});
    BoundarySpec spec;
    if (!b.contains("radius")) fail("boundary.radius", "missing");
    spec.radius = positive(b["radius"], "boundary.radius");
    if (!b.contains("yamabe")) fail("boundary.yamabe", "missing; the Yamabe invariant must be supplied with a boundary");
    spec.yamabe = positive(b["yamabe"], "boundary.yamabe");
    if (b.contains("orientation")) {
      const std::string o = as_string(b["orientation"], "boundary.orientation");
      if (o == "outward") {
        spec.orientation = Orientation::outward;
      } else if (o == "inward") {
        spec.orientation = Orientation::inward;
      } else {
        fail("boundary.orientation", "expected 'outward' or 'inward'");
      }
    }
    if (b.contains("order")) {
      spec.order = static_cast<int>(as_integer(b["order"], "boundary.order"));
      if (spec.order < 2 || spec.order > 96) fail("boundary.order", "must lie in [2, 96]");
    }
    c.boundary = spec;
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, "tolerances",
              {"identity", "linearity", "momentum", "ah_linearity", "killing", "extrapolation", "theorem", "band"});
    Tolerances& tol = c.tolerances;
    std::pair<const char*, double*> fields[] = {
        {"identity", &tol.identity},         {"linearity", &tol.linearity}, {"momentum", &tol.momentum},
        {"ah_linearity", &tol.ah_linearity}, {"killing", &tol.killing},     {"extrapolation", &tol.extrapolation},
        {"theorem", &tol.theorem},           {"band", &tol.band}};
    for (auto& [key, target] : fields)
      if (t.contains(key)) *target = positive(t[key], std::string("tolerances.") + key);
  }
  if (j.contains("format")) {
    c.format = as_string(j["format"], "format");
    if (c.format != "json" && c.format != "csv") fail("format", "expected 'json' or 'csv'");
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["dimension"] = c.dimension;
  j["family"] = {{"name", c.family.name}, {"params", params_json(c.family.params)}};
  if (c.extrinsic) j["extrinsic"] = {{"name", c.extrinsic->name}, {"params", params_json(c.extrinsic->params)}};
  if (c.conformal)
    j["conformal"] = {{"family", c.conformal->family},
                      {"params", params_json(c.conformal->params)},
                      {"beta", c.conformal->beta}};
  if (!c.suites.empty()) j["suite"] = c.suites;
  j["quadrature"] = {{"order", c.order}, {"validation_order", c.validation_order}};
  json s = {{"start", c.schedule.start}, {"count", c.schedule.count}};
  if (c.schedule.ratio) s["ratio"] = *c.schedule.ratio;
  if (c.schedule.step) s["step"] = *c.schedule.step;
  j["schedule"] = s;
  j["sample"] = {{"count", c.sample.count}, {"seed", c.sample.seed}, {"min", c.sample.min}, {"max", c.sample.max}};
  if (c.boundary)
    j["boundary"] = {{"radius", c.boundary->radius},
                     {"yamabe", c.boundary->yamabe},
                     {"orientation", c.boundary->orientation == Orientation::outward ? "outward" : "inward"},
                     {"order", c.boundary->order}};
  const Tolerances& t = c.tolerances;
  j["tolerances"] = {{"identity", t.identity},   {"linearity", t.linearity},
                     {"momentum", t.momentum},   {"ah_linearity", t.ah_linearity},
                     {"killing", t.killing},     {"extrapolation", t.extrapolation},
                     {"theorem", t.theorem},     {"band", t.band}};
  j["format"] = c.format;
  return j;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::size_t Report::passed() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const Record& r) { return r.pass; }));
}

std::size_t Report::failed() const { return records.size() - passed(); }

std::size_t Report::nonconvergent() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.converged; }));
}

json to_json(const Report& report) {
  json records = json::array();
  for (const Record& r : report.records) {
    records.push_back({{"check", r.check},
                       {"anchor", r.anchor},
                       {"inputs", r.inputs},
                       {"values", r.values},
                       {"series", r.series},
                       {"residual", number(r.residual)},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass},
                       {"converged", r.converged}});
  }
  return {{"command", report.command},
          {"environment", report.environment},
          {"records", records},
          {"summary",
           {{"total", report.records.size()},
            {"passed", report.passed()},
            {"failed", report.failed()},
            {"nonconvergent", report.nonconvergent()}}}};
}

Report report_from_json(const json& j) {
  Report report;
  report.command = j.at("command").get<std::string>();
  report.environment = j.at("environment");
  for (const json& r : j.at("records")) {
    Record rec;
    rec.check = r.at("check").get<std::string>();
    rec.anchor = r.at("anchor").get<std::string>();
    rec.inputs = r.at("inputs");
    rec.values = r.at("values");
    rec.series = r.at("series").get<std::vector<json>>();
    rec.residual = r.at("residual").is_null() ? std::nan("") : r.at("residual").get<double>();
    rec.tolerance = r.at("tolerance").get<double>();
    rec.pass = r.at("pass").get<bool>();
    rec.converged = r.at("converged").get<bool>();
    report.records.push_back(std::move(rec));
  }
  return report;
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "check,anchor,inputs,entry,data,residual,tolerance,pass\n";
  for (const Record& r : report.records) {
    auto row = [&](const std::string& entry, const json& data) {
      out << csv_field(r.check) << ',' << csv_field(r.anchor) << ',' << csv_field(r.inputs.dump()) << ','
          << entry << ',' << csv_field(data.dump()) << ',' << number(r.residual).dump() << ','
          << json(r.tolerance).dump() << ',' << (r.pass ? "true" : "false") << '\n';
    };
    if (r.series.empty()) {
      row("", r.values);
    } else {
      for (std::size_t k = 0; k < r.series.size(); ++k) row(std::to_string(k), r.series[k]);
    }
  }
  return out.str();
}

int exit_code(const Report& report) {
  bool failed = false;
  bool diverged = false;
  for (const Record& r : report.records) {
    if (r.pass) continue;
    failed = true;
    diverged = diverged || !r.converged;
  }
  if (diverged) return 3;
  return failed ? 1 : 0;
}

}  // namespace confmass
