#pragma once

// Configuration, suite dispatch and report emission behind the confmass
// command-line tool.

#include <optional>
#include <string>
#include <vector>

#include "confmass/ah_mass.hpp"
#include "confmass/families.hpp"
#include "json.hpp"

namespace confmass {

using json = nlohmann::json;

/// Malformed configuration. what() names the field path or the line and
/// column of a syntax error.
class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

struct ConformalConfig {
  std::string family;
  std::map<std::string, std::vector<double>> params;
  std::vector<double> beta{0.5};
};

struct ScheduleConfig {
  double start = 0.0;
  std::optional<double> ratio;
  std::optional<double> step;
  int count = 0;
};

struct SampleConfig {
  std::size_t count = 100;
  std::uint64_t seed = 12345;
  double min = 0.0;
  double max = 0.0;
};

struct Tolerances {
  double identity = 1e-8;
  double linearity = 1e-3;
  double momentum = 1e-5;
  double ah_linearity = 1e-3;
  double killing = 1e-10;
  double extrapolation = 1e-3;
  double theorem = 1e-6;
  double band = 1e-6;
};

struct RunConfig {
  std::string command;  // af-mass | ah-mass | constraints | verify | validate
  int dimension = 3;
  FamilySpec family;
  std::optional<FamilySpec> extrinsic;
  std::optional<ConformalConfig> conformal;
  std::vector<std::string> suites;
  int order = 24;
  int validation_order = 6;
  ScheduleConfig schedule;
  SampleConfig sample;
  std::optional<BoundarySpec> boundary;
  Tolerances tolerances;
  std::string format = "json";
};

/// Names accepted for "command" and for "suite".
const std::vector<std::string>& command_names();
const std::vector<std::string>& suite_names();

/// Parses and validates a configuration document, filling every default.
/// command_override, when non-empty, takes the place of a missing "command"
/// and must agree with a present one.
RunConfig parse_config(const std::string& text, const std::string& command_override = "");
/// The resolved configuration, defaults included.
json config_to_json(const RunConfig& config);

/// One check. series holds one entry per sample point, radius or component.
struct Record {
  std::string check;
  std::string anchor;  // suite id of the property checked, or "plumbing"
  json inputs = json::object();
  json values = json::object();
  std::vector<json> series;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool converged = true;
};

struct Report {
  std::string command;
  json environment = json::object();
  std::vector<Record> records;

  std::size_t passed() const;
  std::size_t failed() const;
  std::size_t nonconvergent() const;
};

json to_json(const Report& report);
Report report_from_json(const json& j);
/// Header plus one row per (record, series entry); records without a series
/// give one row.
std::string to_csv(const Report& report);

/// 0 when every record passes, 3 when a failing record did not converge,
/// 1 otherwise.
int exit_code(const Report& report);

Report run(const RunConfig& config);

/// Non-finite doubles become null so reports stay valid JSON.
json number(double v);

}  // namespace confmass
