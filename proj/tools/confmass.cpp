#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "confmass/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Conformal deformation and mass checks for asymptotically flat and hyperbolic data"};
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string format;
  app.add_option("command", command, "af-mass | ah-mass | constraints | verify | validate")
      ->required()
      ->check(CLI::IsMember(confmass::command_names()));
  app.add_option("--config", config_path, "JSON configuration")->required();
  app.add_option("--out", out_path, "report path (default: stdout)");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ifstream in(config_path);
    if (!in) throw confmass::ConfigError("cannot read config file '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    confmass::RunConfig config = confmass::parse_config(text.str(), command);
    if (!format.empty()) config.format = format;

    const confmass::Report report = confmass::run(config);
    const std::string body = config.format == "csv" ? confmass::to_csv(report) : confmass::to_json(report).dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw confmass::UsageError("cannot write report to '" + out_path + "'");
      out << body;
    }
    std::cerr << report.passed() << " passed, " << report.failed() << " failed, " << report.nonconvergent()
              << " not converged\n";
    return confmass::exit_code(report);
  } catch (const confmass::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
