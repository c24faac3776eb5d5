#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgaudit/cli.hpp"
#include "sgaudit/errors.hpp"
#include "sgaudit/matrix_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"semigroup approximation audit workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool svg = false;
  bool strict = false;
  std::uint64_t seed = 12345;

  static const std::map<std::string, std::string> descriptions{
      {"poisson", "Poisson identities and tail-claim audits over (n, delta) grids"},
      {"defect", "Chernoff defect and bound audits over an operator corpus"},
      {"trotter", "Trotter product sweep and rate fit"},
      {"euler", "Euler approximation sweep and rate fit"},
      {"resolvent", "resolvent defect across steps with route cross-check"},
      {"numrange", "numerical range boundary export and classification"},
      {"fit", "power-law fit of an external CSV"},
      {"probe", "scalar unitary probe audits"},
  };
  for (const auto& name : sgaudit::command_names()) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--svg", svg, "also write SVG plots");
    sub->add_flag("--strict", strict, "exit 1 on asserted-bound violations");
    sub->add_option("--seed", seed, "base seed for generated operators and vectors");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage_error"}, {"message", e.what()}}.dump()
              << "\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(sgaudit::read_file(config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw sgaudit::ConfigError("config " + config_path + ": " + e.what());
    }
    sgaudit::CliOptions opt;
    opt.out_dir = out_dir;
    opt.svg = svg;
    opt.strict = strict;
    opt.seed = seed;
    const sgaudit::CliResult res = sgaudit::run_command(command, config, opt);
    for (const auto& a : res.artifacts) std::cout << "wrote " << a << "\n";
    if (res.report.contains("strict_violations"))
      std::cout << "asserted-bound violations: "
                << res.report["strict_violations"].get<long>() << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << sgaudit::error_json(e).dump() << "\n";
    return 2;
  }
}
