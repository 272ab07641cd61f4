// Command-line front end for the sum-frequency simulation library.
//
//   sfg steady | stability-map | spectrum | simulate --mode tw|cavity | reproduce figN
//
// Settings come from defaults, then the figure preset (reproduce), then an
// optional --config file, then individual flags.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kUnstable = 2, kDivergence = 3, kFailure = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sfg::ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sfg;
  CLI::App app{"Quantum dynamics of intracavity and travelling-wave sum frequency generation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("-c,--config", config_path, "key=value config file ('#' comments)");
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the resolved config and exit");

  // One flag per config key; values go through the same validation as files.
  std::map<std::string, std::string> flag_values;
  for (const auto& key : io::config_keys()) {
    const std::string name = key.name;
    if (name == "command" || name == "figure" || name == "mode") continue;
    app.add_option("--" + name, flag_values[name], key.help);
  }

  auto* steady = app.add_subcommand("steady", "classical steady state, eigenvalues and threshold");
  auto* smap = app.add_subcommand("stability-map", "stability boundary over gamma3/gamma");
  auto* spectrum = app.add_subcommand("spectrum", "linearized output spectra (exit 2 when unstable)");
  auto* simulate = app.add_subcommand("simulate", "positive-P trajectory ensemble");
  std::string mode;
  simulate->add_option("--mode", mode, "tw (travelling wave) or cavity")->check(CLI::IsMember({"tw", "cavity"}));
  auto* reproduce = app.add_subcommand("reproduce", "regenerate a figure: fig1..fig8 or stability");
  std::string figure;
  reproduce->add_option("figure", figure, "figure id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  io::RunConfig cfg;
  try {
    if (*reproduce) cfg = io::preset_config(figure, 0);
    if (!config_path.empty()) cfg = io::parse_config(read_file(config_path), cfg);
    for (const auto& [name, value] : flag_values)
      if (app.count("--" + name) > 0) io::apply_setting(cfg, name, value, 0);
    if (*steady) cfg.command = io::Command::steady;
    if (*smap) cfg.command = io::Command::stability_map;
    if (*spectrum) cfg.command = io::Command::spectrum;
    if (*simulate) {
      cfg.command = io::Command::simulate;
      if (!mode.empty()) io::apply_setting(cfg, "mode", mode, 0);
    }
    if (*reproduce) {
      cfg.command = io::Command::reproduce;
      cfg.figure = figure;
    }
    io::validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  if (print_config) {
    std::cout << io::render(cfg);
    return kOk;
  }

  try {
    cli::run(cfg, std::cout);
  } catch (const UnstableOperatingPoint& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kUnstable;
  } catch (const EnsembleQualityError& e) {
    std::cerr << "ensemble rejected: " << e.what() << '\n';
    return kDivergence;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid request: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
