#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "polyharm/version.hpp"

using namespace polyharm;
using namespace polyharm::tool;

namespace {

int fail(const std::string& kind, int code, const std::string& msg) {
  std::cerr << error_record(kind, code, msg) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyharmonic map tension fields, reductions and energies"};
  app.set_version_flag("--version", std::string("polyharm ") + kVersion);
  app.require_subcommand(1);

  std::string config_path, out_path;
  int workers = 0;
  bool timing = false;
  std::vector<std::string> commands = command_names();
  commands.push_back("validate");
  commands.push_back("echo-config");
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name, name == "validate"      ? "Static checks of a config"
                                         : name == "echo-config" ? "Print the canonical form of a config"
                                                                 : "Run the " + name + " experiment");
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Artifact path (default: config output, else stdout)");
    sub->add_option("--workers", workers, "Worker threads (0: POLYHARM_WORKERS or hardware)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--timing", timing, "Print wall time to stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig c = load_config(config_path);
    Artifact a;
    const auto t0 = std::chrono::steady_clock::now();
    if (command == "echo-config") {
      std::cout << to_json(c).dump(2) << "\n";
      return 0;
    }
    if (command == "validate") {
      a = validation_artifact(c);
    } else {
      if (c.command.empty()) c.command = command;
      if (c.command != command)
        throw ConfigError("config is for command '" + c.command + "', invoked as '" + command + "'");
      a = run(c, workers);
    }
    const std::string path = !out_path.empty() ? out_path : c.output;
    if (path.empty() || path == "-") {
      write_artifact(std::cout, a);
    } else {
      std::ofstream os(path, std::ios::binary);
      if (!os) throw ConfigError("cannot write artifact to " + path);
      write_artifact(os, a);
    }
    if (timing)
      std::cerr << "wall_time_s: "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "\n";
    return 0;
  } catch (const Error& e) {
    return fail(to_string(e.kind()), exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", 1, e.what());
  }
}
