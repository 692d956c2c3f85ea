#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "csv_io.hpp"

namespace {

struct Invocation {
  std::string config_file;
  std::vector<std::string> sets;
  std::string output_dir;
  std::string trace_dir;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("-c,--config", inv.config_file, "key=value config file");
  cmd->add_option("-s,--set", inv.sets, "override one key, key=value (repeatable)");
  cmd->add_option("-o,--output-dir", inv.output_dir, "directory for outputs (key output_dir)");
  cmd->add_flag("-q,--quiet", inv.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gravinv::cli;

  CLI::App app{"2-D gravity focusing inversion"};
  app.require_subcommand(1);
  Invocation inv;

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"forward", "predict the anomaly of a model file at the stations"},
      {"synth", "generate a noisy synthetic data set"},
      {"invert", "run the focusing inversion"},
      {"preprocess", "regional-residual separation then upward continuation"},
  };
  for (const auto& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, inv);
    if (std::string(e.name) == "invert") {
      cmd->add_option("--trace-dir", inv.trace_dir,
                      "directory for per-iteration L-curve/GCV traces (key trace_dir)");
    }
  }
  app.add_subcommand("defaults", "print every config key with its default value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  RunConfig config;
  if (name == "defaults") {
    std::cout << render_config(config);
    return kOk;
  }
  try {
    if (!inv.config_file.empty()) load_config_file(config, inv.config_file);
    for (const auto& s : inv.sets) apply_assignment(config, s);
    if (!inv.output_dir.empty()) config.output_dir = inv.output_dir;
    if (!inv.trace_dir.empty()) config.trace_dir = inv.trace_dir;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  std::ostream null_stream(nullptr);
  return run_command(name, config, inv.quiet ? null_stream : std::cout, std::cerr);
}
