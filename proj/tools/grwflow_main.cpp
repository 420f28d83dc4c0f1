#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grw/commands.hpp"
#include "grw/errors.hpp"

namespace {

std::vector<long> parse_ladder(const std::string& text) {
  std::vector<long> levels;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    levels.push_back(std::stol(item));
  }
  return levels;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prescribed mean curvature flow lab for space-like graphs"};
  app.require_subcommand(1);

  std::string config_path, report_dir, checkpoint_path;
  std::string ladder_text = "32,64,128";

  CLI::App* run = app.add_subcommand("run", "integrate a flow described by a config file");
  run->add_option("config", config_path, "path to the run configuration")->required();

  CLI::App* ident = app.add_subcommand(
      "check-identities", "verify the geometric identities on a refinement ladder");
  ident->add_option("config", config_path, "path to the run configuration")->required();
  ident->add_option("--ladder", ladder_text, "comma-separated grid sizes");

  CLI::App* geom = app.add_subcommand(
      "check-geometry", "verify snapshot invariants and the inequality suite");
  geom->add_option("config", config_path, "path to the run configuration")->required();

  CLI::App* report = app.add_subcommand("report", "summarize a finished run directory");
  report->add_option("dir", report_dir, "output directory of a run")->required();

  CLI::App* restart = app.add_subcommand("restart", "resume a run from a checkpoint");
  restart->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return grw::cmd_run(config_path);
  if (geom->parsed()) return grw::cmd_check_geometry(config_path);
  if (report->parsed()) return grw::cmd_report(report_dir);
  if (restart->parsed()) return grw::cmd_restart(checkpoint_path);
  try {
    return grw::cmd_check_identities(config_path, parse_ladder(ladder_text));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
