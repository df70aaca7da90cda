#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoi/cli/commands.hpp"
#include "aoi/cli/config.hpp"
#include "aoi/version.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::vector<std::string> sets;
  std::string seed;
  std::vector<std::string> strategies;
  std::string output;
  std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "INI experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--set", f.sets, "Override a config field, section.key=value (repeatable)");
  cmd->add_option("--seed", f.seed, "Base seed (overrides run.seed)");
  cmd->add_option("--strategy", f.strategies,
                  "NPNB, NPOB, Preemption or ZeroWaiting (repeatable)");
  cmd->add_option("--output", f.output, "Write output to this file");
  cmd->add_option("--format", f.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average age-of-information penalty under finite blocklength"};
  app.set_version_flag("--version", std::string("aoi-penalty-lab ") + aoi::kVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  struct Entry {
    aoi::cli::Command cmd;
    CLI::App* app;
  };
  const std::vector<Entry> entries{
      {aoi::cli::Command::Eval, app.add_subcommand("eval", "Closed-form average penalty report")},
      {aoi::cli::Command::Simulate,
       app.add_subcommand("simulate", "Monte Carlo estimate next to the closed form")},
      {aoi::cli::Command::Sweep, app.add_subcommand("sweep", "CSV over a coding-rate, lambda or alpha grid")},
      {aoi::cli::Command::Optimize, app.add_subcommand("optimize", "Blocklength search")},
  };
  for (const auto& e : entries) add_common(e.app, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aoi::cli::kExitConfig;
  }

  try {
    // precedence: defaults < --config < --set < dedicated flags
    aoi::cli::RawConfig raw;
    if (!flags.config.empty()) raw = aoi::cli::read_config_file(flags.config);
    for (const auto& s : flags.sets) aoi::cli::apply_override(raw, s);
    if (!flags.seed.empty()) aoi::cli::apply_override(raw, "run.seed=" + flags.seed);
    if (!flags.strategies.empty()) {
      std::string joined;
      for (const auto& s : flags.strategies) joined += (joined.empty() ? "" : ",") + s;
      aoi::cli::apply_override(raw, "run.strategies=" + joined);
    }
    if (!flags.output.empty()) aoi::cli::apply_override(raw, "output.path=" + flags.output);
    if (!flags.format.empty()) aoi::cli::apply_override(raw, "output.format=" + flags.format);

    const auto cfg = aoi::cli::resolve(raw);
    for (const auto& e : entries) {
      if (e.app->parsed()) return aoi::cli::run_command(e.cmd, cfg, std::cout, std::cerr);
    }
  } catch (const aoi::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return aoi::cli::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return aoi::cli::kExitConfig;
  }
  return aoi::cli::kExitConfig;
}
