#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ccce_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained correlated equilibria for finite games"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> form;
  std::optional<std::string> out_dir;

  app.add_option("command", command, "solve | sweep-alpha | acquire | nash")
      ->required()
      ->check(CLI::IsMember({"solve", "sweep-alpha", "acquire", "nash"}));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--form", form, "constraint form")
      ->check(CLI::IsMember({"constant", "conditional"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ccce::cli::kExitConfig;
  }

  ccce::cli::Overrides overrides;
  overrides.seed = seed;
  overrides.form = form;
  if (out_dir) overrides.output_dir = *out_dir;
  return ccce::cli::run_command(command, config_path, overrides, std::cout,
                                std::cerr);
}
