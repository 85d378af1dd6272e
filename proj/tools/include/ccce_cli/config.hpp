#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccce/ccce_solver.hpp"
#include "ccce/game.hpp"
#include "ccce/montecarlo.hpp"
#include "ccce/vertiport.hpp"

namespace ccce::cli {

// Rejected configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An explicit finite game, used instead of the vertiport scenario.
struct GameSpec {
  std::vector<int> actions;
  std::vector<std::vector<double>> costs;  // per agent, in profile order
};

struct RunConfig {
  vertiport::Scenario scenario;
  std::optional<GameSpec> game;
  std::optional<std::vector<double>> weights;

  std::optional<double> alpha;
  ConstraintForm form = ConstraintForm::kConstantMargin;
  std::optional<std::vector<double>> sigmas;

  montecarlo::TrialConfig experiment;
  std::optional<double> c_dev;

  std::filesystem::path output_dir;

  std::uint64_t seed() const { return scenario.seed; }
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> form;
  std::optional<std::filesystem::path> output_dir;
};

RunConfig parse_config(const std::string& text, const Overrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const Overrides& overrides = {});

}  // namespace ccce::cli
