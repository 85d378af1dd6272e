#include "ccce_cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "ccce/errors.hpp"

namespace ccce::cli {

namespace {

using nlohmann::json;

std::string join(std::string_view block, std::string_view key) {
  return std::string(block) + "." + std::string(key);
}

void check_keys(const json& obj, std::string_view block,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw ConfigError("'" + std::string(block) + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + join(block, key) + "'");
  }
}

const json* find(const json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, std::string_view block,
                    std::string_view key) {
  const json* v = find(obj, key);
  if (!v) throw ConfigError("missing required key '" + join(block, key) + "'");
  return *v;
}

double as_double(const json& v, std::string_view name) {
  if (!v.is_number()) throw ConfigError("'" + std::string(name) + "' must be a number");
  return v.get<double>();
}

long long as_int(const json& v, std::string_view name) {
  if (!v.is_number_integer()) {
    throw ConfigError("'" + std::string(name) + "' must be an integer");
  }
  return v.get<long long>();
}

std::uint64_t as_u64(const json& v, std::string_view name) {
  if (!v.is_number_unsigned()) {
    throw ConfigError("'" + std::string(name) +
                      "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

int as_count(const json& v, std::string_view name, int lo) {
  const long long x = as_int(v, name);
  if (x < lo || x > std::numeric_limits<int>::max()) {
    throw ConfigError("'" + std::string(name) + "' must be an integer >= " +
                      std::to_string(lo));
  }
  return static_cast<int>(x);
}

std::vector<double> as_doubles(const json& v, std::string_view name) {
  if (!v.is_array()) throw ConfigError("'" + std::string(name) + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_double(x, name));
  return out;
}

void parse_scenario(const json& s, RunConfig& cfg) {
  check_keys(s, "scenario",
             {"n", "m", "gamma", "seed", "congestion_penalty", "yield_penalty",
              "max_profiles", "weights"});
  auto& sc = cfg.scenario;
  sc.n = as_count(require(s, "scenario", "n"), "scenario.n", 1);
  sc.m = as_count(require(s, "scenario", "m"), "scenario.m", 1);
  sc.gamma = as_double(require(s, "scenario", "gamma"), "scenario.gamma");
  if (auto v = find(s, "seed")) sc.seed = as_u64(*v, "scenario.seed");
  if (auto v = find(s, "congestion_penalty")) {
    sc.congestion_penalty = as_double(*v, "scenario.congestion_penalty");
  }
  if (auto v = find(s, "yield_penalty")) {
    sc.yield_penalty = as_double(*v, "scenario.yield_penalty");
  }
  if (auto v = find(s, "max_profiles")) {
    sc.max_profiles = as_u64(*v, "scenario.max_profiles");
  }
  if (auto v = find(s, "weights")) cfg.weights = as_doubles(*v, "scenario.weights");
}

void parse_game(const json& g, RunConfig& cfg) {
  check_keys(g, "game", {"actions", "costs", "seed", "weights"});
  GameSpec spec;
  const json& actions = require(g, "game", "actions");
  if (!actions.is_array()) throw ConfigError("'game.actions' must be an array");
  for (const auto& a : actions) spec.actions.push_back(as_count(a, "game.actions", 1));
  const json& costs = require(g, "game", "costs");
  if (!costs.is_array()) throw ConfigError("'game.costs' must be an array");
  for (const auto& c : costs) spec.costs.push_back(as_doubles(c, "game.costs"));
  if (auto v = find(g, "seed")) cfg.scenario.seed = as_u64(*v, "game.seed");
  if (auto v = find(g, "weights")) cfg.weights = as_doubles(*v, "game.weights");
  cfg.game = std::move(spec);
}

}  // namespace

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  check_keys(root, "config",
             {"scenario", "game", "uncertainty", "experiment", "output"});

  RunConfig cfg;
  const json* scenario = find(root, "scenario");
  const json* game = find(root, "game");
  if (scenario && game) {
    throw ConfigError("give either 'scenario' or 'game', not both");
  }
  if (game) {
    parse_game(*game, cfg);
  } else {
    // A missing block reports its first required key.
    parse_scenario(scenario ? *scenario : json::object(), cfg);
  }

  std::optional<std::vector<double>> grid;
  if (auto u = find(root, "uncertainty")) {
    check_keys(*u, "uncertainty", {"alpha", "alpha_grid", "constraint_form", "sigmas"});
    if (auto v = find(*u, "alpha")) cfg.alpha = as_double(*v, "uncertainty.alpha");
    if (auto v = find(*u, "alpha_grid")) grid = as_doubles(*v, "uncertainty.alpha_grid");
    if (auto v = find(*u, "constraint_form")) {
      if (!v->is_string()) {
        throw ConfigError("'uncertainty.constraint_form' must be a string");
      }
      try {
        cfg.form = parse_constraint_form(v->get<std::string>());
      } catch (const InputError& e) {
        throw ConfigError(std::string("uncertainty.constraint_form: ") + e.what());
      }
    }
    if (auto v = find(*u, "sigmas")) cfg.sigmas = as_doubles(*v, "uncertainty.sigmas");
  }

  if (auto e = find(root, "experiment")) {
    check_keys(*e, "experiment",
               {"trials", "samples_per_trial", "k_acquire", "c_dev", "alpha_grid"});
    auto& ex = cfg.experiment;
    if (auto v = find(*e, "trials")) ex.trials = as_count(*v, "experiment.trials", 1);
    if (auto v = find(*e, "samples_per_trial")) {
      ex.samples_per_trial = as_count(*v, "experiment.samples_per_trial", 1);
    }
    if (auto v = find(*e, "k_acquire")) {
      ex.k_acquire = static_cast<std::size_t>(
          as_count(*v, "experiment.k_acquire", 0));
    }
    if (auto v = find(*e, "c_dev")) {
      cfg.c_dev = as_double(*v, "experiment.c_dev");
      if (!(*cfg.c_dev >= 0.0)) {
        throw ConfigError("'experiment.c_dev' must be nonnegative");
      }
    }
    if (auto v = find(*e, "alpha_grid")) {
      if (grid) throw ConfigError("'alpha_grid' given in both 'uncertainty' and 'experiment'");
      grid = as_doubles(*v, "experiment.alpha_grid");
    }
  }

  if (auto o = find(root, "output")) {
    check_keys(*o, "output", {"directory"});
    if (auto v = find(*o, "directory")) {
      if (!v->is_string()) throw ConfigError("'output.directory' must be a string");
      cfg.output_dir = v->get<std::string>();
    }
  }

  if (overrides.seed) cfg.scenario.seed = *overrides.seed;
  if (overrides.form) {
    try {
      cfg.form = parse_constraint_form(*overrides.form);
    } catch (const InputError& e) {
      throw ConfigError(std::string("--form: ") + e.what());
    }
  }
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  if (cfg.output_dir.empty()) {
    throw ConfigError("missing required key 'output.directory' (or pass --out)");
  }

  if (grid) cfg.experiment.alpha_grid = *grid;
  cfg.experiment.seed = cfg.scenario.seed;
  cfg.experiment.form = cfg.form;
  if (cfg.alpha) cfg.experiment.acquire_alpha = *cfg.alpha;

  const std::size_t agents =
      cfg.game ? cfg.game->actions.size() : static_cast<std::size_t>(cfg.scenario.n);
  if (cfg.sigmas && cfg.sigmas->size() != agents) {
    throw ConfigError("'uncertainty.sigmas' has " +
                      std::to_string(cfg.sigmas->size()) + " entries, expected " +
                      std::to_string(agents));
  }
  if (cfg.weights && cfg.weights->size() != agents) {
    throw ConfigError("'weights' has " + std::to_string(cfg.weights->size()) +
                      " entries, expected " + std::to_string(agents));
  }
  if (cfg.alpha && !(*cfg.alpha > 0.0 && *cfg.alpha < 1.0)) {
    throw ConfigError("'uncertainty.alpha' must lie in (0, 1)");
  }
  try {
    if (!cfg.game) cfg.scenario.validate();
    cfg.experiment.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace ccce::cli
