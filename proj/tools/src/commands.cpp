#include "ccce_cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccce/analysis.hpp"
#include "ccce/baselines.hpp"
#include "ccce/errors.hpp"
#include "ccce/montecarlo.hpp"
#include "ccce/vertiport.hpp"

namespace ccce::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::vector<std::string>& header)
      : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed for '" + path_.string() + "'");
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

fs::path prepare(const RunConfig& config, const char* name) {
  fs::create_directories(config.output_dir);
  return config.output_dir / name;
}

std::string constraint_label(const DeviationConstraintId& c) {
  return std::to_string(c.agent) + ":" + std::to_string(c.recommended) + ":" +
         std::to_string(c.deviation);
}

struct Instance {
  Game game;
  std::vector<double> sigmas;
  SystemWeights weights;
};

// The configured game with trial 0's noise draw unless sigmas are given.
Instance make_instance(const RunConfig& config) {
  if (config.game) {
    Game game(config.game->actions, config.game->costs);
    std::vector<double> sigmas =
        config.sigmas.value_or(std::vector<double>(config.game->actions.size(), 0.0));
    SystemWeights weights =
        config.weights ? SystemWeights(*config.weights)
                       : SystemWeights::uniform(game.num_agents());
    return {std::move(game), std::move(sigmas), std::move(weights)};
  }
  Game game = vertiport::build_game(config.scenario);
  auto trial = montecarlo::trial_instance(config.scenario, config.seed(), 0);
  std::vector<double> sigmas = config.sigmas.value_or(trial.sigmas);
  SystemWeights weights =
      config.weights   ? SystemWeights(*config.weights)
      : config.sigmas  ? vertiport::weights_from_sigmas(*config.sigmas)
                       : trial.weights;
  return {std::move(game), std::move(sigmas), std::move(weights)};
}

void require_scenario(const RunConfig& config, const char* command) {
  if (config.game) {
    throw ConfigError(std::string(command) + " needs a 'scenario' block");
  }
}

std::vector<std::string> profile_header(const Game& game, const char* last) {
  std::vector<std::string> h{"profile"};
  for (int i = 0; i < game.num_agents(); ++i) h.push_back("a" + std::to_string(i));
  h.push_back(last);
  return h;
}

std::vector<std::string> profile_cells(const Game& game, ProfileIndex p) {
  std::vector<std::string> cells{std::to_string(p)};
  for (int a : game.profile_at(p)) cells.push_back(std::to_string(a));
  return cells;
}

}  // namespace

void cmd_solve(const RunConfig& config, std::ostream& out) {
  if (!config.alpha) throw ConfigError("solve needs 'uncertainty.alpha'");
  const Instance inst = make_instance(config);
  const UncertaintyModel model(inst.sigmas, Confidence(*config.alpha), config.form);
  const CcceSolution sol = solve_ccce(inst.game, model, inst.weights);
  const SensitivityReport report = sensitivity_report(sol, model);
  const lp::CertificateReport cert = lp::check_certificates(sol.program, sol.lp_solution);

  {
    CsvFile csv(prepare(config, "solution.csv"), profile_header(inst.game, "probability"));
    for (ProfileIndex p = 0; p < inst.game.num_profiles(); ++p) {
      auto cells = profile_cells(inst.game, p);
      cells.push_back(fmt(sol.z_star[p]));
      csv.row(cells);
    }
  }
  {
    CsvFile csv(prepare(config, "duals.csv"),
                {"agent", "recommended", "deviation", "lambda", "sigma",
                 "d_cost_d_sigma", "infogain", "slack", "active", "bottleneck",
                 "rho"});
    for (std::size_t r = 0; r < sol.constraints.size(); ++r) {
      const auto& c = sol.constraints[r];
      std::string kind, rho;
      if (sol.active[r]) {
        const auto b = classify_bottleneck(inst.game, sol, model, c);
        kind = to_string(b.kind);
        rho = fmt(b.ratio);
      }
      csv.row({std::to_string(c.agent), std::to_string(c.recommended),
               std::to_string(c.deviation), fmt(sol.duals[r]),
               fmt(inst.sigmas[c.agent]), fmt(report.d_sigma_constraint[r]),
               fmt(report.info_gain[r]), fmt(sol.slacks[r]),
               sol.active[r] ? "1" : "0", kind, rho});
    }
  }
  {
    CsvFile csv(prepare(config, "summary.csv"), {"key", "value"});
    csv.row({"j_sys", fmt(sol.j_sys_star)});
    csv.row({"alpha", fmt(*config.alpha)});
    csv.row({"q", fmt(model.confidence.quantile())});
    csv.row({"constraint_form", to_string(config.form)});
    csv.row({"profiles", std::to_string(inst.game.num_profiles())});
    csv.row({"constraints", std::to_string(sol.constraints.size())});
    csv.row({"active_constraints", std::to_string(sol.active_set.size())});
    csv.row({"degenerate", sol.degenerate ? "1" : "0"});
    csv.row({"lp_iterations", std::to_string(sol.lp_solution.iterations)});
    csv.row({"d_cost_d_alpha", fmt(report.d_alpha)});
    for (std::size_t i = 0; i < inst.sigmas.size(); ++i) {
      const std::string k = std::to_string(i);
      csv.row({"sigma_" + k, fmt(inst.sigmas[i])});
      csv.row({"weight_" + k, fmt(inst.weights[i])});
      csv.row({"lambda_agent_" + k, fmt(sol.lambda_agent[i])});
      csv.row({"d_cost_d_sigma_" + k, fmt(report.d_sigma_agent[i])});
    }
    csv.row({"certificates_ok", cert.ok() ? "1" : "0"});
    csv.row({"duality_gap", fmt(cert.duality_gap)});
    csv.row({"complementarity", fmt(cert.complementarity)});
  }

  out << "J_sys* = " << fmt(sol.j_sys_star) << "\n"
      << "active constraints: " << sol.active_set.size() << " of "
      << sol.constraints.size() << (sol.degenerate ? " (degenerate basis)" : "")
      << "\n"
      << "dJ*/dalpha = " << fmt(report.d_alpha) << "\n";
}

void cmd_sweep_alpha(const RunConfig& config, std::ostream& out) {
  require_scenario(config, "sweep-alpha");
  const auto result = montecarlo::run_alpha_sweep(config.scenario, config.experiment);

  {
    CsvFile csv(prepare(config, "sweep.csv"),
                {"trial", "alpha", "method", "feasible", "expected_cost",
                 "realized_cost", "realized_cost_unweighted",
                 "realized_ratio_to_first_alpha"});
    for (const auto& r : result.rows) {
      csv.row({std::to_string(r.trial), fmt(r.alpha), montecarlo::to_string(r.method),
               r.feasible ? "1" : "0", fmt(r.expected_cost), fmt(r.realized_cost),
               fmt(r.realized_cost_unweighted),
               fmt(r.realized_ratio_to_first_alpha)});
    }
  }
  {
    CsvFile csv(prepare(config, "sweep_summary.csv"),
                {"alpha", "method", "count", "expected_mean", "realized_mean",
                 "realized_q1", "realized_median", "realized_q3", "ratio_mean",
                 "ratio_q1", "ratio_median", "ratio_q3"});
    for (const auto& s : result.summary) {
      csv.row({fmt(s.alpha), montecarlo::to_string(s.method), std::to_string(s.count),
               fmt(s.expected_mean), fmt(s.realized_mean), fmt(s.realized_q1),
               fmt(s.realized_median), fmt(s.realized_q3), fmt(s.ratio_mean),
               fmt(s.ratio_q1), fmt(s.ratio_median), fmt(s.ratio_q3)});
    }
  }
  {
    std::ofstream log(prepare(config, "feasibility.log"));
    for (const auto& line : result.log) log << line << '\n';
    log << "trials without pure NE: " << result.trials_without_pure_ne << '\n';
  }

  if (config.c_dev) {
    const Instance inst = make_instance(config);
    const UncertaintyModel model(inst.sigmas,
                                 Confidence(config.experiment.alpha_grid.front()),
                                 config.form);
    const auto sel = optimal_alpha(inst.game, model, inst.weights, *config.c_dev,
                                   config.experiment.alpha_grid);
    const auto& curve = sel.curve;
    CsvFile csv(prepare(config, "effective_cost.csv"),
                {"alpha", "feasible", "j_sys", "j_eff", "stationarity_residual",
                 "one_sided", "alpha_star"});
    for (std::size_t g = 0; g < curve.alphas.size(); ++g) {
      csv.row({fmt(curve.alphas[g]), curve.feasible[g] ? "1" : "0",
               fmt(curve.j_sys[g]), fmt(curve.j_eff[g]),
               fmt(curve.stationarity_residual[g]), curve.one_sided[g] ? "1" : "0",
               g == sel.index ? "1" : "0"});
    }
    out << "alpha* = " << fmt(sel.alpha_star) << " for C_dev = " << fmt(*config.c_dev)
        << "\n";
  }

  double ne_median = 0.0;
  for (const auto& s : result.summary) {
    if (s.method == montecarlo::Method::kNash) ne_median = s.realized_median;
  }
  for (const auto& s : result.summary) {
    out << "alpha " << fmt(s.alpha) << " " << montecarlo::to_string(s.method)
        << ": median realized " << fmt(s.realized_median);
    if (s.method != montecarlo::Method::kNash && ne_median > 0.0) {
      out << " (" << fmt(100.0 * (1.0 - s.realized_median / ne_median))
          << "% below NE)";
    }
    out << "\n";
  }
  if (result.smallest_infeasible_alpha) {
    out << "smallest infeasible alpha: " << fmt(*result.smallest_infeasible_alpha)
        << "\n";
  }
}

void cmd_acquire(const RunConfig& config, std::ostream& out) {
  require_scenario(config, "acquire");
  const auto result = montecarlo::run_info_acquisition(config.scenario, config.experiment);

  {
    CsvFile csv(prepare(config, "acquire.csv"),
                {"trial", "strategy", "baseline_cost", "cost", "normalized_cost",
                 "selected"});
    for (const auto& r : result.rows) {
      std::string ids;
      for (std::size_t i = 0; i < r.selected.size(); ++i) {
        if (i) ids += ';';
        ids += constraint_label(r.selected[i]);
      }
      csv.row({std::to_string(r.trial), to_string(r.strategy), fmt(r.baseline_cost),
               fmt(r.cost), fmt(r.normalized_cost), ids});
    }
  }
  {
    CsvFile csv(prepare(config, "acquire_summary.csv"),
                {"strategy", "count", "mean", "sem", "q1", "median", "q3"});
    for (const auto& s : result.summary) {
      csv.row({to_string(s.strategy), std::to_string(s.count), fmt(s.mean),
               fmt(s.sem), fmt(s.q1), fmt(s.median), fmt(s.q3)});
      out << to_string(s.strategy) << ": mean normalized cost " << fmt(s.mean)
          << " (sem " << fmt(s.sem) << ")\n";
    }
  }
  if (!result.log.empty()) {
    std::ofstream log(prepare(config, "feasibility.log"));
    for (const auto& line : result.log) log << line << '\n';
  }
}

void cmd_nash(const RunConfig& config, std::ostream& out) {
  const Instance inst = make_instance(config);
  const PureNashSet set = pure_nash_equilibria(inst.game);

  std::optional<ProfileIndex> selected;
  if (!set.empty()) {
    // Same stream as trial 0 of the sweep.
    Rng rng = derive_rng({config.seed(), 2, 0});
    selected = select_ne(set, rng);
  }

  CsvFile csv(prepare(config, "nash.csv"), profile_header(inst.game, "system_cost"));
  out << "pure Nash equilibria: " << set.size() << "\n";
  for (ProfileIndex p : set.profiles) {
    const double cost = weighted_cost(inst.game, inst.weights, p);
    auto cells = profile_cells(inst.game, p);
    cells.push_back(fmt(cost));
    csv.row(cells);
    out << "  profile " << p << " cost " << fmt(cost)
        << (selected && *selected == p ? "  [selected]" : "") << "\n";
  }
  if (selected) {
    out << "selected NE cost: " << fmt(weighted_cost(inst.game, inst.weights, *selected))
        << "\n";
  } else {
    out << "no pure Nash equilibrium\n";
  }
}

int run_command(const std::string& command, const std::string& config_path,
                const Overrides& overrides, std::ostream& out,
                std::ostream& err) {
  try {
    const RunConfig config = load_config(config_path, overrides);
    if (command == "solve") {
      cmd_solve(config, out);
    } else if (command == "sweep-alpha") {
      cmd_sweep_alpha(config, out);
    } else if (command == "acquire") {
      cmd_acquire(config, out);
    } else if (command == "nash") {
      cmd_nash(config, out);
    } else {
      err << "error: unknown command '" << command << "'\n";
      return kExitConfig;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ccce::cli
