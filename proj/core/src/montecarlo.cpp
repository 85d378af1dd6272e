#include "ccce/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ccce/baselines.hpp"
#include "ccce/errors.hpp"
#include "ccce/stats.hpp"

namespace ccce::montecarlo {

namespace {

// Stream tags for derive_rng.
constexpr std::uint64_t kTagInstance = 1;
constexpr std::uint64_t kTagNash = 2;
constexpr std::uint64_t kTagSample = 3;
constexpr std::uint64_t kTagAcquire = 4;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_alpha(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

// Averages `samples` simulated outcomes for one (trial, method, alpha).
// Streams depend only on (seed, trial, sample).
struct Realized {
  double weighted = 0.0;
  double unweighted = 0.0;
};

Realized realize(const Game& game, const JointDistribution& z,
                 const SystemWeights& weights, std::span<const double> sigmas,
                 const TrialConfig& config, int trial) {
  Realized out;
  for (int s = 0; s < config.samples_per_trial; ++s) {
    Rng rng = derive_rng({config.seed, kTagSample,
                          static_cast<std::uint64_t>(trial),
                          static_cast<std::uint64_t>(s)});
    const auto outcome = simulate(game, z, weights, sigmas, rng);
    out.weighted += outcome.realized_cost;
    out.unweighted += outcome.realized_cost_unweighted;
  }
  out.weighted /= config.samples_per_trial;
  out.unweighted /= config.samples_per_trial;
  return out;
}

}  // namespace

void TrialConfig::validate() const {
  if (trials < 1) throw InputError("trials must be >= 1");
  if (samples_per_trial < 1) throw InputError("samples_per_trial must be >= 1");
  if (alpha_grid.empty()) throw InputError("alpha_grid is empty");
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) {
    throw InputError("alpha_grid must be sorted");
  }
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) throw InputError("alpha_grid outside (0, 1)");
  }
  if (!(acquire_alpha > 0.0 && acquire_alpha < 1.0)) {
    throw InputError("acquire alpha outside (0, 1)");
  }
}

ProfileIndex sample_recommendation_at(const JointDistribution& z, double u) {
  if (z.size() == 0) throw InputError("empty distribution");
  double cumulative = 0.0;
  std::optional<ProfileIndex> last_positive;
  for (ProfileIndex k = 0; k < z.size(); ++k) {
    if (z[k] <= 0.0) continue;
    last_positive = k;
    cumulative += z[k];
    if (u < cumulative) return k;
  }
  // Only reachable through rounding in the cumulative sum.
  return *last_positive;
}

ProfileIndex sample_recommendation(const JointDistribution& z, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  return sample_recommendation_at(z, uniform(rng));
}

std::vector<double> sample_noise(std::span<const double> sigmas, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> eta(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) eta[i] = sigmas[i] * normal(rng);
  return eta;
}

ProfileIndex agent_response(const Game& game, const JointDistribution& z,
                            ProfileIndex recommended,
                            std::span<const double> noise,
                            std::vector<bool>* deviated) {
  const int n = game.num_agents();
  if (static_cast<int>(noise.size()) != n) {
    throw InputError("noise vector length does not match agent count");
  }
  if (z.size() != game.num_profiles()) {
    throw InputError("distribution size does not match the game");
  }
  if (deviated) deviated->assign(n, false);

  ProfileIndex realized = recommended;
  for (int i = 0; i < n; ++i) {
    const int a = game.action_of(recommended, i);
    const auto support = game.profiles_with(i, a);
    double mass = 0.0;
    for (ProfileIndex k : support) mass += z[k];
    if (mass <= kMarginalTolerance) continue;

    const auto costs = game.costs(i);
    int best_action = -1;
    double best_margin = 0.0;
    for (int b = 0; b < game.num_actions(i); ++b) {
      if (b == a) continue;
      double sum = 0.0;
      for (ProfileIndex k : support) {
        if (z[k] == 0.0) continue;
        sum += z[k] * (costs[k] - costs[game.with_action(k, i, b)]);
      }
      const double perturbed = sum / mass + noise[i];
      if (best_action < 0 || perturbed > best_margin) {
        best_action = b;
        best_margin = perturbed;
      }
    }
    if (best_action >= 0 && best_margin > 0.0) {
      realized = game.with_action(realized, i, best_action);
      if (deviated) (*deviated)[i] = true;
    }
  }
  return realized;
}

TrialOutcome simulate(const Game& game, const JointDistribution& z,
                      const SystemWeights& weights,
                      std::span<const double> sigmas, Rng& rng) {
  TrialOutcome out;
  out.expected_cost = expected_system_cost(game, z, weights);
  out.recommended = sample_recommendation(z, rng);
  out.noise = sample_noise(sigmas, rng);
  out.realized =
      agent_response(game, z, out.recommended, out.noise, &out.deviated);
  out.realized_cost = weighted_cost(game, weights, out.realized);
  for (int i = 0; i < game.num_agents(); ++i) {
    out.realized_cost_unweighted += game.cost(i, out.realized);
  }
  return out;
}

double deviation_profitable_frequency(double margin, double sigma, int draws,
                                      Rng& rng) {
  if (draws < 1) throw InputError("draws must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  int hits = 0;
  for (int d = 0; d < draws; ++d) {
    if (margin + sigma * normal(rng) > 0.0) ++hits;
  }
  return static_cast<double>(hits) / draws;
}

const char* to_string(Method method) {
  switch (method) {
    case Method::kNash:
      return "ne";
    case Method::kNaiveCe:
      return "naive_ce";
    case Method::kCcce:
      return "cc_ce";
  }
  return "unknown";
}

TrialInstance trial_instance(const vertiport::Scenario& scenario,
                             std::uint64_t seed, int trial) {
  Rng rng = derive_rng({seed, kTagInstance, static_cast<std::uint64_t>(trial)});
  auto sigmas = vertiport::sample_sigmas(scenario, rng);
  auto weights = vertiport::weights_from_sigmas(sigmas);
  return {std::move(sigmas), std::move(weights)};
}

SweepResult run_alpha_sweep(const vertiport::Scenario& scenario,
                            const TrialConfig& config) {
  config.validate();
  const Game game = vertiport::build_game(scenario);
  const PureNashSet nash = pure_nash_equilibria(game);
  const auto& grid = config.alpha_grid;
  const std::size_t num_alpha = grid.size();
  constexpr Method kMethods[] = {Method::kNash, Method::kNaiveCe, Method::kCcce};

  SweepResult result;
  // rows_by[alpha][trial][method]
  std::vector<std::vector<std::array<SweepRow, 3>>> rows_by(
      num_alpha, std::vector<std::array<SweepRow, 3>>(config.trials));

  for (int t = 0; t < config.trials; ++t) {
    const auto inst = trial_instance(scenario, config.seed, t);

    std::optional<JointDistribution> ne_z;
    if (nash.empty()) {
      ++result.trials_without_pure_ne;
      result.log.push_back("trial " + std::to_string(t) +
                           ": no pure NE, excluded from NE statistics");
    } else {
      Rng rng = derive_rng({config.seed, kTagNash, static_cast<std::uint64_t>(t)});
      ne_z = JointDistribution::point_mass(game.num_profiles(),
                                           select_ne(nash, rng));
    }
    const auto naive = naive_ce(game, inst.weights);

    const auto fill = [&](SweepRow& row, const JointDistribution& z) {
      row.feasible = true;
      row.expected_cost = expected_system_cost(game, z, inst.weights);
      const auto r = realize(game, z, inst.weights, inst.sigmas, config, t);
      row.realized_cost = r.weighted;
      row.realized_cost_unweighted = r.unweighted;
    };
    const auto mark_infeasible = [](SweepRow& row) {
      row.feasible = false;
      row.expected_cost = row.realized_cost = row.realized_cost_unweighted = kNaN;
    };

    for (std::size_t g = 0; g < num_alpha; ++g) {
      auto& slot = rows_by[g][t];
      for (int m = 0; m < 3; ++m) {
        slot[m].trial = t;
        slot[m].alpha = grid[g];
        slot[m].method = kMethods[m];
      }
      if (ne_z) {
        fill(slot[0], *ne_z);
      } else {
        mark_infeasible(slot[0]);
      }
      fill(slot[1], naive.z_star);
      try {
        UncertaintyModel model(inst.sigmas, Confidence(grid[g]), config.form);
        const auto sol = solve_ccce(game, model, inst.weights);
        fill(slot[2], sol.z_star);
      } catch (const InfeasibleError& e) {
        mark_infeasible(slot[2]);
        result.log.push_back("trial " + std::to_string(t) + ": " + e.what());
        if (!result.smallest_infeasible_alpha ||
            grid[g] < *result.smallest_infeasible_alpha) {
          result.smallest_infeasible_alpha = grid[g];
        }
      }
    }
    for (std::size_t g = 0; g < num_alpha; ++g) {
      for (int m = 0; m < 3; ++m) {
        auto& row = rows_by[g][t][m];
        const auto& first = rows_by[0][t][m];
        row.realized_ratio_to_first_alpha =
            row.feasible && first.feasible
                ? row.realized_cost / first.realized_cost
                : kNaN;
      }
    }
  }

  for (std::size_t g = 0; g < num_alpha; ++g) {
    for (int m = 0; m < 3; ++m) {
      std::vector<double> expected, realized, ratio;
      for (int t = 0; t < config.trials; ++t) {
        const auto& row = rows_by[g][t][m];
        result.rows.push_back(row);
        if (!row.feasible) continue;
        expected.push_back(row.expected_cost);
        realized.push_back(row.realized_cost);
        if (!std::isnan(row.realized_ratio_to_first_alpha)) {
          ratio.push_back(row.realized_ratio_to_first_alpha);
        }
      }
      SweepSummaryRow s;
      s.alpha = grid[g];
      s.method = kMethods[m];
      s.count = static_cast<int>(realized.size());
      s.expected_mean = stats::mean(expected);
      s.realized_mean = stats::mean(realized);
      s.realized_q1 = stats::quantile(realized, 0.25);
      s.realized_median = stats::quantile(realized, 0.5);
      s.realized_q3 = stats::quantile(realized, 0.75);
      s.ratio_mean = stats::mean(ratio);
      s.ratio_q1 = stats::quantile(ratio, 0.25);
      s.ratio_median = stats::quantile(ratio, 0.5);
      s.ratio_q3 = stats::quantile(ratio, 0.75);
      result.summary.push_back(s);
    }
  }
  if (result.smallest_infeasible_alpha) {
    result.log.push_back("smallest infeasible alpha: " +
                         format_alpha(*result.smallest_infeasible_alpha));
  }
  return result;
}

AcquisitionResult run_info_acquisition(const vertiport::Scenario& scenario,
                                       const TrialConfig& config) {
  config.validate();
  const Game game = vertiport::build_game(scenario);
  AcquisitionResult result;
  std::map<AcquisitionStrategy, std::vector<double>> normalized;

  for (int t = 0; t < config.trials; ++t) {
    const auto inst = trial_instance(scenario, config.seed, t);
    UncertaintyModel model(inst.sigmas, Confidence(config.acquire_alpha),
                           config.form);
    std::optional<CcceSolution> baseline;
    try {
      baseline = solve_ccce(game, model, inst.weights);
    } catch (const InfeasibleError& e) {
      result.log.push_back("trial " + std::to_string(t) + ": " + e.what() +
                           ", skipped");
      continue;
    }
    if (config.k_acquire > baseline->constraints.size()) {
      throw InputError("k_acquire exceeds the number of constraints");
    }
    Rng rng =
        derive_rng({config.seed, kTagAcquire, static_cast<std::uint64_t>(t)});
    for (auto strategy : kAllStrategies) {
      const auto picks = rank_for_acquisition(*baseline, model,
                                              config.k_acquire, strategy, rng);
      const auto resolved =
          resolve_without_uncertainty(game, model, inst.weights, picks);
      AcquisitionRow row;
      row.trial = t;
      row.strategy = strategy;
      row.baseline_cost = baseline->j_sys_star;
      row.cost = resolved.j_sys_star;
      row.normalized_cost = baseline->j_sys_star != 0.0
                                ? resolved.j_sys_star / baseline->j_sys_star
                                : 1.0;
      for (std::size_t r : picks) row.selected.push_back(baseline->constraints[r]);
      normalized[strategy].push_back(row.normalized_cost);
      result.rows.push_back(std::move(row));
    }
  }

  for (auto strategy : kAllStrategies) {
    const auto& xs = normalized[strategy];
    AcquisitionSummaryRow s;
    s.strategy = strategy;
    s.count = static_cast<int>(xs.size());
    s.mean = stats::mean(xs);
    s.sem = stats::sem(xs);
    s.q1 = stats::quantile(xs, 0.25);
    s.median = stats::quantile(xs, 0.5);
    s.q3 = stats::quantile(xs, 0.75);
    result.summary.push_back(s);
  }
  return result;
}

}  // namespace ccce::montecarlo
