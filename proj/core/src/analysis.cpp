#include "ccce/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ccce/errors.hpp"

namespace ccce {

namespace {

// Scores this close to zero are treated as exact ties.
constexpr double kScoreSnap = 1e-12;

void check_agent(const UncertaintyModel& model, int agent) {
  if (agent < 0 || agent >= static_cast<int>(model.sigmas.size())) {
    throw InputError("agent index out of range");
  }
}

}  // namespace

Derivative sigma_sensitivity(const CcceSolution& solution,
                             const UncertaintyModel& model, int agent) {
  check_agent(model, agent);
  return {model.confidence.quantile() * solution.lambda_agent.at(agent),
          solution.degenerate};
}

Derivative constraint_sensitivity(const CcceSolution& solution,
                                  const UncertaintyModel& model,
                                  const DeviationConstraintId& c) {
  const std::size_t idx = solution.index_of(c);
  return {model.confidence.quantile() * solution.duals[idx],
          solution.degenerate};
}

double info_gain(const CcceSolution& solution, const UncertaintyModel& model,
                 const DeviationConstraintId& c) {
  check_agent(model, c.agent);
  return model.sigmas[c.agent] * solution.duals[solution.index_of(c)];
}

Derivative alpha_sensitivity(const CcceSolution& solution,
                             const UncertaintyModel& model) {
  double by_agent = 0.0;
  for (std::size_t i = 0; i < model.sigmas.size(); ++i) {
    by_agent += solution.lambda_agent.at(i) * model.sigmas[i];
  }
  double by_constraint = 0.0;
  for (std::size_t r = 0; r < solution.constraints.size(); ++r) {
    by_constraint +=
        model.sigmas.at(solution.constraints[r].agent) * solution.duals[r];
  }
  if (std::abs(by_agent - by_constraint) > 1e-12 * (1.0 + std::abs(by_agent))) {
    throw NumericalError("information-gain regrouping mismatch");
  }
  const double density = std_normal_pdf(model.confidence.quantile());
  return {by_agent / density, solution.degenerate};
}

SensitivityReport sensitivity_report(const CcceSolution& solution,
                                     const UncertaintyModel& model) {
  SensitivityReport rep;
  rep.degenerate = solution.degenerate;
  const double q = model.confidence.quantile();
  for (std::size_t i = 0; i < model.sigmas.size(); ++i) {
    rep.d_sigma_agent.push_back(q * solution.lambda_agent.at(i));
  }
  for (std::size_t r = 0; r < solution.constraints.size(); ++r) {
    rep.d_sigma_constraint.push_back(q * solution.duals[r]);
    rep.info_gain.push_back(
        model.sigmas.at(solution.constraints[r].agent) * solution.duals[r]);
  }
  rep.d_alpha = alpha_sensitivity(solution, model).value;
  return rep;
}

double effective_cost(double j_sys, double alpha, double c_dev) {
  if (!(c_dev >= 0.0)) throw InputError("C_dev must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("confidence level must lie in (0, 1)");
  }
  return j_sys + (1.0 - alpha) * c_dev;
}

AlphaSelection optimal_alpha(const Game& game,
                             const UncertaintyModel& model_template,
                             const SystemWeights& weights, double c_dev,
                             std::span<const double> alpha_grid) {
  if (!(c_dev >= 0.0)) throw InputError("C_dev must be nonnegative");
  if (alpha_grid.empty()) throw InputError("empty alpha grid");
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) {
    throw InputError("alpha grid must be sorted");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();

  AlphaSelection out;
  auto& curve = out.curve;
  curve.c_dev = c_dev;
  bool found = false;
  double best = 0.0;
  for (std::size_t g = 0; g < alpha_grid.size(); ++g) {
    const double alpha = alpha_grid[g];
    UncertaintyModel model(model_template.sigmas, Confidence(alpha),
                           model_template.form);
    curve.alphas.push_back(alpha);
    try {
      const auto solution = solve_ccce(game, model, weights);
      const double j_eff = effective_cost(solution.j_sys_star, alpha, c_dev);
      const auto slope = alpha_sensitivity(solution, model);
      curve.feasible.push_back(true);
      curve.j_sys.push_back(solution.j_sys_star);
      curve.j_eff.push_back(j_eff);
      curve.stationarity_residual.push_back(slope.value - c_dev);
      curve.one_sided.push_back(slope.one_sided);
      if (!found || j_eff < best - 1e-12 * (1.0 + std::abs(best))) {
        found = true;
        best = j_eff;
        out.index = g;
        out.alpha_star = alpha;
      }
    } catch (const InfeasibleError&) {
      curve.feasible.push_back(false);
      curve.j_sys.push_back(nan);
      curve.j_eff.push_back(nan);
      curve.stationarity_residual.push_back(nan);
      curve.one_sided.push_back(false);
    }
  }
  if (!found) throw InfeasibleError(alpha_grid.front(), model_template.sigmas);
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> residual_sign_change(
    const EffectiveCostCurve& curve) {
  std::optional<std::size_t> prev;
  for (std::size_t g = 0; g < curve.alphas.size(); ++g) {
    if (!curve.feasible[g]) continue;
    if (prev) {
      const double a = curve.stationarity_residual[*prev];
      const double b = curve.stationarity_residual[g];
      if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
        return std::make_pair(*prev, g);
      }
    }
    prev = g;
  }
  return std::nullopt;
}

const char* to_string(AcquisitionStrategy strategy) {
  switch (strategy) {
    case AcquisitionStrategy::kRandom:
      return "random";
    case AcquisitionStrategy::kShadowPrice:
      return "shadow_price";
    case AcquisitionStrategy::kInfoGain:
      return "infogain";
  }
  return "unknown";
}

AcquisitionStrategy parse_acquisition_strategy(std::string_view text) {
  if (text == "random") return AcquisitionStrategy::kRandom;
  if (text == "shadow_price") return AcquisitionStrategy::kShadowPrice;
  if (text == "infogain") return AcquisitionStrategy::kInfoGain;
  throw InputError("unknown acquisition strategy '" + std::string(text) + "'");
}

std::vector<std::size_t> rank_for_acquisition(const CcceSolution& solution,
                                              const UncertaintyModel& model,
                                              std::size_t k,
                                              AcquisitionStrategy strategy,
                                              Rng& rng) {
  const std::size_t count = solution.constraints.size();
  if (k > count) throw InputError("cannot select more constraints than exist");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});

  if (strategy == AcquisitionStrategy::kRandom) {
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, count - 1);
      std::swap(order[i], order[pick(rng)]);
    }
    order.resize(k);
    return order;
  }

  std::vector<double> score(count);
  for (std::size_t r = 0; r < count; ++r) {
    double s = solution.duals[r];
    if (strategy == AcquisitionStrategy::kInfoGain) {
      s *= model.sigmas.at(solution.constraints[r].agent);
    }
    score[r] = s <= kScoreSnap ? 0.0 : s;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return score[a] > score[b];
                   });
  order.resize(k);
  return order;
}

CcceSolution resolve_without_uncertainty(
    const Game& game, const UncertaintyModel& model,
    const SystemWeights& weights, std::span<const std::size_t> constraints) {
  auto sigmas = constraint_sigmas(game, model);
  for (std::size_t r : constraints) {
    if (r >= sigmas.size()) throw InputError("constraint index out of range");
    sigmas[r] = 0.0;
  }
  return solve_ccce(game, model, weights, sigmas);
}

CcceSolution resolve_without_agent_uncertainty(const Game& game,
                                               const UncertaintyModel& model,
                                               const SystemWeights& weights,
                                               std::span<const int> agents) {
  UncertaintyModel reduced = model;
  for (int i : agents) {
    check_agent(model, i);
    reduced.sigmas[i] = 0.0;
  }
  return solve_ccce(game, reduced, weights);
}

}  // namespace ccce
