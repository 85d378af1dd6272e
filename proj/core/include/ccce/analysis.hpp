#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ccce/ccce_solver.hpp"
#include "ccce/rng.hpp"

namespace ccce {

// A derivative read off LP duals. At a degenerate optimum the duals of the
// final basis give only a one-sided derivative.
struct Derivative {
  double value = 0.0;
  bool one_sided = false;
};

// dJ*/d sigma_i = q(alpha) Lambda_i. Exact for the constant-margin form. In
// the conditional-scaled form sigma sits in the row coefficients and the true
// derivative weights each lambda_c by the marginal of its recommendation.
Derivative sigma_sensitivity(const CcceSolution& solution,
                             const UncertaintyModel& model, int agent);

// dJ*/d sigma_{i(c)} through row c only: q(alpha) lambda_c
Derivative constraint_sensitivity(const CcceSolution& solution,
                                  const UncertaintyModel& model,
                                  const DeviationConstraintId& c);

// sigma_{i(c)} lambda_c
double info_gain(const CcceSolution& solution, const UncertaintyModel& model,
                 const DeviationConstraintId& c);

// dJ*/d alpha = sum_i Lambda_i sigma_i / phi(q(alpha)). Also checks that the
// per-agent and per-constraint groupings agree to 1e-12 and throws
// NumericalError if they do not.
Derivative alpha_sensitivity(const CcceSolution& solution,
                             const UncertaintyModel& model);

struct SensitivityReport {
  std::vector<double> d_sigma_agent;       // per agent
  std::vector<double> d_sigma_constraint;  // per constraint index
  double d_alpha = 0.0;
  std::vector<double> info_gain;           // per constraint index
  bool degenerate = false;
};

SensitivityReport sensitivity_report(const CcceSolution& solution,
                                     const UncertaintyModel& model);

// J_sys + (1 - alpha) C_dev
double effective_cost(double j_sys, double alpha, double c_dev);

struct EffectiveCostCurve {
  double c_dev = 0.0;
  std::vector<double> alphas;
  std::vector<bool> feasible;
  // NaN at infeasible points.
  std::vector<double> j_sys;
  std::vector<double> j_eff;
  // sum_c InfoGain_c / phi(q(alpha)) - C_dev
  std::vector<double> stationarity_residual;
  std::vector<bool> one_sided;
};

struct AlphaSelection {
  double alpha_star = 0.0;
  std::size_t index = 0;
  EffectiveCostCurve curve;
};

// Grid search for the confidence level minimising J_eff. Ties go to the
// smaller alpha. Throws InfeasibleError when no grid point is feasible.
AlphaSelection optimal_alpha(const Game& game,
                             const UncertaintyModel& model_template,
                             const SystemWeights& weights, double c_dev,
                             std::span<const double> alpha_grid);

// Consecutive feasible grid indices between which the stationarity residual
// changes sign, if any.
std::optional<std::pair<std::size_t, std::size_t>> residual_sign_change(
    const EffectiveCostCurve& curve);

enum class AcquisitionStrategy { kRandom, kShadowPrice, kInfoGain };

const char* to_string(AcquisitionStrategy strategy);
AcquisitionStrategy parse_acquisition_strategy(std::string_view text);

// k constraint indices to de-noise. Score ties (including all-zero scores)
// resolve in constraint-id order.
std::vector<std::size_t> rank_for_acquisition(const CcceSolution& solution,
                                              const UncertaintyModel& model,
                                              std::size_t k,
                                              AcquisitionStrategy strategy,
                                              Rng& rng);

// Re-solve with the uncertainty margin of the listed constraints set to zero.
CcceSolution resolve_without_uncertainty(
    const Game& game, const UncertaintyModel& model,
    const SystemWeights& weights, std::span<const std::size_t> constraints);

// Re-solve with sigma_i = 0 for the listed agents.
CcceSolution resolve_without_agent_uncertainty(const Game& game,
                                               const UncertaintyModel& model,
                                               const SystemWeights& weights,
                                               std::span<const int> agents);

}  // namespace ccce
