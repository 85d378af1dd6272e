#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccce/analysis.hpp"
#include "ccce/ccce_solver.hpp"
#include "ccce/game.hpp"
#include "ccce/rng.hpp"
#include "ccce/vertiport.hpp"

namespace ccce::montecarlo {

struct TrialConfig {
  int trials = 50;
  // Realised-response draws per solved instance; costs are averaged.
  int samples_per_trial = 1;
  std::vector<double> alpha_grid = {0.75, 0.80, 0.85, 0.90, 0.95, 0.99};
  std::uint64_t seed = 0;
  ConstraintForm form = ConstraintForm::kConstantMargin;
  std::size_t k_acquire = 5;
  // Confidence level of the acquisition experiment's baseline CC-CE.
  double acquire_alpha = 0.9;

  void validate() const;
};

struct TrialOutcome {
  double expected_cost = 0.0;
  double realized_cost = 0.0;             // omega-weighted
  double realized_cost_unweighted = 0.0;  // plain sum over agents
  ProfileIndex recommended = 0;
  ProfileIndex realized = 0;
  std::vector<bool> deviated;
  std::vector<double> noise;
};

// Inverse CDF over profile order at u in [0, 1). Never returns a profile of
// zero probability.
ProfileIndex sample_recommendation_at(const JointDistribution& z, double u);
ProfileIndex sample_recommendation(const JointDistribution& z, Rng& rng);

// eta_i ~ N(0, sigma_i^2)
std::vector<double> sample_noise(std::span<const double> sigmas, Rng& rng);

// Each agent, seeing only its own recommendation, switches to the deviation
// with the largest perturbed conditional margin m_c(z) + eta_i when that is
// positive (lowest action index on ties). Agents respond simultaneously. An
// undefined conditional means the agent follows. `deviated`, if given,
// receives one flag per agent.
ProfileIndex agent_response(const Game& game, const JointDistribution& z,
                            ProfileIndex recommended,
                            std::span<const double> noise,
                            std::vector<bool>* deviated = nullptr);

// One recommendation draw followed by one noise draw, in that order.
TrialOutcome simulate(const Game& game, const JointDistribution& z,
                      const SystemWeights& weights,
                      std::span<const double> sigmas, Rng& rng);

// Fraction of `draws` noise samples eta ~ N(0, sigma^2) with margin + eta > 0.
double deviation_profitable_frequency(double margin, double sigma, int draws,
                                      Rng& rng);

enum class Method { kNash, kNaiveCe, kCcce };
const char* to_string(Method method);

struct SweepRow {
  int trial = 0;
  double alpha = 0.0;
  Method method = Method::kCcce;
  bool feasible = true;
  double expected_cost = 0.0;
  double realized_cost = 0.0;
  double realized_cost_unweighted = 0.0;
  // realized_cost / realized_cost at the first grid alpha, same trial and
  // method. NaN when either point is infeasible.
  double realized_ratio_to_first_alpha = 0.0;
};

struct SweepSummaryRow {
  double alpha = 0.0;
  Method method = Method::kCcce;
  int count = 0;  // feasible trials
  double expected_mean = 0.0;
  double realized_mean = 0.0;
  double realized_q1 = 0.0;
  double realized_median = 0.0;
  double realized_q3 = 0.0;
  double ratio_mean = 0.0;
  double ratio_q1 = 0.0;
  double ratio_median = 0.0;
  double ratio_q3 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // alpha-major, then trial, then method
  std::vector<SweepSummaryRow> summary;
  std::vector<std::string> log;
  std::optional<double> smallest_infeasible_alpha;
  int trials_without_pure_ne = 0;
};

// Per trial: sample sigma and weights, solve NE / naive CE / CC-CE per
// alpha, simulate responses. Every method and alpha of a trial reuses the
// same recommendation uniforms and noise draws (common random numbers).
SweepResult run_alpha_sweep(const vertiport::Scenario& scenario,
                            const TrialConfig& config);

struct AcquisitionRow {
  int trial = 0;
  AcquisitionStrategy strategy = AcquisitionStrategy::kRandom;
  double baseline_cost = 0.0;
  double cost = 0.0;
  double normalized_cost = 0.0;  // cost / baseline_cost
  std::vector<DeviationConstraintId> selected;
};

struct AcquisitionSummaryRow {
  AcquisitionStrategy strategy = AcquisitionStrategy::kRandom;
  int count = 0;
  double mean = 0.0;
  double sem = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct AcquisitionResult {
  std::vector<AcquisitionRow> rows;  // trial-major, strategies in enum order
  std::vector<AcquisitionSummaryRow> summary;
  std::vector<std::string> log;
};

inline constexpr AcquisitionStrategy kAllStrategies[] = {
    AcquisitionStrategy::kRandom, AcquisitionStrategy::kShadowPrice,
    AcquisitionStrategy::kInfoGain};

// Per trial: baseline CC-CE at acquire_alpha, then for each strategy remove
// the uncertainty of k_acquire selected constraints and re-solve once.
AcquisitionResult run_info_acquisition(const vertiport::Scenario& scenario,
                                       const TrialConfig& config);

// The sigma draw and weights used by trial `trial` of both experiments.
struct TrialInstance {
  std::vector<double> sigmas;
  SystemWeights weights;
};
TrialInstance trial_instance(const vertiport::Scenario& scenario,
                             std::uint64_t seed, int trial);

}  // namespace ccce::montecarlo
