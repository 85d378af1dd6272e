#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ccce {

// Joint profiles are stored as a flat index. Agent 0 is the most significant
// digit, so profile k enumerates actions lexicographically.
using ProfileIndex = std::size_t;

// One action index per agent.
using JointActionProfile = std::vector<int>;

// Dense finite strategic game in cost (minimisation) form.
class Game {
 public:
  // `costs[i]` is agent i's cost table over all profiles, in profile order.
  Game(std::vector<int> action_counts, std::vector<std::vector<double>> costs);

  int num_agents() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int agent) const;
  std::span<const int> action_counts() const { return action_counts_; }
  std::size_t num_profiles() const { return num_profiles_; }

  double cost(int agent, ProfileIndex profile) const;
  std::span<const double> costs(int agent) const;

  ProfileIndex index_of(std::span<const int> actions) const;
  JointActionProfile profile_at(ProfileIndex profile) const;
  int action_of(ProfileIndex profile, int agent) const;
  // Same profile with agent's action replaced.
  ProfileIndex with_action(ProfileIndex profile, int agent, int action) const;

  // Number of profiles of the other agents, i.e. |X_{-i}|.
  std::size_t num_opponent_profiles(int agent) const;
  // Profiles in which `agent` plays `action`, ordered lexicographically in the
  // remaining agents.
  std::vector<ProfileIndex> profiles_with(int agent, int action) const;

 private:
  void check_agent(int agent) const;

  std::vector<int> action_counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
  std::vector<std::vector<double>> costs_;
};

// Probability vector over joint profiles.
class JointDistribution {
 public:
  static constexpr double kFeasibilityTolerance = 1e-9;

  JointDistribution() = default;
  // Validates: entries >= -1e-9 (clamped to 0) and sum within 1e-9 of 1.
  explicit JointDistribution(std::vector<double> probs);

  static JointDistribution point_mass(std::size_t size, ProfileIndex at);
  static JointDistribution uniform(std::size_t size);

  std::size_t size() const { return probs_.size(); }
  double operator[](ProfileIndex k) const { return probs_[k]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// c = (i, x_i, x_i'): agent i told to play x_i considers switching to x_i'.
struct DeviationConstraintId {
  int agent = 0;
  int recommended = 0;
  int deviation = 0;

  auto operator<=>(const DeviationConstraintId&) const = default;
};

// Per-agent nonnegative weights of the system objective.
class SystemWeights {
 public:
  explicit SystemWeights(std::vector<double> weights);
  static SystemWeights uniform(int num_agents);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Marginal probabilities below this are treated as "never recommended".
inline constexpr double kMarginalTolerance = 1e-12;

std::vector<JointActionProfile> enumerate_profiles(const Game& game);

// J_i(x_i, x_-i) - J_i(x_i', x_-i). Agent's own entry of `profile` is ignored.
double deviation_cost(const Game& game, int agent, int recommended,
                      int deviation, std::span<const int> profile);
double deviation_cost(const Game& game, const DeviationConstraintId& c,
                      std::span<const int> profile);

// All deviation constraints in lexicographic (agent, recommended, deviation)
// order; sum_i |X_i|(|X_i|-1) entries.
std::vector<DeviationConstraintId> deviation_constraints(const Game& game);

double marginal(const Game& game, const JointDistribution& z, int agent,
                int action);

// z(x_-i | x_i) over the opponent profiles in the order of
// Game::profiles_with. nullopt when the marginal is <= kMarginalTolerance.
std::optional<std::vector<double>> conditional_distribution(
    const Game& game, const JointDistribution& z, int agent, int recommended);

// Conditional expected deviation cost m_c(z).
std::optional<double> nominal_margin(const Game& game,
                                     const JointDistribution& z,
                                     const DeviationConstraintId& c);

// sum_{x_-i} z(x_i, x_-i) dJ: the CE inequality in linear form.
double unconditional_margin(const Game& game, const JointDistribution& z,
                            const DeviationConstraintId& c);

double weighted_cost(const Game& game, const SystemWeights& weights,
                     ProfileIndex profile);
double expected_system_cost(const Game& game, const JointDistribution& z,
                            const SystemWeights& weights);

}  // namespace ccce
