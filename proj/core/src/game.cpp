#include "ccce/game.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ccce/errors.hpp"

namespace ccce {

InfeasibleError::InfeasibleError(double alpha, std::vector<double> sigmas)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "no CC-CE at alpha=" << alpha << ", sigma=(";
        for (std::size_t i = 0; i < sigmas.size(); ++i) {
          os << (i ? ", " : "") << sigmas[i];
        }
        os << ")";
        return os.str();
      }()),
      alpha_(alpha),
      sigmas_(std::move(sigmas)) {}

Game::Game(std::vector<int> action_counts,
           std::vector<std::vector<double>> costs)
    : action_counts_(std::move(action_counts)), costs_(std::move(costs)) {
  if (action_counts_.empty()) throw InputError("game needs at least one agent");
  const int n = num_agents();
  strides_.assign(n, 1);
  std::size_t total = 1;
  for (int i = n - 1; i >= 0; --i) {
    if (action_counts_[i] < 1) {
      throw InputError("agent " + std::to_string(i) + " has no actions");
    }
    strides_[i] = total;
    if (total > std::numeric_limits<std::size_t>::max() / action_counts_[i]) {
      throw SizeError("joint action space overflows");
    }
    total *= static_cast<std::size_t>(action_counts_[i]);
  }
  num_profiles_ = total;
  if (static_cast<int>(costs_.size()) != n) {
    throw InputError("expected one cost table per agent");
  }
  for (int i = 0; i < n; ++i) {
    if (costs_[i].size() != num_profiles_) {
      throw InputError("cost table of agent " + std::to_string(i) + " has " +
                       std::to_string(costs_[i].size()) + " entries, expected " +
                       std::to_string(num_profiles_));
    }
    for (double v : costs_[i]) {
      if (!std::isfinite(v)) throw InputError("non-finite cost entry");
    }
  }
}

void Game::check_agent(int agent) const {
  if (agent < 0 || agent >= num_agents()) {
    throw InputError("agent index " + std::to_string(agent) + " out of range");
  }
}

int Game::num_actions(int agent) const {
  check_agent(agent);
  return action_counts_[agent];
}

double Game::cost(int agent, ProfileIndex profile) const {
  check_agent(agent);
  if (profile >= num_profiles_) throw InputError("profile index out of range");
  return costs_[agent][profile];
}

std::span<const double> Game::costs(int agent) const {
  check_agent(agent);
  return costs_[agent];
}

ProfileIndex Game::index_of(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != num_agents()) {
    throw InputError("profile length does not match agent count");
  }
  ProfileIndex k = 0;
  for (int i = 0; i < num_agents(); ++i) {
    if (actions[i] < 0 || actions[i] >= action_counts_[i]) {
      throw InputError("action " + std::to_string(actions[i]) +
                       " out of range for agent " + std::to_string(i));
    }
    k += static_cast<std::size_t>(actions[i]) * strides_[i];
  }
  return k;
}

JointActionProfile Game::profile_at(ProfileIndex profile) const {
  if (profile >= num_profiles_) throw InputError("profile index out of range");
  JointActionProfile out(num_agents());
  for (int i = 0; i < num_agents(); ++i) {
    out[i] = static_cast<int>((profile / strides_[i]) % action_counts_[i]);
  }
  return out;
}

int Game::action_of(ProfileIndex profile, int agent) const {
  return static_cast<int>((profile / strides_[agent]) % action_counts_[agent]);
}

ProfileIndex Game::with_action(ProfileIndex profile, int agent,
                               int action) const {
  const int current = action_of(profile, agent);
  return profile + (static_cast<std::ptrdiff_t>(action) - current) *
                       static_cast<std::ptrdiff_t>(strides_[agent]);
}

std::size_t Game::num_opponent_profiles(int agent) const {
  return num_profiles_ / static_cast<std::size_t>(num_actions(agent));
}

std::vector<ProfileIndex> Game::profiles_with(int agent, int action) const {
  if (action < 0 || action >= num_actions(agent)) {
    throw InputError("action index out of range");
  }
  std::vector<ProfileIndex> out;
  out.reserve(num_opponent_profiles(agent));
  const std::size_t stride = strides_[agent];
  const std::size_t block = stride * action_counts_[agent];
  for (std::size_t base = 0; base < num_profiles_; base += block) {
    const std::size_t start = base + static_cast<std::size_t>(action) * stride;
    for (std::size_t k = 0; k < stride; ++k) out.push_back(start + k);
  }
  return out;
}

JointDistribution::JointDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("empty distribution");
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -kFeasibilityTolerance) {
      throw InputError("distribution entry below zero");
    }
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kFeasibilityTolerance) {
    throw InputError("distribution does not sum to one");
  }
}

JointDistribution JointDistribution::point_mass(std::size_t size,
                                                ProfileIndex at) {
  if (at >= size) throw InputError("point mass outside support");
  std::vector<double> p(size, 0.0);
  p[at] = 1.0;
  return JointDistribution(std::move(p));
}

JointDistribution JointDistribution::uniform(std::size_t size) {
  if (size == 0) throw InputError("empty distribution");
  return JointDistribution(std::vector<double>(size, 1.0 / size));
}

SystemWeights::SystemWeights(std::vector<double> weights)
    : weights_(std::move(weights)) {
  bool any_positive = false;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("negative weight");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw InputError("weights are all zero");
}

SystemWeights SystemWeights::uniform(int num_agents) {
  return SystemWeights(std::vector<double>(num_agents, 1.0));
}

std::vector<JointActionProfile> enumerate_profiles(const Game& game) {
  std::vector<JointActionProfile> out;
  out.reserve(game.num_profiles());
  for (ProfileIndex k = 0; k < game.num_profiles(); ++k) {
    out.push_back(game.profile_at(k));
  }
  return out;
}

double deviation_cost(const Game& game, int agent, int recommended,
                      int deviation, std::span<const int> profile) {
  JointActionProfile x(profile.begin(), profile.end());
  if (static_cast<int>(x.size()) != game.num_agents()) {
    throw InputError("profile length does not match agent count");
  }
  game.num_actions(agent);  // validates agent
  x[agent] = recommended;
  const ProfileIndex rec = game.index_of(x);
  x[agent] = deviation;
  const ProfileIndex dev = game.index_of(x);
  return game.cost(agent, rec) - game.cost(agent, dev);
}

double deviation_cost(const Game& game, const DeviationConstraintId& c,
                      std::span<const int> profile) {
  return deviation_cost(game, c.agent, c.recommended, c.deviation, profile);
}

std::vector<DeviationConstraintId> deviation_constraints(const Game& game) {
  std::vector<DeviationConstraintId> out;
  for (int i = 0; i < game.num_agents(); ++i) {
    const int k = game.num_actions(i);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a != b) out.push_back({i, a, b});
      }
    }
  }
  return out;
}

namespace {

void check_distribution(const Game& game, const JointDistribution& z) {
  if (z.size() != game.num_profiles()) {
    throw InputError("distribution size does not match the game");
  }
}

void check_constraint(const Game& game, const DeviationConstraintId& c) {
  const int k = game.num_actions(c.agent);
  if (c.recommended < 0 || c.recommended >= k || c.deviation < 0 ||
      c.deviation >= k) {
    throw InputError("deviation constraint action out of range");
  }
}

}  // namespace

double marginal(const Game& game, const JointDistribution& z, int agent,
                int action) {
  check_distribution(game, z);
  double sum = 0.0;
  for (ProfileIndex k : game.profiles_with(agent, action)) sum += z[k];
  return sum;
}

std::optional<std::vector<double>> conditional_distribution(
    const Game& game, const JointDistribution& z, int agent, int recommended) {
  check_distribution(game, z);
  const auto support = game.profiles_with(agent, recommended);
  double mass = 0.0;
  for (ProfileIndex k : support) mass += z[k];
  if (mass <= kMarginalTolerance) return std::nullopt;
  std::vector<double> out;
  out.reserve(support.size());
  for (ProfileIndex k : support) out.push_back(z[k] / mass);
  return out;
}

double unconditional_margin(const Game& game, const JointDistribution& z,
                            const DeviationConstraintId& c) {
  check_distribution(game, z);
  check_constraint(game, c);
  const auto costs = game.costs(c.agent);
  double sum = 0.0;
  for (ProfileIndex k : game.profiles_with(c.agent, c.recommended)) {
    const ProfileIndex dev = game.with_action(k, c.agent, c.deviation);
    sum += z[k] * (costs[k] - costs[dev]);
  }
  return sum;
}

std::optional<double> nominal_margin(const Game& game,
                                     const JointDistribution& z,
                                     const DeviationConstraintId& c) {
  check_constraint(game, c);
  const double mass = marginal(game, z, c.agent, c.recommended);
  if (mass <= kMarginalTolerance) return std::nullopt;
  return unconditional_margin(game, z, c) / mass;
}

double weighted_cost(const Game& game, const SystemWeights& weights,
                     ProfileIndex profile) {
  if (static_cast<int>(weights.size()) != game.num_agents()) {
    throw InputError("weight vector length does not match agent count");
  }
  double total = 0.0;
  for (int i = 0; i < game.num_agents(); ++i) {
    total += weights[i] * game.cost(i, profile);
  }
  return total;
}

double expected_system_cost(const Game& game, const JointDistribution& z,
                            const SystemWeights& weights) {
  check_distribution(game, z);
  double total = 0.0;
  for (ProfileIndex k = 0; k < game.num_profiles(); ++k) {
    if (z[k] != 0.0) total += z[k] * weighted_cost(game, weights, k);
  }
  return total;
}

}  // namespace ccce
