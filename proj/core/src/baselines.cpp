#include "ccce/baselines.hpp"

#include "ccce/errors.hpp"

namespace ccce {

bool is_pure_nash(const Game& game, ProfileIndex profile) {
  for (int i = 0; i < game.num_agents(); ++i) {
    const auto costs = game.costs(i);
    const double own = costs[profile];
    for (int b = 0; b < game.num_actions(i); ++b) {
      if (costs[game.with_action(profile, i, b)] < own) return false;
    }
  }
  return true;
}

PureNashSet pure_nash_equilibria(const Game& game) {
  PureNashSet out;
  for (ProfileIndex k = 0; k < game.num_profiles(); ++k) {
    if (is_pure_nash(game, k)) out.profiles.push_back(k);
  }
  return out;
}

ProfileIndex select_ne(const PureNashSet& set, Rng& rng) {
  if (set.empty()) throw InputError("no pure NE");
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  return set.profiles[pick(rng)];
}

CcceSolution naive_ce(const Game& game, const SystemWeights& weights) {
  UncertaintyModel model(std::vector<double>(game.num_agents(), 0.0),
                         Confidence(0.5));
  return solve_ccce(game, model, weights);
}

}  // namespace ccce
