#pragma once

#include <vector>

#include "ccce/ccce_solver.hpp"
#include "ccce/game.hpp"
#include "ccce/rng.hpp"

namespace ccce {

// Pure Nash equilibria in profile order.
struct PureNashSet {
  std::vector<ProfileIndex> profiles;

  bool empty() const { return profiles.empty(); }
  std::size_t size() const { return profiles.size(); }
};

bool is_pure_nash(const Game& game, ProfileIndex profile);

// Brute force over all profiles.
PureNashSet pure_nash_equilibria(const Game& game);

// Uniform pick; throws InputError("no pure NE") on an empty set.
ProfileIndex select_ne(const PureNashSet& set, Rng& rng);

// Coordination LP with classical CE rows (sigma = 0).
CcceSolution naive_ce(const Game& game, const SystemWeights& weights);

}  // namespace ccce
