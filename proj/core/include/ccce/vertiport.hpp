#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccce/game.hpp"
#include "ccce/rng.hpp"

namespace ccce::vertiport {

// n queues each choose, per vertiport, to occupy (bit set) or yield. Action
// index bit v is vertiport v, vertiport 0 least significant.
struct Scenario {
  int n = 4;
  int m = 2;
  double gamma = 1.5;
  std::uint64_t seed = 0;
  double congestion_penalty = 5.0;  // minutes per co-occupant, scaled by gamma
  double yield_penalty = 5.0;       // minutes per yielded vertiport
  std::size_t max_profiles = 1'000'000;

  void validate() const;
};

// congestion * gamma * sum_v x_iv (N_v - 1) + yield * sum_v (1 - x_iv)
double occupancy_cost(const Scenario& scenario, int agent,
                      std::span<const int> profile);

Game build_game(const Scenario& scenario);

// sigma_i ~ U(0, 0.3 (gamma - 1)) independently.
std::vector<double> sample_sigmas(const Scenario& scenario, Rng& rng);

// omega_i proportional to 1 / max(sigma_i, 1e-6), normalised to sum to one.
SystemWeights weights_from_sigmas(std::span<const double> sigmas);

}  // namespace ccce::vertiport
