#include <map>
#include <random>
#include <vector>

#include "ccce/baselines.hpp"
#include "ccce/errors.hpp"
#include "ccce/vertiport.hpp"
#include "doctest.h"
#include "oracles/game_oracle.hpp"

using namespace ccce;

namespace {

std::vector<std::size_t> brute_nash(const std::vector<int>& counts,
                                    const std::vector<std::vector<double>>& costs) {
  std::vector<std::size_t> out;
  const std::size_t np = oracle::profile_count(counts);
  for (std::size_t p = 0; p < np; ++p) {
    bool ok = true;
    const auto x = oracle::decode(p, counts);
    for (std::size_t i = 0; i < counts.size() && ok; ++i) {
      for (int b = 0; b < counts[i]; ++b) {
        auto y = x;
        y[i] = b;
        if (costs[i][oracle::encode(y, counts)] < costs[i][p]) ok = false;
      }
    }
    if (ok) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("pure Nash equilibria of small games") {
  const Game chicken({2, 2}, {{10, 0, 4, 1}, {10, 4, 0, 1}});
  CHECK(pure_nash_equilibria(chicken).profiles == std::vector<ProfileIndex>{1, 2});
  CHECK(is_pure_nash(chicken, 1));
  CHECK_FALSE(is_pure_nash(chicken, 3));

  const Game pennies({2, 2}, {{0, 1, 1, 0}, {1, 0, 0, 1}});
  CHECK(pure_nash_equilibria(pennies).empty());
  Rng rng(1);
  CHECK_THROWS_WITH_AS(select_ne(pure_nash_equilibria(pennies), rng), "no pure NE", InputError);

  // All-equal costs: every profile is an equilibrium (ties do not break it).
  const Game flat({2, 3}, {std::vector<double>(6, 1.0), std::vector<double>(6, 1.0)});
  CHECK(pure_nash_equilibria(flat).size() == 6);
}

TEST_CASE("vertiport single pad: exactly one queue occupies") {
  vertiport::Scenario sc;
  sc.n = 2;
  sc.m = 1;
  const Game g = vertiport::build_game(sc);
  CHECK(pure_nash_equilibria(g).profiles == std::vector<ProfileIndex>{1, 2});
}

TEST_CASE("pure Nash matches brute force on random games") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> cost(0, 4);
  for (int k = 0; k < 50; ++k) {
    const std::vector<int> counts{2 + k % 2, 2, 1 + k % 3};
    const std::size_t np = oracle::profile_count(counts);
    std::vector<std::vector<double>> costs(3, std::vector<double>(np));
    for (auto& t : costs) for (auto& c : t) c = cost(rng);
    const Game g(counts, costs);
    const auto got = pure_nash_equilibria(g).profiles;
    const auto want = brute_nash(counts, costs);
    CHECK(std::vector<std::size_t>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("NE selection is uniform and seeded") {
  PureNashSet set{{3, 5, 8}};
  Rng rng(99);
  std::map<ProfileIndex, int> hits;
  for (int k = 0; k < 30000; ++k) ++hits[select_ne(set, rng)];
  REQUIRE(hits.size() == 3);
  for (auto& [p, n] : hits) CHECK(std::abs(n - 10000) < 400);
  Rng a(5), b(5);
  for (int k = 0; k < 20; ++k) CHECK(select_ne(set, a) == select_ne(set, b));
}

TEST_CASE("naive CE is no worse than any pure NE") {
  for (double gamma : {1.0, 1.5, 2.0}) {
    vertiport::Scenario sc;
    sc.n = 3;
    sc.gamma = gamma;
    const Game g = vertiport::build_game(sc);
    const SystemWeights w({0.2, 0.5, 0.3});
    const auto ce = naive_ce(g, w);
    for (auto p : pure_nash_equilibria(g).profiles) {
      const auto pm = JointDistribution::point_mass(g.num_profiles(), p);
      CHECK(ce.j_sys_star <= expected_system_cost(g, pm, w) + 1e-9);
    }
    for (const auto& c : ce.constraints) {
      if (const auto m = nominal_margin(g, ce.z_star, c)) CHECK(*m <= 1e-7);
    }
  }
}
