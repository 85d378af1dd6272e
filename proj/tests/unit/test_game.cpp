#include <cmath>
#include <random>
#include <vector>

#include "ccce/errors.hpp"
#include "ccce/game.hpp"
#include "ccce/vertiport.hpp"
#include "doctest.h"
#include "oracles/game_oracle.hpp"

using namespace ccce;

namespace {

Game random_game(std::vector<int> counts, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const std::size_t np = oracle::profile_count(counts);
  std::vector<std::vector<double>> costs(counts.size(), std::vector<double>(np));
  for (auto& row : costs) {
    for (auto& v : row) v = u(rng);
  }
  return Game(std::move(counts), std::move(costs));
}

JointDistribution random_distribution(std::size_t n, std::mt19937_64& rng, double zero_p = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) {
    v = u(rng) < zero_p ? 0.0 : u(rng);
    s += v;
  }
  if (s == 0.0) {
    p[0] = 1.0;
    s = 1.0;
  }
  for (auto& v : p) v /= s;
  return JointDistribution(p);
}

std::vector<std::vector<double>> tables(const Game& g) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < g.num_agents(); ++i) out.emplace_back(g.costs(i).begin(), g.costs(i).end());
  return out;
}

std::vector<int> counts_of(const Game& g) {
  return {g.action_counts().begin(), g.action_counts().end()};
}

}  // namespace

TEST_CASE("profiles enumerate lexicographically with agent 0 outermost") {
  const Game g({2, 2}, {{0, 1, 2, 3}, {0, 0, 0, 0}});
  const auto all = enumerate_profiles(g);
  REQUIRE(all.size() == 4);
  CHECK(all[0] == JointActionProfile{0, 0});
  CHECK(all[1] == JointActionProfile{0, 1});
  CHECK(all[2] == JointActionProfile{1, 0});
  CHECK(all[3] == JointActionProfile{1, 1});

  const Game single({1}, {{3.0}});
  CHECK(enumerate_profiles(single).size() == 1);

  vertiport::Scenario sc;
  CHECK(enumerate_profiles(vertiport::build_game(sc)).size() == 256);
}

TEST_CASE("index round trip and helpers") {
  std::mt19937_64 rng(3);
  const Game g = random_game({2, 3, 4}, rng);
  const std::vector<int> counts{2, 3, 4};
  for (ProfileIndex p = 0; p < g.num_profiles(); ++p) {
    const auto x = g.profile_at(p);
    CHECK(x == oracle::decode(p, counts));
    CHECK(g.index_of(x) == p);
    for (int i = 0; i < 3; ++i) {
      CHECK(g.action_of(p, i) == x[i]);
      for (int a = 0; a < counts[i]; ++a) {
        auto y = x;
        y[i] = a;
        CHECK(g.with_action(p, i, a) == oracle::encode(y, counts));
      }
    }
  }
  CHECK(g.num_opponent_profiles(1) == 8);
  const auto with = g.profiles_with(1, 2);
  CHECK(with.size() == 8);
  for (auto p : with) CHECK(g.action_of(p, 1) == 2);
}

TEST_CASE("game construction is validated") {
  CHECK_THROWS_AS(Game({}, {}), InputError);
  CHECK_THROWS_AS(Game({2, 0}, {{}, {}}), InputError);
  CHECK_THROWS_AS(Game({2, 2}, {{0, 1, 2}, {0, 1, 2, 3}}), InputError);
  CHECK_THROWS_AS(Game({2}, {{0, NAN}}), InputError);
  CHECK_THROWS_AS(Game({2}, {{0, 1}, {0, 1}}), InputError);
  const Game g({2, 2}, {{0, 1, 2, 3}, {0, 0, 0, 0}});
  CHECK_THROWS_AS(g.cost(2, 0), InputError);
  CHECK_THROWS_AS(g.cost(0, 4), InputError);
  const std::vector<int> bad{0, 2};
  CHECK_THROWS_AS(g.index_of(bad), InputError);
}

TEST_CASE("joint distributions validate and clamp") {
  const JointDistribution z({0.5, -5e-10, 0.5});
  CHECK(z[1] == 0.0);
  CHECK_THROWS_AS(JointDistribution({0.5, -1e-6, 0.5}), InputError);
  CHECK_THROWS_AS(JointDistribution({0.5, 0.4}), InputError);
  CHECK_THROWS_AS(JointDistribution(std::vector<double>{}), InputError);
  const auto pm = JointDistribution::point_mass(4, 2);
  CHECK(pm[2] == 1.0);
  CHECK(pm[0] == 0.0);
  CHECK_THROWS_AS(JointDistribution::point_mass(4, 4), InputError);
  const auto u = JointDistribution::uniform(8);
  CHECK(u[7] == doctest::Approx(0.125));
}

TEST_CASE("system weights") {
  CHECK_THROWS_AS(SystemWeights({}), InputError);
  CHECK_THROWS_AS(SystemWeights({-1.0, 2.0}), InputError);
  CHECK_THROWS_AS(SystemWeights({0.0, 0.0}), InputError);
  const auto w = SystemWeights::uniform(4);
  CHECK(w.size() == 4);
  CHECK(w[3] == 1.0);
}

TEST_CASE("deviation cost") {
  // Two queues, two vertiports, gamma 1.5. Agent 1 is told to occupy both
  // (action 3) and considers yielding both (action 0) while agent 0 yields
  // both: 0 - 10.
  vertiport::Scenario sc;
  sc.n = 2;
  sc.m = 2;
  const Game g = vertiport::build_game(sc);
  const std::vector<int> others{0, 0};
  CHECK(deviation_cost(g, 1, 3, 0, others) == doctest::Approx(-10.0));
  CHECK(deviation_cost(g, 1, 2, 2, others) == 0.0);

  const Game flat({2, 3}, std::vector<std::vector<double>>(2, std::vector<double>(6, 4.0)));
  for (const auto& c : deviation_constraints(flat)) {
    for (const auto& x : enumerate_profiles(flat)) CHECK(deviation_cost(flat, c, x) == 0.0);
  }
}

TEST_CASE("deviation constraints are complete and ordered") {
  vertiport::Scenario sc;
  const auto cs = deviation_constraints(vertiport::build_game(sc));
  CHECK(cs.size() == 48);
  CHECK(std::is_sorted(cs.begin(), cs.end()));
  for (const auto& c : cs) CHECK(c.recommended != c.deviation);
  const Game g({3, 2}, {{0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}});
  CHECK(deviation_constraints(g).size() == 3 * 2 + 2 * 1);
}

TEST_CASE("conditional distribution") {
  const Game g({2, 2}, {{0, 1, 2, 3}, {3, 2, 1, 0}});
  const auto u = JointDistribution::uniform(4);
  const auto cond = conditional_distribution(g, u, 0, 1);
  REQUIRE(cond);
  CHECK((*cond)[0] == doctest::Approx(0.5));
  CHECK((*cond)[1] == doctest::Approx(0.5));

  const auto pm = JointDistribution::point_mass(4, 2);  // (1, 0)
  const auto c1 = conditional_distribution(g, pm, 1, 0);
  REQUIRE(c1);
  CHECK((*c1)[0] == 0.0);
  CHECK((*c1)[1] == 1.0);
  CHECK_FALSE(conditional_distribution(g, pm, 1, 1));
  CHECK_FALSE(nominal_margin(g, pm, {1, 1, 0}));
  CHECK(unconditional_margin(g, pm, {1, 1, 0}) == 0.0);
}

TEST_CASE("margins match brute force") {
  // Hand-set 2x2 costs; uniform z averages the two deviation gains.
  const Game g({2, 2}, {{4, 1, 3, 7}, {2, 5, 0, 6}});
  const auto u = JointDistribution::uniform(4);
  // Agent 0 told 0, considers 1: gains (4-3) and (1-7).
  CHECK(*nominal_margin(g, u, {0, 0, 1}) == doctest::Approx(0.5 * ((4 - 3) + (1 - 7))));
  CHECK(unconditional_margin(g, u, {0, 0, 1}) == doctest::Approx(0.25 * ((4 - 3) + (1 - 7))));
  // Point mass: margin is the deviation gain at that profile.
  const auto pm = JointDistribution::point_mass(4, 3);
  CHECK(*nominal_margin(g, pm, {1, 1, 0}) == doctest::Approx(6 - 0));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Game r = random_game({2, 3, 2}, rng);
    const auto z = random_distribution(r.num_profiles(), rng);
    const auto counts = counts_of(r);
    const auto costs = tables(r);
    const std::vector<double> zv(z.probs().begin(), z.probs().end());
    for (const auto& c : deviation_constraints(r)) {
      const double um = oracle::unconditional_margin(counts, costs, zv, c.agent, c.recommended,
                                                     c.deviation);
      CHECK(unconditional_margin(r, z, c) == doctest::Approx(um).epsilon(1e-12));
      const double zm = oracle::marginal(counts, zv, c.agent, c.recommended);
      CHECK(marginal(r, z, c.agent, c.recommended) == doctest::Approx(zm).epsilon(1e-12));
      const auto nm = nominal_margin(r, z, c);
      if (zm > kMarginalTolerance) {
        REQUIRE(nm);
        CHECK(std::abs(*nm * zm - um) <= 1e-9);
      } else {
        CHECK_FALSE(nm);
      }
    }
  }
}

TEST_CASE("deviation cost is antisymmetric") {
  std::mt19937_64 rng(5);
  const Game g = random_game({3, 3}, rng);
  for (const auto& x : enumerate_profiles(g)) {
    for (int i = 0; i < 2; ++i) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          CHECK(deviation_cost(g, i, a, b, x) == doctest::Approx(-deviation_cost(g, i, b, a, x)));
        }
      }
    }
  }
}

TEST_CASE("expected system cost") {
  const Game single({3}, {{4.0, 2.0, 9.0}});
  CHECK(expected_system_cost(single, JointDistribution::point_mass(3, 2), SystemWeights({1.0})) ==
        9.0);
  const Game zero({2, 2}, {{0, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK(expected_system_cost(zero, JointDistribution::uniform(4), SystemWeights::uniform(2)) ==
        0.0);

  // Uniform z on the two-queue, two-vertiport game, weights (1, 1).
  vertiport::Scenario sc;
  sc.n = 2;
  sc.m = 2;
  const Game g = vertiport::build_game(sc);
  double brute = 0.0;
  for (ProfileIndex p = 0; p < 16; ++p) {
    const int x0 = static_cast<int>(p / 4), x1 = static_cast<int>(p % 4);
    for (int v = 0; v < 2; ++v) {
      const int b0 = (x0 >> v) & 1, b1 = (x1 >> v) & 1;
      const int occ = b0 + b1;
      brute += 5 * 1.5 * b0 * (occ - 1) + 5 * (1 - b0);
      brute += 5 * 1.5 * b1 * (occ - 1) + 5 * (1 - b1);
    }
  }
  brute /= 16.0;
  CHECK(expected_system_cost(g, JointDistribution::uniform(16), SystemWeights({1.0, 1.0})) ==
        doctest::Approx(brute).epsilon(1e-14));
  // Frozen: 2 agents x 2 vertiports x (1/4 * 7.5 congested + 1/2 * 5 yield).
  CHECK(brute == doctest::Approx(17.5));
}

TEST_CASE("expected system cost is linear in z") {
  std::mt19937_64 rng(17);
  const Game g = random_game({2, 2, 3}, rng);
  const SystemWeights w({0.2, 0.5, 0.3});
  for (int t = 0; t < 10; ++t) {
    const auto z1 = random_distribution(g.num_profiles(), rng);
    const auto z2 = random_distribution(g.num_profiles(), rng);
    const double lam = std::uniform_real_distribution<double>(0, 1)(rng);
    std::vector<double> mix(g.num_profiles());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = lam * z1[k] + (1 - lam) * z2[k];
    const double lhs = expected_system_cost(g, JointDistribution(mix), w);
    const double rhs = lam * expected_system_cost(g, z1, w) + (1 - lam) * expected_system_cost(g, z2, w);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}
