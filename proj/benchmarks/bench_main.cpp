#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ccce/analysis.hpp"
#include "ccce/baselines.hpp"
#include "ccce/ccce_solver.hpp"
#include "ccce/gaussian.hpp"
#include "ccce/montecarlo.hpp"
#include "ccce/vertiport.hpp"

namespace {

using namespace ccce;

void BM_NormalQuantile(benchmark::State& state) {
  double p = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(std_normal_quantile(p));
    p = p < 0.999 ? p + 1e-4 : 1e-3;
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_VertiportSolve(benchmark::State& state) {
  vertiport::Scenario sc;
  sc.n = static_cast<int>(state.range(0));
  const Game game = vertiport::build_game(sc);
  const auto inst = montecarlo::trial_instance(sc, 1, 0);
  const UncertaintyModel model(inst.sigmas, Confidence(0.9));
  for (auto _ : state) {
    auto sol = solve_ccce(game, model, inst.weights);
    benchmark::DoNotOptimize(sol.j_sys_star);
  }
  state.counters["profiles"] = static_cast<double>(game.num_profiles());
}
BENCHMARK(BM_VertiportSolve)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SensitivityReport(benchmark::State& state) {
  vertiport::Scenario sc;
  const Game game = vertiport::build_game(sc);
  const auto inst = montecarlo::trial_instance(sc, 1, 0);
  const UncertaintyModel model(inst.sigmas, Confidence(0.9));
  const auto sol = solve_ccce(game, model, inst.weights);
  for (auto _ : state) {
    auto rep = sensitivity_report(sol, model);
    benchmark::DoNotOptimize(rep.d_alpha);
  }
}
BENCHMARK(BM_SensitivityReport);

void BM_PureNash(benchmark::State& state) {
  vertiport::Scenario sc;
  const Game game = vertiport::build_game(sc);
  for (auto _ : state) {
    auto set = pure_nash_equilibria(game);
    benchmark::DoNotOptimize(set.profiles.data());
  }
}
BENCHMARK(BM_PureNash);

void BM_AgentResponse(benchmark::State& state) {
  vertiport::Scenario sc;
  const Game game = vertiport::build_game(sc);
  const auto inst = montecarlo::trial_instance(sc, 1, 0);
  const UncertaintyModel model(inst.sigmas, Confidence(0.9));
  const auto sol = solve_ccce(game, model, inst.weights);
  Rng rng = derive_rng({1, 99});
  for (auto _ : state) {
    auto out = montecarlo::simulate(game, sol.z_star, inst.weights, inst.sigmas, rng);
    benchmark::DoNotOptimize(out.realized);
  }
}
BENCHMARK(BM_AgentResponse);

}  // namespace

BENCHMARK_MAIN();
