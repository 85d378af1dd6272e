#include "ccce/vertiport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccce/errors.hpp"

namespace ccce::vertiport {

namespace {

constexpr double kSigmaScale = 0.3;
constexpr double kWeightFloor = 1e-6;

bool occupies(int action, int vertiport) { return (action >> vertiport) & 1; }

}  // namespace

void Scenario::validate() const {
  if (n < 1) throw InputError("scenario needs n >= 1");
  if (m < 1) throw InputError("scenario needs m >= 1");
  if (m > 30) throw SizeError("too many vertiports");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw InputError("scenario needs gamma >= 1");
  }
  if (!(congestion_penalty >= 0.0) || !(yield_penalty >= 0.0)) {
    throw InputError("penalties must be nonnegative");
  }
}

double occupancy_cost(const Scenario& s, int agent,
                      std::span<const int> profile) {
  if (static_cast<int>(profile.size()) != s.n || agent < 0 || agent >= s.n) {
    throw InputError("profile does not match scenario");
  }
  const int own = profile[agent];
  double congestion = 0.0;
  double yielded = 0.0;
  for (int v = 0; v < s.m; ++v) {
    if (!occupies(own, v)) {
      yielded += 1.0;
      continue;
    }
    int others = 0;
    for (int j = 0; j < s.n; ++j) {
      if (j != agent && occupies(profile[j], v)) ++others;
    }
    congestion += others;
  }
  return s.congestion_penalty * s.gamma * congestion +
         s.yield_penalty * yielded;
}

Game build_game(const Scenario& s) {
  s.validate();
  const int actions = 1 << s.m;
  // (2^m)^n profiles; compare in log space to avoid overflow.
  const double log_profiles = static_cast<double>(s.m) * s.n * std::log(2.0);
  if (log_profiles > std::log(static_cast<double>(s.max_profiles)) + 1e-9) {
    throw SizeError("vertiport game with n=" + std::to_string(s.n) +
                    ", m=" + std::to_string(s.m) + " exceeds the cap of " +
                    std::to_string(s.max_profiles) + " profiles");
  }
  std::vector<int> counts(s.n, actions);
  std::size_t total = 1;
  for (int i = 0; i < s.n; ++i) total *= actions;

  std::vector<std::vector<double>> costs(s.n, std::vector<double>(total));
  JointActionProfile x(s.n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (int i = s.n - 1; i >= 0; --i) {
      x[i] = static_cast<int>(rest % actions);
      rest /= actions;
    }
    for (int i = 0; i < s.n; ++i) costs[i][k] = occupancy_cost(s, i, x);
  }
  return Game(std::move(counts), std::move(costs));
}

std::vector<double> sample_sigmas(const Scenario& s, Rng& rng) {
  s.validate();
  const double upper = kSigmaScale * (s.gamma - 1.0);
  std::vector<double> out(s.n, 0.0);
  if (upper <= 0.0) return out;
  std::uniform_real_distribution<double> draw(0.0, upper);
  for (double& v : out) v = draw(rng);
  return out;
}

SystemWeights weights_from_sigmas(std::span<const double> sigmas) {
  if (sigmas.empty()) throw InputError("empty sigma vector");
  std::vector<double> w(sigmas.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (sigmas[i] < 0.0) throw InputError("negative sigma");
    w[i] = 1.0 / std::max(sigmas[i], kWeightFloor);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return SystemWeights(std::move(w));
}

}  // namespace ccce::vertiport
