#include <cmath>
#include <random>

#include "ccce/errors.hpp"
#include "ccce/lp_solver.hpp"
#include "doctest.h"
#include "oracles/lp_vertex_oracle.hpp"

using namespace ccce;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  int k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

// Feasible by construction: rhs = A x0 + slack with x0 >= 0; a sum row
// keeps it bounded.
lp::LinearProgram random_lp(std::mt19937_64& rng, int rows, int cols, int eq) {
  std::uniform_real_distribution<double> u(0, 1), s(-1, 1);
  VectorXd x0(cols);
  for (int j = 0; j < cols; ++j) x0(j) = u(rng) < 0.3 ? 0.0 : u(rng);
  lp::LinearProgram lp;
  lp.objective.resize(cols);
  for (int j = 0; j < cols; ++j) lp.objective(j) = s(rng);
  lp.ineq_matrix.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < cols; ++j) lp.ineq_matrix(r, j) = s(rng);
  }
  lp.ineq_matrix.row(0).setOnes();
  lp.ineq_rhs = lp.ineq_matrix * x0;
  for (int r = 0; r < rows; ++r) lp.ineq_rhs(r) += u(rng) < 0.3 ? 0.0 : u(rng);
  lp.eq_matrix.resize(eq, cols);
  for (int r = 0; r < eq; ++r) {
    for (int j = 0; j < cols; ++j) lp.eq_matrix(r, j) = s(rng);
  }
  lp.eq_rhs = lp.eq_matrix * x0;
  return lp;
}

oracle::SmallLp to_small(const lp::LinearProgram& lp) {
  oracle::SmallLp out;
  out.c.assign(lp.objective.data(), lp.objective.data() + lp.objective.size());
  for (int r = 0; r < lp.ineq_matrix.rows(); ++r) {
    out.a.emplace_back(lp.ineq_matrix.cols());
    for (int j = 0; j < lp.ineq_matrix.cols(); ++j) out.a.back()[j] = lp.ineq_matrix(r, j);
    out.b.push_back(lp.ineq_rhs(r));
  }
  for (int r = 0; r < lp.eq_matrix.rows(); ++r) {
    out.e.emplace_back(lp.eq_matrix.cols());
    for (int j = 0; j < lp.eq_matrix.cols(); ++j) out.e.back()[j] = lp.eq_matrix(r, j);
    out.d.push_back(lp.eq_rhs(r));
  }
  return out;
}

}  // namespace

TEST_CASE("vertex of the simplex") {
  lp::LinearProgram lp;
  lp.objective = vec({-1, 0});
  lp.ineq_matrix.resize(0, 2);
  lp.ineq_rhs.resize(0);
  lp.eq_matrix = MatrixXd::Ones(1, 2);
  lp.eq_rhs = vec({1});
  const auto s = lp::solve(lp);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.primal(0) == doctest::Approx(1.0));
  CHECK(s.primal(1) == doctest::Approx(0.0));
  CHECK(s.objective_value == doctest::Approx(-1.0));
  CHECK(lp::check_certificates(lp, s).ok());
}

TEST_CASE("one-dimensional KKT: min z s.t. -z <= -2") {
  lp::LinearProgram lp;
  lp.objective = vec({1});
  lp.ineq_matrix = MatrixXd::Constant(1, 1, -1.0);
  lp.ineq_rhs = vec({-2});
  const auto s = lp::solve(lp);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.primal(0) == doctest::Approx(2.0));
  CHECK(s.ineq_duals(0) == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded") {
  lp::LinearProgram lp;
  lp.objective = vec({1});
  lp.ineq_matrix = MatrixXd::Constant(1, 1, 1.0);
  lp.ineq_rhs = vec({-1});
  CHECK(lp::solve(lp).status == lp::Status::kInfeasible);
  CHECK_THROWS_AS(lp::check_certificates(lp, lp::solve(lp)), InputError);

  lp::LinearProgram ub;
  ub.objective = vec({-1, 0});
  ub.ineq_matrix = MatrixXd::Zero(1, 2);
  ub.ineq_matrix(0, 1) = 1;
  ub.ineq_rhs = vec({1});
  CHECK(lp::solve(ub).status == lp::Status::kUnbounded);
  CHECK(std::string(lp::to_string(lp::Status::kUnbounded)) == "unbounded");
}

TEST_CASE("free variables") {
  // min x s.t. x >= -3 with x free.
  lp::LinearProgram lp;
  lp.nonneg = false;
  lp.objective = vec({1});
  lp.ineq_matrix = MatrixXd::Constant(1, 1, -1.0);
  lp.ineq_rhs = vec({3});
  const auto s = lp::solve(lp);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.primal(0) == doctest::Approx(-3.0));
  CHECK(lp::check_certificates(lp, s).ok());
}

TEST_CASE("malformed programs are rejected") {
  lp::LinearProgram lp;
  CHECK_THROWS_AS(lp::solve(lp), InputError);
  lp.objective = vec({1, 2});
  lp.ineq_matrix = MatrixXd::Ones(1, 3);
  lp.ineq_rhs = vec({1});
  CHECK_THROWS_AS(lp::solve(lp), InputError);
  lp.ineq_matrix = MatrixXd::Ones(1, 2);
  lp.ineq_rhs = vec({1, 2});
  CHECK_THROWS_AS(lp::solve(lp), InputError);
  lp.ineq_rhs = vec({NAN});
  CHECK_THROWS_AS(lp::solve(lp), InputError);
}

TEST_CASE("random LPs pass every certificate") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> rows(1, 50), cols(1, 300), eqs(0, 3);
  for (int k = 0; k < 40; ++k) {
    const int r = rows(rng);
    const auto lp = random_lp(rng, r, cols(rng), std::min(eqs(rng), r));
    const auto s = lp::solve(lp);
    REQUIRE(s.status == lp::Status::kOptimal);
    const auto rep = lp::check_certificates(lp, s);
    CHECK(rep.ok());
    CHECK(rep.duality_gap <= 1e-8);
  }
}

TEST_CASE("small LPs match vertex enumeration") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 60; ++k) {
    const int cols = 2 + k % 4;
    const auto lp = random_lp(rng, 2 + k % 3, cols, k % 2);
    const auto ref = oracle::vertex_enumerate(to_small(lp));
    const auto s = lp::solve(lp);
    REQUIRE(ref.feasible);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.objective_value == doctest::Approx(ref.objective).epsilon(1e-9));
  }
}

TEST_CASE("relaxing an inactive row changes nothing") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    auto lp = random_lp(rng, 10, 30, 1);
    const auto s = lp::solve(lp);
    REQUIRE(s.status == lp::Status::kOptimal);
    const VectorXd slack = lp.ineq_rhs - lp.ineq_matrix * s.primal;
    for (int r = 0; r < slack.size(); ++r) {
      if (slack(r) <= 1e-6) continue;
      auto relaxed = lp;
      relaxed.ineq_rhs(r) += 1e-3;
      CHECK(std::abs(lp::solve(relaxed).objective_value - s.objective_value) <= 1e-9);
    }
  }
}

TEST_CASE("duals are shadow prices at nondegenerate optima") {
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (int k = 0; k < 200 && checked < 30; ++k) {
    auto lp = random_lp(rng, 8, 12, 1);
    const auto s = lp::solve(lp);
    REQUIRE(s.status == lp::Status::kOptimal);
    if (s.degenerate) continue;
    const double d = 1e-6;
    for (int r = 0; r < lp.ineq_rhs.size(); ++r) {
      auto up = lp, dn = lp;
      up.ineq_rhs(r) += d;
      dn.ineq_rhs(r) -= d;
      const double fd = (lp::solve(up).objective_value - lp::solve(dn).objective_value) / (2 * d);
      CHECK(std::abs(fd + s.ineq_duals(r)) <= 1e-4);
    }
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("degenerate optimum is flagged") {
  // min -x - y s.t. x <= 1, y <= 1, x + y <= 2: the third row is tight but
  // redundant, so some basic slack sits at zero.
  lp::LinearProgram lp;
  lp.objective = vec({-1, -1});
  lp.ineq_matrix.resize(3, 2);
  lp.ineq_matrix << 1, 0, 0, 1, 1, 1;
  lp.ineq_rhs = vec({1, 1, 2});
  const auto s = lp::solve(lp);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.objective_value == doctest::Approx(-2));
  CHECK(s.degenerate);
}

TEST_CASE("identical input gives identical output") {
  std::mt19937_64 rng(8);
  const auto lp = random_lp(rng, 30, 100, 2);
  const auto a = lp::solve(lp), b = lp::solve(lp);
  CHECK(a.primal == b.primal);
  CHECK(a.ineq_duals == b.ineq_duals);
  CHECK(a.iterations == b.iterations);
}
