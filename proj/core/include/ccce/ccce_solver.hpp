#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ccce/game.hpp"
#include "ccce/gaussian.hpp"
#include "ccce/lp_solver.hpp"

namespace ccce {

// How the uncertainty margin q(alpha) * sigma_i enters a deviation row.
enum class ConstraintForm {
  // sum_{x_-i} z(x_i, x_-i) dJ <= -q sigma_i. Linear in the margin, so LP
  // duals are exact derivatives with respect to q sigma_i.
  kConstantMargin,
  // sum_{x_-i} z(x_i, x_-i) (dJ + q sigma_i) <= 0, i.e. z_marg (m_c + q
  // sigma_i) <= 0: the conditional chance constraint itself.
  kConditionalScaled,
};

const char* to_string(ConstraintForm form);
// Accepts "constant" or "conditional".
ConstraintForm parse_constraint_form(std::string_view text);

struct UncertaintyModel {
  UncertaintyModel(std::vector<double> sigmas, Confidence confidence,
                   ConstraintForm form = ConstraintForm::kConstantMargin);

  // q(alpha) * sigma_i
  double margin(int agent) const;

  std::vector<double> sigmas;
  Confidence confidence;
  ConstraintForm form;
};

struct ConstraintRow {
  DeviationConstraintId id;
  std::vector<double> coefficients;  // over profiles
  double rhs = 0.0;                  // row reads coefficients . z <= rhs
};

// sigma_{i(c)} for every constraint, in deviation_constraints() order.
std::vector<double> constraint_sigmas(const Game& game,
                                      const UncertaintyModel& model);

std::vector<ConstraintRow> build_constraints(const Game& game,
                                             const UncertaintyModel& model);
// Same, with each row's sigma taken from `sigma_per_constraint` instead of
// its agent. Used to remove the uncertainty of individual constraints.
std::vector<ConstraintRow> build_constraints(
    const Game& game, const UncertaintyModel& model,
    std::span<const double> sigma_per_constraint);

struct CcceSolution {
  // Row slack at or below this counts as active.
  static constexpr double kActiveTolerance = 1e-7;

  JointDistribution z_star;
  double j_sys_star = 0.0;
  std::vector<DeviationConstraintId> constraints;
  // lambda*_c >= 0, the derivative of J* with respect to the row's margin.
  std::vector<double> duals;
  std::vector<double> slacks;
  std::vector<bool> active;
  std::vector<std::size_t> active_set;
  // Lambda_i, sum of agent i's duals.
  std::vector<double> lambda_agent;
  bool degenerate = false;

  lp::LinearProgram program;
  lp::LpSolution lp_solution;

  std::size_t index_of(const DeviationConstraintId& c) const;
};

// Minimises expected_system_cost over the simplex subject to the rows of
// build_constraints. Throws InfeasibleError when no CC-CE exists.
CcceSolution solve_ccce(const Game& game, const UncertaintyModel& model,
                        const SystemWeights& weights);
CcceSolution solve_ccce(const Game& game, const UncertaintyModel& model,
                        const SystemWeights& weights,
                        std::span<const double> sigma_per_constraint);

enum class BottleneckKind { kStructural, kInformational };

const char* to_string(BottleneckKind kind);

struct BottleneckClass {
  BottleneckKind kind = BottleneckKind::kStructural;
  // q sigma / (|m_hat| + q sigma); 0 when both terms vanish.
  double ratio = 0.0;
};

// Splits an active constraint into its nominal part m_hat, measured in the
// row's units (unconditional margin for the constant form, conditional
// margin m_c(z*) for the conditional form, 0 if never recommended), and the
// uncertainty displacement q sigma. Throws InputError if c is not active.
BottleneckClass classify_bottleneck(const Game& game,
                                    const CcceSolution& solution,
                                    const UncertaintyModel& model,
                                    const DeviationConstraintId& c);

}  // namespace ccce
