#include "ccce/ccce_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccce/errors.hpp"

namespace ccce {

const char* to_string(ConstraintForm form) {
  switch (form) {
    case ConstraintForm::kConstantMargin:
      return "constant";
    case ConstraintForm::kConditionalScaled:
      return "conditional";
  }
  return "unknown";
}

ConstraintForm parse_constraint_form(std::string_view text) {
  if (text == "constant") return ConstraintForm::kConstantMargin;
  if (text == "conditional") return ConstraintForm::kConditionalScaled;
  throw InputError("unknown constraint form '" + std::string(text) +
                   "' (expected constant or conditional)");
}

UncertaintyModel::UncertaintyModel(std::vector<double> sigmas_in,
                                   Confidence confidence_in,
                                   ConstraintForm form_in)
    : sigmas(std::move(sigmas_in)), confidence(confidence_in), form(form_in) {
  for (double s : sigmas) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InputError("noise levels must be finite and nonnegative");
    }
  }
}

double UncertaintyModel::margin(int agent) const {
  return confidence.quantile() * sigmas.at(agent);
}

namespace {

void check_model(const Game& game, const UncertaintyModel& model) {
  if (static_cast<int>(model.sigmas.size()) != game.num_agents()) {
    throw InputError("sigma vector length does not match agent count");
  }
}

}  // namespace

std::vector<double> constraint_sigmas(const Game& game,
                                      const UncertaintyModel& model) {
  check_model(game, model);
  std::vector<double> out;
  for (const auto& c : deviation_constraints(game)) {
    out.push_back(model.sigmas[c.agent]);
  }
  return out;
}

std::vector<ConstraintRow> build_constraints(const Game& game,
                                             const UncertaintyModel& model) {
  const auto sigmas = constraint_sigmas(game, model);
  return build_constraints(game, model, sigmas);
}

std::vector<ConstraintRow> build_constraints(
    const Game& game, const UncertaintyModel& model,
    std::span<const double> sigma_per_constraint) {
  check_model(game, model);
  const auto ids = deviation_constraints(game);
  if (sigma_per_constraint.size() != ids.size()) {
    throw InputError("per-constraint sigma vector has wrong length");
  }
  const double q = model.confidence.quantile();
  std::vector<ConstraintRow> rows;
  rows.reserve(ids.size());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const auto& c = ids[r];
    if (sigma_per_constraint[r] < 0.0) throw InputError("negative sigma");
    const double margin = q * sigma_per_constraint[r];
    ConstraintRow row{c, std::vector<double>(game.num_profiles(), 0.0), 0.0};
    const auto costs = game.costs(c.agent);
    for (ProfileIndex k : game.profiles_with(c.agent, c.recommended)) {
      const ProfileIndex dev = game.with_action(k, c.agent, c.deviation);
      row.coefficients[k] = costs[k] - costs[dev];
      if (model.form == ConstraintForm::kConditionalScaled) {
        row.coefficients[k] += margin;
      }
    }
    if (model.form == ConstraintForm::kConstantMargin) row.rhs = -margin;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t CcceSolution::index_of(const DeviationConstraintId& c) const {
  const auto it = std::lower_bound(constraints.begin(), constraints.end(), c);
  if (it == constraints.end() || *it != c) {
    throw InputError("unknown deviation constraint");
  }
  return static_cast<std::size_t>(it - constraints.begin());
}

CcceSolution solve_ccce(const Game& game, const UncertaintyModel& model,
                        const SystemWeights& weights) {
  const auto sigmas = constraint_sigmas(game, model);
  return solve_ccce(game, model, weights, sigmas);
}

CcceSolution solve_ccce(const Game& game, const UncertaintyModel& model,
                        const SystemWeights& weights,
                        std::span<const double> sigma_per_constraint) {
  if (static_cast<int>(weights.size()) != game.num_agents()) {
    throw InputError("weight vector length does not match agent count");
  }
  const auto rows = build_constraints(game, model, sigma_per_constraint);
  const auto num_profiles = static_cast<Eigen::Index>(game.num_profiles());
  const auto num_rows = static_cast<Eigen::Index>(rows.size());

  lp::LinearProgram program;
  program.objective.resize(num_profiles);
  for (Eigen::Index k = 0; k < num_profiles; ++k) {
    program.objective(k) = weighted_cost(game, weights, k);
  }
  program.ineq_matrix.resize(num_rows, num_profiles);
  program.ineq_rhs.resize(num_rows);
  for (Eigen::Index r = 0; r < num_rows; ++r) {
    program.ineq_matrix.row(r) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[r].coefficients.data(),
                                             num_profiles);
    program.ineq_rhs(r) = rows[r].rhs;
  }
  program.eq_matrix = Eigen::MatrixXd::Ones(1, num_profiles);
  program.eq_rhs = Eigen::VectorXd::Ones(1);

  auto lp_solution = lp::solve(program);
  if (lp_solution.status != lp::Status::kOptimal) {
    throw InfeasibleError(model.confidence.alpha(), model.sigmas);
  }

  CcceSolution out;
  std::vector<double> z(lp_solution.primal.data(),
                        lp_solution.primal.data() + num_profiles);
  out.z_star = JointDistribution(std::move(z));
  out.j_sys_star = lp_solution.objective_value;
  out.lambda_agent.assign(game.num_agents(), 0.0);
  const Eigen::VectorXd slack =
      program.ineq_rhs - program.ineq_matrix * lp_solution.primal;
  for (Eigen::Index r = 0; r < num_rows; ++r) {
    const auto& id = rows[r].id;
    const double lambda = lp_solution.ineq_duals(r);
    out.constraints.push_back(id);
    out.duals.push_back(lambda);
    out.slacks.push_back(slack(r));
    const bool is_active = slack(r) <= CcceSolution::kActiveTolerance;
    out.active.push_back(is_active);
    if (is_active) out.active_set.push_back(static_cast<std::size_t>(r));
    out.lambda_agent[id.agent] += lambda;
  }
  out.degenerate = lp_solution.degenerate;
  out.program = std::move(program);
  out.lp_solution = std::move(lp_solution);
  return out;
}

const char* to_string(BottleneckKind kind) {
  return kind == BottleneckKind::kStructural ? "structural" : "informational";
}

BottleneckClass classify_bottleneck(const Game& game,
                                    const CcceSolution& solution,
                                    const UncertaintyModel& model,
                                    const DeviationConstraintId& c) {
  const std::size_t idx = solution.index_of(c);
  if (!solution.active[idx]) {
    throw InputError("constraint is not active at the optimum");
  }
  const double displacement = std::abs(model.margin(c.agent));
  // Nominal part in the row's own units.
  const double nominal =
      model.form == ConstraintForm::kConstantMargin
          ? std::abs(unconditional_margin(game, solution.z_star, c))
          : std::abs(nominal_margin(game, solution.z_star, c).value_or(0.0));
  BottleneckClass out;
  const double denom = nominal + displacement;
  out.ratio = denom > 0.0 ? displacement / denom : 0.0;
  // A tight row has |m_hat| == q sigma up to roundoff; count that as
  // informational.
  out.kind = out.ratio >= 0.5 - 1e-9 ? BottleneckKind::kInformational
                                     : BottleneckKind::kStructural;
  return out;
}

}  // namespace ccce
