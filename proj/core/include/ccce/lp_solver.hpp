#pragma once

#include <Eigen/Dense>

namespace ccce::lp {

// minimize objective . z
// s.t.     ineq_matrix z <= ineq_rhs
//          eq_matrix z    = eq_rhs
//          z >= 0            (when nonneg; otherwise z is free)
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  bool nonneg = true;

  Eigen::Index num_vars() const { return objective.size(); }
  // Throws InputError on inconsistent dimensions or non-finite data.
  void validate() const;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);

// Dual sign convention, used everywhere downstream:
//   ineq_duals[c] = lambda_c >= 0 and dJ*/d ineq_rhs[c] = -lambda_c,
//   eq_duals[r]   = mu_r (free)   and dJ*/d eq_rhs[r]   = +mu_r,
//   reduced costs objective + ineq^T lambda - eq^T mu are >= 0.
// So lambda_c is the cost of tightening row c by one unit.
struct LpSolution {
  Status status = Status::kInfeasible;
  Eigen::VectorXd primal;
  double objective_value = 0.0;
  Eigen::VectorXd ineq_duals;
  Eigen::VectorXd eq_duals;
  // Some basic variable sits within 1e-9 of its bound: duals may not be
  // unique and derivatives built from them are one-sided.
  bool degenerate = false;
  int iterations = 0;
};

// Two-phase revised simplex with a dense basis inverse. Dantzig pricing,
// switching to Bland's rule after 3 * (rows + cols) iterations. Throws
// InputError for malformed programs and NumericalError when the iteration
// limit is hit.
LpSolution solve(const LinearProgram& lp);

namespace tolerance {
inline constexpr double kPrimal = 1e-8;
inline constexpr double kNonneg = 1e-9;
inline constexpr double kDual = 1e-8;
inline constexpr double kComplementarity = 1e-7;
inline constexpr double kGap = 1e-8;
inline constexpr double kDegenerate = 1e-9;
}  // namespace tolerance

struct CertificateReport {
  double ineq_violation = 0.0;   // max (A z - b)_+
  double eq_violation = 0.0;     // max |A_eq z - b_eq|
  double nonneg_violation = 0.0; // max (-z)_+
  double dual_violation = 0.0;   // max (-reduced cost)_+, (-lambda)_+
  double complementarity = 0.0;  // max lambda_c * (b_c - A_c z)
  double duality_gap = 0.0;      // |primal - dual| / (1 + |primal|)

  bool ok() const;
};

CertificateReport check_certificates(const LinearProgram& lp,
                                     const LpSolution& solution);

}  // namespace ccce::lp
