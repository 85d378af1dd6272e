#include "ccce/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ccce/errors.hpp"

namespace ccce::lp {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPivotTolerance = 1e-7;
constexpr double kHarrisTolerance = 1e-10;
constexpr double kOptimalityTolerance = 1e-10;
constexpr double kPhaseOneTolerance = 1e-9;
constexpr int kRefactorInterval = 32;

enum class ColumnKind { kStructural, kSlack, kArtificial };

// Equality-form working problem: A x = b, x >= 0, b >= 0.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp);

  LpSolution run();

 private:
  enum class Outcome { kOptimal, kUnbounded };

  Outcome iterate(const VectorXd& cost, bool allow_artificial);
  void refactor();
  void pivot(Index row, Index enter, const VectorXd& direction);
  void drive_out_artificials();
  VectorXd basic_costs(const VectorXd& cost) const;
  bool eligible(Index j, bool allow_artificial) const;

  const LinearProgram& lp_;
  Index num_struct_ = 0;  // structural columns (doubled when z is free)
  Index m_ = 0;
  Index num_ineq_ = 0;
  MatrixXd a_;
  VectorXd b_;
  VectorXd cost_;  // phase-two cost over all columns
  std::vector<ColumnKind> kind_;
  std::vector<double> row_sign_;
  std::vector<Index> basis_;
  std::vector<Index> position_;  // column -> basis row or -1
  std::vector<bool> redundant_;
  MatrixXd binv_;
  VectorXd xb_;
  int iterations_ = 0;
  int since_refactor_ = 0;
  int bland_after_ = 0;
  int max_iterations_ = 0;
};

Simplex::Simplex(const LinearProgram& lp) : lp_(lp) {
  const Index n = lp.num_vars();
  num_struct_ = lp.nonneg ? n : 2 * n;
  num_ineq_ = lp.ineq_matrix.rows();
  const Index num_eq = lp.eq_matrix.rows();
  m_ = num_ineq_ + num_eq;

  row_sign_.assign(m_, 1.0);
  std::vector<bool> needs_artificial(m_, false);
  for (Index r = 0; r < num_ineq_; ++r) {
    if (lp.ineq_rhs(r) < 0.0) {
      row_sign_[r] = -1.0;
      needs_artificial[r] = true;
    }
  }
  for (Index r = 0; r < num_eq; ++r) {
    if (lp.eq_rhs(r) < 0.0) row_sign_[num_ineq_ + r] = -1.0;
    needs_artificial[num_ineq_ + r] = true;
  }
  const Index num_art =
      std::count(needs_artificial.begin(), needs_artificial.end(), true);
  const Index cols = num_struct_ + num_ineq_ + num_art;

  a_ = MatrixXd::Zero(m_, cols);
  b_ = VectorXd::Zero(m_);
  cost_ = VectorXd::Zero(cols);
  kind_.assign(cols, ColumnKind::kStructural);

  for (Index r = 0; r < m_; ++r) {
    const bool is_ineq = r < num_ineq_;
    const auto row = is_ineq ? lp.ineq_matrix.row(r)
                             : lp.eq_matrix.row(r - num_ineq_);
    const double s = row_sign_[r];
    for (Index j = 0; j < n; ++j) {
      a_(r, j) = s * row(j);
      if (!lp.nonneg) a_(r, n + j) = -s * row(j);
    }
    b_(r) = s * (is_ineq ? lp.ineq_rhs(r) : lp.eq_rhs(r - num_ineq_));
  }
  for (Index j = 0; j < n; ++j) {
    cost_(j) = lp.objective(j);
    if (!lp.nonneg) cost_(n + j) = -lp.objective(j);
  }
  for (Index r = 0; r < num_ineq_; ++r) {
    a_(r, num_struct_ + r) = row_sign_[r];
    kind_[num_struct_ + r] = ColumnKind::kSlack;
  }

  basis_.assign(m_, -1);
  position_.assign(cols, -1);
  redundant_.assign(m_, false);
  Index next_art = num_struct_ + num_ineq_;
  for (Index r = 0; r < m_; ++r) {
    if (needs_artificial[r]) {
      a_(r, next_art) = 1.0;
      kind_[next_art] = ColumnKind::kArtificial;
      basis_[r] = next_art++;
    } else {
      basis_[r] = num_struct_ + r;
    }
    position_[basis_[r]] = r;
  }

  bland_after_ = static_cast<int>(3 * (m_ + cols));
  max_iterations_ = static_cast<int>(50 * (m_ + cols)) + 1000;
  refactor();
}

bool Simplex::eligible(Index j, bool allow_artificial) const {
  return position_[j] < 0 &&
         (allow_artificial || kind_[j] != ColumnKind::kArtificial);
}

VectorXd Simplex::basic_costs(const VectorXd& cost) const {
  VectorXd cb(m_);
  for (Index r = 0; r < m_; ++r) cb(r) = cost(basis_[r]);
  return cb;
}

void Simplex::refactor() {
  if (m_ == 0) return;
  MatrixXd basis_matrix(m_, m_);
  for (Index r = 0; r < m_; ++r) basis_matrix.col(r) = a_.col(basis_[r]);
  Eigen::PartialPivLU<MatrixXd> lu(basis_matrix);
  binv_ = lu.inverse();
  xb_ = binv_ * b_;
  if (!xb_.allFinite()) throw NumericalError("basis became singular");
  since_refactor_ = 0;
}

void Simplex::pivot(Index row, Index enter, const VectorXd& direction) {
  const double u = direction(row);
  const double step = std::max(xb_(row), 0.0) / u;
  xb_ -= step * direction;
  xb_(row) = step;

  const Eigen::RowVectorXd pivot_row = binv_.row(row) / u;
  binv_ -= direction * pivot_row;
  binv_.row(row) = pivot_row;

  position_[basis_[row]] = -1;
  basis_[row] = enter;
  position_[enter] = row;

  ++iterations_;
  if (++since_refactor_ >= kRefactorInterval) refactor();
}

Simplex::Outcome Simplex::iterate(const VectorXd& cost, bool allow_artificial) {
  const Index cols = a_.cols();
  for (;;) {
    if (iterations_ >= max_iterations_) {
      throw NumericalError("simplex iteration limit (" +
                           std::to_string(max_iterations_) + ") exceeded");
    }
    const VectorXd y = binv_.transpose() * basic_costs(cost);
    const VectorXd reduced = cost - a_.transpose() * y;

    const bool bland = iterations_ >= bland_after_;
    Index enter = -1;
    double best = -kOptimalityTolerance;
    for (Index j = 0; j < cols; ++j) {
      if (!eligible(j, allow_artificial) || reduced(j) >= best) continue;
      enter = j;
      if (bland) break;
      best = reduced(j);
    }
    if (enter < 0) {
      // Confirm against a fresh factorization before declaring optimality.
      if (since_refactor_ == 0) return Outcome::kOptimal;
      refactor();
      continue;
    }

    const VectorXd direction = binv_ * a_.col(enter);
    // Harris two-pass ratio test: bound the step with a small feasibility
    // allowance, then take the largest pivot among rows within that bound.
    double bound = std::numeric_limits<double>::infinity();
    for (Index r = 0; r < m_; ++r) {
      if (direction(r) > kPivotTolerance && !redundant_[r]) {
        bound = std::min(bound,
                         (std::max(xb_(r), 0.0) + kHarrisTolerance) / direction(r));
      }
    }
    Index leave = -1;
    for (Index r = 0; r < m_; ++r) {
      const double u = direction(r);
      if (u <= kPivotTolerance || redundant_[r]) continue;
      if (std::max(xb_(r), 0.0) / u > bound) continue;
      if (leave < 0) {
        leave = r;
      } else if (bland ? basis_[r] < basis_[leave] : u > direction(leave)) {
        leave = r;
      }
    }
    if (leave < 0) return Outcome::kUnbounded;
    pivot(leave, enter, direction);
  }
}

void Simplex::drive_out_artificials() {
  for (Index r = 0; r < m_; ++r) {
    if (kind_[basis_[r]] != ColumnKind::kArtificial) continue;
    const Eigen::RowVectorXd row = binv_.row(r) * a_;
    Index enter = -1;
    double best = kPivotTolerance;
    for (Index j = 0; j < a_.cols(); ++j) {
      if (!eligible(j, false)) continue;
      if (std::abs(row(j)) > best) {
        best = std::abs(row(j));
        enter = j;
      }
    }
    if (enter < 0) {
      redundant_[r] = true;
      continue;
    }
    xb_(r) = 0.0;
    const VectorXd direction = binv_ * a_.col(enter);
    pivot(r, enter, direction);
  }
  refactor();
}

LpSolution Simplex::run() {
  LpSolution out;
  const Index n = lp_.num_vars();

  VectorXd phase_one = VectorXd::Zero(a_.cols());
  bool has_artificial = false;
  for (Index j = 0; j < a_.cols(); ++j) {
    if (kind_[j] == ColumnKind::kArtificial) {
      phase_one(j) = 1.0;
      has_artificial = true;
    }
  }
  if (has_artificial) {
    iterate(phase_one, true);
    double infeasibility = 0.0;
    for (Index r = 0; r < m_; ++r) {
      if (kind_[basis_[r]] == ColumnKind::kArtificial) {
        infeasibility += std::max(xb_(r), 0.0);
      }
    }
    const double scale = std::max(1.0, b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);
    if (infeasibility > kPhaseOneTolerance * scale) {
      out.status = Status::kInfeasible;
      out.iterations = iterations_;
      return out;
    }
    drive_out_artificials();
  }

  if (iterate(cost_, false) == Outcome::kUnbounded) {
    out.status = Status::kUnbounded;
    out.iterations = iterations_;
    return out;
  }

  refactor();
  VectorXd x = VectorXd::Zero(a_.cols());
  for (Index r = 0; r < m_; ++r) {
    if (redundant_[r]) continue;
    const double v = xb_(r);
    if (v < -tolerance::kNonneg) {
      throw NumericalError("final basis is primal infeasible");
    }
    x(basis_[r]) = std::max(v, 0.0);
    if (v <= tolerance::kDegenerate) out.degenerate = true;
  }
  const VectorXd y = binv_.transpose() * basic_costs(cost_);

  out.status = Status::kOptimal;
  out.iterations = iterations_;
  out.primal = x.head(n);
  if (!lp_.nonneg) out.primal -= x.segment(n, n);
  out.objective_value = lp_.objective.dot(out.primal);
  out.ineq_duals.resize(num_ineq_);
  for (Index r = 0; r < num_ineq_; ++r) {
    out.ineq_duals(r) = std::max(-row_sign_[r] * y(r), 0.0);
  }
  out.eq_duals.resize(m_ - num_ineq_);
  for (Index r = num_ineq_; r < m_; ++r) {
    out.eq_duals(r - num_ineq_) = row_sign_[r] * y(r);
  }
  return out;
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  const Index n = num_vars();
  if (n == 0) throw InputError("linear program has no variables");
  if (ineq_matrix.rows() > 0 && ineq_matrix.cols() != n) {
    throw InputError("inequality matrix has " +
                     std::to_string(ineq_matrix.cols()) + " columns, expected " +
                     std::to_string(n));
  }
  if (eq_matrix.rows() > 0 && eq_matrix.cols() != n) {
    throw InputError("equality matrix has " + std::to_string(eq_matrix.cols()) +
                     " columns, expected " + std::to_string(n));
  }
  if (ineq_rhs.size() != ineq_matrix.rows()) {
    throw InputError("inequality right-hand side length mismatch");
  }
  if (eq_rhs.size() != eq_matrix.rows()) {
    throw InputError("equality right-hand side length mismatch");
  }
  if (!objective.allFinite() || !ineq_matrix.allFinite() ||
      !ineq_rhs.allFinite() || !eq_matrix.allFinite() || !eq_rhs.allFinite()) {
    throw InputError("linear program contains non-finite entries");
  }
}

LpSolution solve(const LinearProgram& lp) {
  lp.validate();
  Simplex simplex(lp);
  return simplex.run();
}

bool CertificateReport::ok() const {
  return ineq_violation <= tolerance::kPrimal &&
         eq_violation <= tolerance::kPrimal &&
         nonneg_violation <= tolerance::kNonneg &&
         dual_violation <= tolerance::kDual &&
         complementarity <= tolerance::kComplementarity &&
         duality_gap <= tolerance::kGap;
}

CertificateReport check_certificates(const LinearProgram& lp,
                                     const LpSolution& s) {
  if (s.status != Status::kOptimal) {
    throw InputError("certificates exist only for optimal solutions");
  }
  CertificateReport rep;
  const VectorXd& z = s.primal;
  const Index m_ub = lp.ineq_matrix.rows();
  const Index m_eq = lp.eq_matrix.rows();

  VectorXd slack = lp.ineq_rhs;
  if (m_ub > 0) slack -= lp.ineq_matrix * z;
  for (Index r = 0; r < m_ub; ++r) {
    rep.ineq_violation = std::max(rep.ineq_violation, -slack(r));
    rep.dual_violation = std::max(rep.dual_violation, -s.ineq_duals(r));
    rep.complementarity =
        std::max(rep.complementarity, std::abs(s.ineq_duals(r) * slack(r)));
  }
  if (m_eq > 0) {
    rep.eq_violation = (lp.eq_matrix * z - lp.eq_rhs).cwiseAbs().maxCoeff();
  }
  if (lp.nonneg && z.size() > 0) {
    rep.nonneg_violation = std::max(0.0, -z.minCoeff());
  }

  VectorXd reduced = lp.objective;
  if (m_ub > 0) reduced += lp.ineq_matrix.transpose() * s.ineq_duals;
  if (m_eq > 0) reduced -= lp.eq_matrix.transpose() * s.eq_duals;
  for (Index j = 0; j < reduced.size(); ++j) {
    const double v = lp.nonneg ? -reduced(j) : std::abs(reduced(j));
    rep.dual_violation = std::max(rep.dual_violation, v);
  }

  double dual_objective = 0.0;
  if (m_ub > 0) dual_objective -= lp.ineq_rhs.dot(s.ineq_duals);
  if (m_eq > 0) dual_objective += lp.eq_rhs.dot(s.eq_duals);
  rep.duality_gap = std::abs(s.objective_value - dual_objective) /
                    (1.0 + std::abs(s.objective_value));
  return rep;
}

}  // namespace ccce::lp
