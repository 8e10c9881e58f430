#include "tripmatch/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tripmatch/error.hpp"

namespace tripmatch {

std::size_t LinearProgram::add_variable(double cost, std::string name) {
  objective.push_back(cost);
  if (!name.empty() || !variable_names.empty()) {
    variable_names.resize(objective.size() - 1);
    variable_names.push_back(std::move(name));
  }
  return objective.size() - 1;
}

std::size_t LinearProgram::add_row(std::vector<Term> terms, Relation relation, double rhs,
                                   std::string name) {
  rows.push_back(Row{std::move(terms), relation, rhs, std::move(name)});
  return rows.size() - 1;
}

void LinearProgram::validate() const {
  if (objective.empty()) throw InvalidArgument("linear program has no variables");
  for (double c : objective) {
    if (!std::isfinite(c)) throw InvalidArgument("non-finite objective coefficient");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (!std::isfinite(row.rhs)) {
      throw InvalidArgument("row " + std::to_string(r) + ": non-finite rhs");
    }
    for (const Term& t : row.terms) {
      if (t.var >= objective.size()) {
        throw InvalidArgument("row " + std::to_string(r) + ": variable index out of range");
      }
      if (!std::isfinite(t.coef)) {
        throw InvalidArgument("row " + std::to_string(r) + ": non-finite coefficient");
      }
    }
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using DenseVector = Eigen::VectorXd;

// One product-form update of the basis inverse.
struct Eta {
  int row = 0;
  double pivot = 1.0;
  std::vector<std::pair<int, double>> others;
};

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options) {
    build_standard_form();
    max_iterations_ = opt_.max_iterations != 0
                          ? opt_.max_iterations
                          : 50 * (rows_ + cols_) + 1000;
  }

  LpSolution solve();

 private:
  enum class PhaseResult { kOptimal, kUnbounded };

  void build_standard_form();
  void refactor();
  void recompute_basic_values();
  DenseVector ftran(std::size_t col) const;
  DenseVector btran(DenseVector v) const;
  DenseVector basic_costs(const std::vector<double>& costs) const;
  double reduced_cost(std::size_t col, const DenseVector& y,
                      const std::vector<double>& costs) const;
  PhaseResult run_phase(const std::vector<double>& costs);
  void pivot(std::size_t row, std::size_t col, const DenseVector& alpha);
  void drive_out_artificials();

  bool is_artificial(std::size_t col) const { return col >= first_artificial_; }

  const LinearProgram& lp_;
  SimplexOptions opt_;

  std::size_t rows_ = 0;
  std::size_t structurals_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> row_sign_;  // +1 or -1 applied to each original row
  DenseVector rhs_;
  // Column-compressed constraint matrix over structurals, slacks, artificials.
  std::vector<std::size_t> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;

  std::vector<std::size_t> head_;      // basic column of each row
  std::vector<long> basis_row_;        // row of a basic column, -1 if nonbasic
  std::vector<bool> may_enter_;
  DenseVector x_basic_;

  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;

  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
  std::size_t degenerate_run_ = 0;
};

void RevisedSimplex::build_standard_form() {
  rows_ = lp_.row_count();
  structurals_ = lp_.variable_count();

  // Normalise each row to rhs >= 0. A >= row with zero rhs is flipped to a
  // <= row so that its slack can start in the basis.
  std::vector<Relation> rel(rows_);
  row_sign_.assign(rows_, 1.0);
  rhs_.resize(static_cast<Eigen::Index>(rows_));
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto& row = lp_.rows[r];
    rel[r] = row.relation;
    const bool flip = row.rhs < 0.0 || (row.rhs == 0.0 && row.relation == Relation::kGreaterEqual);
    if (flip) {
      row_sign_[r] = -1.0;
      if (rel[r] == Relation::kLessEqual) {
        rel[r] = Relation::kGreaterEqual;
      } else if (rel[r] == Relation::kGreaterEqual) {
        rel[r] = Relation::kLessEqual;
      }
    }
    rhs_[static_cast<Eigen::Index>(r)] = row_sign_[r] * row.rhs;
  }

  // Structural columns from the row-wise terms.
  std::vector<std::vector<std::pair<int, double>>> by_col(structurals_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& t : lp_.rows[r].terms) {
      if (t.coef != 0.0) by_col[t.var].emplace_back(static_cast<int>(r), row_sign_[r] * t.coef);
    }
  }
  col_start_.push_back(0);
  for (auto& col : by_col) {
    std::sort(col.begin(), col.end());
    // Merge repeated mentions of one variable in a row.
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (!col_row_.empty() && col_start_.back() < col_row_.size() &&
          col_row_.back() == col[k].first) {
        col_val_.back() += col[k].second;
      } else {
        col_row_.push_back(col[k].first);
        col_val_.push_back(col[k].second);
      }
    }
    col_start_.push_back(col_row_.size());
  }

  head_.assign(rows_, 0);
  std::vector<long> needs_artificial;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (rel[r] == Relation::kEqual) {
      needs_artificial.push_back(static_cast<long>(r));
      continue;
    }
    const double sign = rel[r] == Relation::kLessEqual ? 1.0 : -1.0;
    col_row_.push_back(static_cast<int>(r));
    col_val_.push_back(sign);
    col_start_.push_back(col_row_.size());
    if (sign > 0.0) {
      head_[r] = col_start_.size() - 2;
    } else {
      needs_artificial.push_back(static_cast<long>(r));
    }
  }
  first_artificial_ = col_start_.size() - 1;
  for (long r : needs_artificial) {
    col_row_.push_back(static_cast<int>(r));
    col_val_.push_back(1.0);
    col_start_.push_back(col_row_.size());
    head_[static_cast<std::size_t>(r)] = col_start_.size() - 2;
  }
  cols_ = col_start_.size() - 1;

  basis_row_.assign(cols_, -1);
  for (std::size_t r = 0; r < rows_; ++r) basis_row_[head_[r]] = static_cast<long>(r);
  may_enter_.assign(cols_, true);
}

void RevisedSimplex::refactor() {
  etas_.clear();
  if (rows_ == 0) return;
  std::vector<Eigen::Triplet<double, int>> triplets;
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::size_t c = head_[r];
    for (std::size_t k = col_start_[c]; k < col_start_[c + 1]; ++k) {
      triplets.emplace_back(col_row_[k], static_cast<int>(r), col_val_[k]);
    }
  }
  SparseMatrix basis(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(rows_));
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  if (lu_.info() != Eigen::Success) {
    throw Error("simplex basis became singular: " + lu_.lastErrorMessage());
  }
}

void RevisedSimplex::recompute_basic_values() {
  if (rows_ == 0) {
    x_basic_.resize(0);
    return;
  }
  x_basic_ = lu_.solve(rhs_);
  for (auto& v : x_basic_) {
    if (std::abs(v) < opt_.feasibility_tol * 1e-3) v = 0.0;
  }
}

DenseVector RevisedSimplex::ftran(std::size_t col) const {
  DenseVector a = DenseVector::Zero(static_cast<Eigen::Index>(rows_));
  for (std::size_t k = col_start_[col]; k < col_start_[col + 1]; ++k) a[col_row_[k]] = col_val_[k];
  DenseVector x = lu_.solve(a);
  for (const Eta& eta : etas_) {
    const double xr = x[eta.row] / eta.pivot;
    if (xr != 0.0) {
      for (const auto& [i, d] : eta.others) x[i] -= d * xr;
    }
    x[eta.row] = xr;
  }
  return x;
}

DenseVector RevisedSimplex::btran(DenseVector v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[it->row];
    for (const auto& [i, d] : it->others) acc -= v[i] * d;
    v[it->row] = acc / it->pivot;
  }
  return lu_.transpose().solve(v);
}

DenseVector RevisedSimplex::basic_costs(const std::vector<double>& costs) const {
  DenseVector cb(static_cast<Eigen::Index>(rows_));
  for (std::size_t r = 0; r < rows_; ++r) cb[static_cast<Eigen::Index>(r)] = costs[head_[r]];
  return cb;
}

double RevisedSimplex::reduced_cost(std::size_t col, const DenseVector& y,
                                    const std::vector<double>& costs) const {
  double d = costs[col];
  for (std::size_t k = col_start_[col]; k < col_start_[col + 1]; ++k) d -= y[col_row_[k]] * col_val_[k];
  return d;
}

void RevisedSimplex::pivot(std::size_t row, std::size_t col, const DenseVector& alpha) {
  Eta eta;
  eta.row = static_cast<int>(row);
  eta.pivot = alpha[static_cast<Eigen::Index>(row)];
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (static_cast<std::size_t>(i) != row && alpha[i] != 0.0) {
      eta.others.emplace_back(static_cast<int>(i), alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
  basis_row_[head_[row]] = -1;
  head_[row] = col;
  basis_row_[col] = static_cast<long>(row);
}

RevisedSimplex::PhaseResult RevisedSimplex::run_phase(const std::vector<double>& costs) {
  bool fresh = false;
  for (;;) {
    if (etas_.size() >= opt_.refactor_interval) {
      refactor();
      recompute_basic_values();
    }
    fresh = fresh && etas_.empty();
    const DenseVector y = btran(basic_costs(costs));

    // Pricing: Dantzig normally, Bland during degenerate stalls.
    const bool bland = degenerate_run_ >= opt_.degenerate_switch;
    std::size_t entering = cols_;
    double best = -opt_.optimality_tol;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (basis_row_[c] >= 0 || !may_enter_[c]) continue;
      const double d = reduced_cost(c, y, costs);
      if (d < best) {
        entering = c;
        if (bland) break;
        best = d;
      }
    }
    if (entering == cols_) {
      if (etas_.empty() || fresh) return PhaseResult::kOptimal;
      // Confirm optimality against a fresh factorisation.
      refactor();
      recompute_basic_values();
      fresh = true;
      continue;
    }
    fresh = false;

    if (++iterations_ > max_iterations_) {
      throw NonConvergenceError("simplex iteration cap of " + std::to_string(max_iterations_) +
                                " reached");
    }

    const DenseVector alpha = ftran(entering);

    // Ratio test (two-pass Harris; exact minimum with smallest-index ties
    // under Bland).
    std::size_t leaving = rows_;
    if (bland) {
      double min_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = alpha[static_cast<Eigen::Index>(r)];
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(0.0, x_basic_[static_cast<Eigen::Index>(r)]) / a;
        if (ratio < min_ratio - 1e-15 ||
            (ratio <= min_ratio + 1e-15 && leaving < rows_ && head_[r] < head_[leaving])) {
          min_ratio = std::min(min_ratio, ratio);
          leaving = r;
        }
      }
    } else {
      double bound = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = alpha[static_cast<Eigen::Index>(r)];
        if (a <= opt_.pivot_tol) continue;
        bound = std::min(bound, (x_basic_[static_cast<Eigen::Index>(r)] + opt_.feasibility_tol) / a);
      }
      double best_pivot = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = alpha[static_cast<Eigen::Index>(r)];
        if (a <= opt_.pivot_tol) continue;
        if (x_basic_[static_cast<Eigen::Index>(r)] / a <= bound && a > best_pivot) {
          best_pivot = a;
          leaving = r;
        }
      }
    }
    if (leaving == rows_) return PhaseResult::kUnbounded;

    const auto lr = static_cast<Eigen::Index>(leaving);
    const double theta = std::max(0.0, x_basic_[lr] / alpha[lr]);
    x_basic_ -= theta * alpha;
    x_basic_[lr] = theta;
    if (theta <= opt_.feasibility_tol) {
      ++degenerate_run_;
    } else {
      degenerate_run_ = 0;
    }
    pivot(leaving, entering, alpha);
  }
}

void RevisedSimplex::drive_out_artificials() {
  for (std::size_t r = 0; r < rows_; ++r) {
    if (!is_artificial(head_[r])) continue;
    DenseVector unit = DenseVector::Zero(static_cast<Eigen::Index>(rows_));
    unit[static_cast<Eigen::Index>(r)] = 1.0;
    const DenseVector rho = btran(unit);
    std::size_t best_col = cols_;
    double best_val = 1e-7;
    for (std::size_t c = 0; c < first_artificial_; ++c) {
      if (basis_row_[c] >= 0) continue;
      double v = 0.0;
      for (std::size_t k = col_start_[c]; k < col_start_[c + 1]; ++k) v += rho[col_row_[k]] * col_val_[k];
      if (std::abs(v) > best_val) {
        best_val = std::abs(v);
        best_col = c;
      }
    }
    // No candidate: the row is redundant and the artificial stays at zero.
    if (best_col == cols_) continue;
    const DenseVector alpha = ftran(best_col);
    const auto lr = static_cast<Eigen::Index>(r);
    const double theta = x_basic_[lr] / alpha[lr];
    x_basic_ -= theta * alpha;
    x_basic_[lr] = theta;
    pivot(r, best_col, alpha);
    if (etas_.size() >= opt_.refactor_interval) {
      refactor();
      recompute_basic_values();
    }
  }
}

LpSolution RevisedSimplex::solve() {
  LpSolution sol;
  refactor();
  recompute_basic_values();

  const double scale = std::max(1.0, rhs_.size() > 0 ? rhs_.cwiseAbs().maxCoeff() : 0.0);

  if (first_artificial_ < cols_) {
    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t c = first_artificial_; c < cols_; ++c) phase1[c] = 1.0;
    run_phase(phase1);  // bounded below by zero
    refactor();
    recompute_basic_values();
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (is_artificial(head_[r])) infeasibility += std::max(0.0, x_basic_[static_cast<Eigen::Index>(r)]);
    }
    if (infeasibility > std::max(1e-7 * scale, opt_.feasibility_tol)) {
      sol.status = LpStatus::kInfeasible;
      sol.iterations = iterations_;
      return sol;
    }
    for (std::size_t c = first_artificial_; c < cols_; ++c) may_enter_[c] = false;
    drive_out_artificials();
    refactor();
    recompute_basic_values();
  }

  std::vector<double> costs(cols_, 0.0);
  std::copy(lp_.objective.begin(), lp_.objective.end(), costs.begin());
  degenerate_run_ = 0;
  if (run_phase(costs) == PhaseResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    sol.iterations = iterations_;
    return sol;
  }
  refactor();
  recompute_basic_values();

  sol.status = LpStatus::kOptimal;
  sol.iterations = iterations_;
  sol.primal.assign(structurals_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (head_[r] < structurals_) {
      const double v = x_basic_[static_cast<Eigen::Index>(r)];
      sol.primal[head_[r]] = std::abs(v) <= opt_.feasibility_tol ? 0.0 : v;
    }
  }
  sol.dual.assign(rows_, 0.0);
  if (rows_ > 0) {
    const DenseVector y = btran(basic_costs(costs));
    for (std::size_t r = 0; r < rows_; ++r) sol.dual[r] = row_sign_[r] * y[static_cast<Eigen::Index>(r)];
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < structurals_; ++j) sol.objective += lp_.objective[j] * sol.primal[j];
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  RevisedSimplex simplex(lp, options);
  return simplex.solve();
}

}  // namespace tripmatch
