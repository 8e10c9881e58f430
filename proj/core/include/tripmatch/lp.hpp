#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tripmatch {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

// min c.x  s.t.  rows,  x >= 0.
struct LinearProgram {
  struct Term {
    std::size_t var = 0;
    double coef = 0.0;
  };
  struct Row {
    std::vector<Term> terms;
    Relation relation = Relation::kEqual;
    double rhs = 0.0;
    std::string name;
  };

  std::vector<double> objective;
  std::vector<std::string> variable_names;  // optional, parallel to objective
  std::vector<Row> rows;

  std::size_t variable_count() const noexcept { return objective.size(); }
  std::size_t row_count() const noexcept { return rows.size(); }

  std::size_t add_variable(double cost, std::string name = {});
  std::size_t add_row(std::vector<Term> terms, Relation relation, double rhs,
                      std::string name = {});

  // Throws InvalidArgument on non-finite data, bad indices or no variables.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> primal;
  // Sensitivity of the optimal objective to each row's rhs: >= 0 on a >= row,
  // <= 0 on a <= row, free on an = row.
  std::vector<double> dual;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::size_t max_iterations = 0;  // 0 picks a cap from the problem size
  std::size_t refactor_interval = 64;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_switch = 30;
};

// Two-phase revised simplex. Dantzig pricing, with Bland's smallest-index
// rule taking over during degenerate stalls so the method cannot cycle.
// Throws NonConvergenceError when the iteration cap is reached.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

// CPLEX LP text format, for cross-checking against external solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& out);

}  // namespace tripmatch
