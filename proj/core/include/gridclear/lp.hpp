#pragma once

// Linear programs in the general primal form (mixed row senses and column
// sign restrictions), their mechanical duals, a dense two-phase simplex
// solver, and verifiers for the duality relationships between the two.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridclear {

enum class Direction { kMinimize, kMaximize };
enum class Sense { kGe, kLe, kEq };
enum class Sign { kNonneg, kNonpos, kFree };

std::string_view to_string(Direction d);
std::string_view to_string(Sense s);
std::string_view to_string(Sign s);

struct Column {
  std::string name;
  Sign sign = Sign::kNonneg;
  double cost = 0.0;
};

struct Term {
  std::size_t column = 0;
  double value = 0.0;
};

struct Row {
  std::string name;
  Sense sense = Sense::kEq;
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// An LP of the form  min/max c'x  s.t.  a_i'x {>=,<=,=} b_i,  x_j {>=0,<=0,free}.
///
/// Plain value type. Names are not checked on insertion; call validate()
/// (build_dual and solve do) to get the full list of problems at once.
struct LinearProgram {
  Direction direction = Direction::kMinimize;
  std::vector<Column> columns;
  std::vector<Row> rows;

  std::size_t add_column(std::string name, Sign sign, double cost);
  std::size_t add_row(std::string name, Sense sense, std::vector<Term> terms,
                      double rhs);

  std::optional<std::size_t> find_column(std::string_view name) const;
  std::optional<std::size_t> find_row(std::string_view name) const;

  /// Coefficient of `column` in `row`, summing duplicate terms.
  double coefficient(std::size_t row, std::size_t column) const;
};

class LpValidationError : public std::runtime_error {
 public:
  explicit LpValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept {
    return problems_;
  }

 private:
  std::vector<std::string> problems_;
};

/// Every violated LinearProgram invariant, one message per offending
/// row/column. Empty when well formed.
std::vector<std::string> validation_problems(const LinearProgram& lp);
void validate(const LinearProgram& lp);

/// The dual of `lp` per the standard primal/dual correspondence table.
/// Dual columns are named after the primal rows they price, dual rows after
/// the primal columns, so build_dual(build_dual(lp)) == lp.
LinearProgram build_dual(const LinearProgram& lp);

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string_view to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;        // per column
  std::vector<double> dual;          // per row
  std::vector<double> reduced_cost;  // per column, c_j - p'A_j
  // Rows carrying a nonzero phase-one multiplier when infeasible.
  std::vector<std::size_t> infeasible_rows;
  // Entering column with no blocking row when unbounded.
  std::optional<std::size_t> unbounded_column;
  std::size_t iterations = 0;
};

struct SolveOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  std::size_t max_iterations = 200000;
  std::size_t refactor_interval = 64;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-phase dense simplex with Bland's rule. Duals and primal values are
/// recomputed from a fresh factorization of the final basis.
LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

// --- evaluation helpers ----------------------------------------------------

double row_activity(const Row& row, const std::vector<double>& x);
double objective_value(const LinearProgram& lp, const std::vector<double>& x);

/// Largest violation of any row sense or column sign restriction at x.
struct Violation {
  double amount = 0.0;
  std::string where;  // row or column name, empty when feasible
};
Violation max_violation(const LinearProgram& lp, const std::vector<double>& x);

/// Largest violation of the dual sign table by `dual` for the given primal.
Violation dual_sign_violation(const LinearProgram& lp,
                              const std::vector<double>& dual);

// --- duality verifiers -----------------------------------------------------

inline constexpr double kDefaultDualityTol = 1e-6;

struct StrongDualityReport {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap_abs = 0.0;
  double gap_rel = 0.0;
  bool pass = false;
};

/// Compares c'x against the objective of build_dual(lp) evaluated at the
/// solution's duals. gap_rel = gap_abs / (1 + |c'x|).
StrongDualityReport check_strong_duality(const LinearProgram& lp,
                                         const LpSolution& sol,
                                         double tol = kDefaultDualityTol);

struct ComplementarySlacknessReport {
  double max_row_residual = 0.0;
  double max_col_residual = 0.0;
  std::string worst_row;
  std::string worst_column;
  double threshold = 0.0;
  bool pass = false;
};

ComplementarySlacknessReport check_complementary_slackness(
    const LinearProgram& lp, const LpSolution& sol,
    double tol = kDefaultDualityTol);

}  // namespace gridclear
