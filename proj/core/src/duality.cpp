#include <cmath>

#include "gridclear/lp.hpp"

namespace gridclear {
namespace {

void require_optimal(const LpSolution& sol, const char* what) {
  if (sol.status != LpStatus::kOptimal) {
    throw std::invalid_argument(std::string(what) + ": solution status is " +
                                std::string(to_string(sol.status)) +
                                ", expected optimal");
  }
}

}  // namespace

StrongDualityReport check_strong_duality(const LinearProgram& lp,
                                         const LpSolution& sol, double tol) {
  require_optimal(sol, "check_strong_duality");
  const LinearProgram dual = build_dual(lp);

  StrongDualityReport report;
  report.primal_objective = objective_value(lp, sol.primal);
  report.dual_objective = objective_value(dual, sol.dual);
  report.gap_abs = std::abs(report.primal_objective - report.dual_objective);
  report.gap_rel = report.gap_abs / (1.0 + std::abs(report.primal_objective));
  report.pass = report.gap_rel <= tol;
  return report;
}

ComplementarySlacknessReport check_complementary_slackness(
    const LinearProgram& lp, const LpSolution& sol, double tol) {
  require_optimal(sol, "check_complementary_slackness");

  ComplementarySlacknessReport report;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Row& r = lp.rows[i];
    const double residual =
        std::abs(sol.dual.at(i) * (row_activity(r, sol.primal) - r.rhs));
    if (i == 0 || residual > report.max_row_residual) {
      report.max_row_residual = residual;
      report.worst_row = r.name;
    }
  }

  std::vector<double> reduced(lp.columns.size());
  for (std::size_t j = 0; j < lp.columns.size(); ++j) reduced[j] = lp.columns[j].cost;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    for (const Term& t : lp.rows[i].terms) reduced[t.column] -= sol.dual.at(i) * t.value;
  }
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const double residual = std::abs(reduced[j] * sol.primal.at(j));
    if (j == 0 || residual > report.max_col_residual) {
      report.max_col_residual = residual;
      report.worst_column = lp.columns[j].name;
    }
  }

  const double objective = objective_value(lp, sol.primal);
  report.threshold = tol * (1.0 + std::abs(objective));
  report.pass = report.max_row_residual <= report.threshold &&
                report.max_col_residual <= report.threshold;
  return report;
}

}  // namespace gridclear
