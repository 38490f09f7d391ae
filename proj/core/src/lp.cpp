#include "gridclear/lp.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace gridclear {

std::string_view to_string(Direction d) {
  return d == Direction::kMinimize ? "minimize" : "maximize";
}

std::string_view to_string(Sense s) {
  switch (s) {
    case Sense::kGe: return "ge";
    case Sense::kLe: return "le";
    case Sense::kEq: return "eq";
  }
  return "?";
}

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::kNonneg: return "nonneg";
    case Sign::kNonpos: return "nonpos";
    case Sign::kFree: return "free";
  }
  return "?";
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

std::size_t LinearProgram::add_column(std::string name, Sign sign,
                                      double cost) {
  columns.push_back(Column{std::move(name), sign, cost});
  return columns.size() - 1;
}

std::size_t LinearProgram::add_row(std::string name, Sense sense,
                                   std::vector<Term> terms, double rhs) {
  rows.push_back(Row{std::move(name), sense, std::move(terms), rhs});
  return rows.size() - 1;
}

std::optional<std::size_t> LinearProgram::find_column(
    std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].name == name) return j;
  }
  return std::nullopt;
}

std::optional<std::size_t> LinearProgram::find_row(
    std::string_view name) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].name == name) return i;
  }
  return std::nullopt;
}

double LinearProgram::coefficient(std::size_t row, std::size_t column) const {
  double sum = 0.0;
  for (const Term& t : rows.at(row).terms) {
    if (t.column == column) sum += t.value;
  }
  return sum;
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream os;
  os << "malformed linear program:";
  for (const auto& p : problems) os << "\n  " << p;
  return os.str();
}

}  // namespace

LpValidationError::LpValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)),
      problems_(std::move(problems)) {}

std::vector<std::string> validation_problems(const LinearProgram& lp) {
  std::vector<std::string> problems;
  std::unordered_map<std::string, std::size_t> seen;

  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const Column& c = lp.columns[j];
    if (auto [it, inserted] = seen.emplace(c.name, j); !inserted) {
      problems.push_back("column '" + c.name + "' (#" + std::to_string(j) +
                         ") duplicates column #" + std::to_string(it->second));
    }
    if (!std::isfinite(c.cost)) {
      problems.push_back("column '" + c.name + "': cost is not finite");
    }
  }

  seen.clear();
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Row& r = lp.rows[i];
    if (auto [it, inserted] = seen.emplace(r.name, i); !inserted) {
      problems.push_back("row '" + r.name + "' (#" + std::to_string(i) +
                         ") duplicates row #" + std::to_string(it->second));
    }
    if (!std::isfinite(r.rhs)) {
      problems.push_back("row '" + r.name + "': rhs is not finite");
    }
    for (const Term& t : r.terms) {
      if (t.column >= lp.columns.size()) {
        problems.push_back("row '" + r.name + "': references column #" +
                           std::to_string(t.column) + " which does not exist");
      } else if (!std::isfinite(t.value)) {
        problems.push_back("row '" + r.name + "': coefficient on '" +
                           lp.columns[t.column].name + "' is not finite");
      }
    }
  }
  return problems;
}

void validate(const LinearProgram& lp) {
  auto problems = validation_problems(lp);
  if (!problems.empty()) throw LpValidationError(std::move(problems));
}

LinearProgram build_dual(const LinearProgram& lp) {
  validate(lp);
  const bool minimize = lp.direction == Direction::kMinimize;

  LinearProgram dual;
  dual.direction = minimize ? Direction::kMaximize : Direction::kMinimize;
  dual.columns.reserve(lp.rows.size());
  dual.rows.reserve(lp.columns.size());

  // One dual variable per primal row.
  for (const Row& r : lp.rows) {
    Sign sign = Sign::kFree;
    if (r.sense == Sense::kGe) sign = minimize ? Sign::kNonneg : Sign::kNonpos;
    if (r.sense == Sense::kLe) sign = minimize ? Sign::kNonpos : Sign::kNonneg;
    dual.add_column(r.name, sign, r.rhs);
  }

  // Transpose A: one dual row per primal column.
  std::vector<std::vector<Term>> transposed(lp.columns.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    for (const Term& t : lp.rows[i].terms) {
      transposed[t.column].push_back(Term{i, t.value});
    }
  }
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const Column& c = lp.columns[j];
    Sense sense = Sense::kEq;
    if (c.sign == Sign::kNonneg) sense = minimize ? Sense::kLe : Sense::kGe;
    if (c.sign == Sign::kNonpos) sense = minimize ? Sense::kGe : Sense::kLe;
    dual.add_row(c.name, sense, std::move(transposed[j]), c.cost);
  }
  return dual;
}

double row_activity(const Row& row, const std::vector<double>& x) {
  double sum = 0.0;
  for (const Term& t : row.terms) sum += t.value * x.at(t.column);
  return sum;
}

double objective_value(const LinearProgram& lp, const std::vector<double>& x) {
  double sum = 0.0;
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    sum += lp.columns[j].cost * x.at(j);
  }
  return sum;
}

Violation max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  Violation worst;
  auto consider = [&worst](double amount, const std::string& where) {
    if (amount > worst.amount) worst = Violation{amount, where};
  };
  for (const Row& r : lp.rows) {
    const double slack = row_activity(r, x) - r.rhs;
    switch (r.sense) {
      case Sense::kGe: consider(-slack, r.name); break;
      case Sense::kLe: consider(slack, r.name); break;
      case Sense::kEq: consider(std::abs(slack), r.name); break;
    }
  }
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const Column& c = lp.columns[j];
    if (c.sign == Sign::kNonneg) consider(-x.at(j), c.name);
    if (c.sign == Sign::kNonpos) consider(x.at(j), c.name);
  }
  return worst;
}

Violation dual_sign_violation(const LinearProgram& lp,
                              const std::vector<double>& dual) {
  const bool minimize = lp.direction == Direction::kMinimize;
  Violation worst;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const double p = dual.at(i);
    double amount = 0.0;
    if (lp.rows[i].sense == Sense::kGe) amount = minimize ? -p : p;
    if (lp.rows[i].sense == Sense::kLe) amount = minimize ? p : -p;
    if (amount > worst.amount) worst = Violation{amount, lp.rows[i].name};
  }
  return worst;
}

}  // namespace gridclear
