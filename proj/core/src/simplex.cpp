#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "gridclear/lp.hpp"

namespace gridclear {
namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Where a standard-form variable came from.
struct StdVar {
  enum class Kind { kStructural, kSlack, kArtificial } kind;
  std::size_t source = 0;  // original column (structural) or row (slack, artificial)
  double multiplier = 1.0;  // x_orig contribution = multiplier * x_std
};

// min c'x, Ax = b, x >= 0, b >= 0
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd cost;
  std::vector<StdVar> vars;
  std::vector<bool> flipped;  // row multiplied by -1 to make b >= 0
  std::vector<std::size_t> initial_basis;
};

StandardForm to_standard_form(const LinearProgram& lp) {
  const std::size_t m = lp.rows.size();
  const double sense = lp.direction == Direction::kMinimize ? 1.0 : -1.0;

  StandardForm sf;
  std::vector<std::vector<std::size_t>> column_vars(lp.columns.size());
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    const Sign sign = lp.columns[j].sign;
    if (sign != Sign::kNonpos) {
      column_vars[j].push_back(sf.vars.size());
      sf.vars.push_back({StdVar::Kind::kStructural, j, 1.0});
    }
    if (sign != Sign::kNonneg) {
      column_vars[j].push_back(sf.vars.size());
      sf.vars.push_back({StdVar::Kind::kStructural, j, -1.0});
    }
  }
  std::vector<std::optional<std::size_t>> slack_of(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Sense s = lp.rows[i].sense;
    if (s == Sense::kEq) continue;
    slack_of[i] = sf.vars.size();
    sf.vars.push_back({StdVar::Kind::kSlack, i, s == Sense::kLe ? 1.0 : -1.0});
  }

  sf.flipped.assign(m, false);
  sf.b.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    sf.flipped[i] = lp.rows[i].rhs < 0.0;
    sf.b[static_cast<Eigen::Index>(i)] = std::abs(lp.rows[i].rhs);
  }

  // Artificials only where the row has no +1 slack to start the basis with.
  sf.initial_basis.assign(m, 0);
  std::vector<std::size_t> needs_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    if (slack_of[i]) {
      const double coeff = sf.vars[*slack_of[i]].multiplier * (sf.flipped[i] ? -1.0 : 1.0);
      if (coeff > 0.0) {
        sf.initial_basis[i] = *slack_of[i];
        continue;
      }
    }
    needs_artificial.push_back(i);
  }
  for (std::size_t i : needs_artificial) {
    sf.initial_basis[i] = sf.vars.size();
    sf.vars.push_back({StdVar::Kind::kArtificial, i, 1.0});
  }

  const auto n = static_cast<Eigen::Index>(sf.vars.size());
  sf.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), n);
  sf.cost = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double flip = sf.flipped[i] ? -1.0 : 1.0;
    const auto ii = static_cast<Eigen::Index>(i);
    for (const Term& t : lp.rows[i].terms) {
      for (std::size_t v : column_vars[t.column]) {
        sf.a(ii, static_cast<Eigen::Index>(v)) += flip * t.value * sf.vars[v].multiplier;
      }
    }
  }
  for (std::size_t v = 0; v < sf.vars.size(); ++v) {
    const StdVar& var = sf.vars[v];
    const auto vv = static_cast<Eigen::Index>(v);
    switch (var.kind) {
      case StdVar::Kind::kStructural:
        sf.cost[vv] = sense * lp.columns[var.source].cost * var.multiplier;
        break;
      case StdVar::Kind::kSlack:
        sf.a(static_cast<Eigen::Index>(var.source), vv) =
            var.multiplier * (sf.flipped[var.source] ? -1.0 : 1.0);
        break;
      case StdVar::Kind::kArtificial:
        sf.a(static_cast<Eigen::Index>(var.source), vv) = 1.0;
        break;
    }
  }
  return sf;
}

class DenseSimplex {
 public:
  DenseSimplex(const StandardForm& sf, const SolveOptions& opt)
      : sf_(sf), opt_(opt), basis_(sf.initial_basis) {
    for (std::size_t v = 0; v < sf_.vars.size(); ++v) {
      if (sf_.vars[v].kind == StdVar::Kind::kArtificial) has_artificials_ = true;
    }
  }

  enum class Outcome { kOptimal, kUnbounded, kIterationLimit };

  std::size_t iterations() const { return iterations_; }
  std::size_t unbounded_var() const { return unbounded_var_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  bool has_artificials() const { return has_artificials_; }

  void set_phase(const Eigen::VectorXd& cost) {
    cost_ = cost;
    refactor();
  }

  Outcome run() {
    std::size_t since_refactor = 0;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return Outcome::kIterationLimit;
      if (since_refactor >= opt_.refactor_interval) {
        refactor();
        since_refactor = 0;
      }
      const auto entering = choose_entering();
      if (!entering) return Outcome::kOptimal;
      const auto leaving = choose_leaving(*entering);
      if (!leaving) {
        unbounded_var_ = *entering;
        return Outcome::kUnbounded;
      }
      pivot(*leaving, *entering);
      ++iterations_;
      ++since_refactor;
    }
  }

  double basic_artificial_sum() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (is_artificial(basis_[i])) sum += std::max(0.0, beta_[static_cast<Eigen::Index>(i)]);
    }
    return sum;
  }

  // Replace zero-level basic artificials with structural/slack columns where
  // the row allows it. Rows that cannot be cleared are linearly dependent on
  // the others; their artificial stays basic at zero.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (!is_artificial(basis_[r])) continue;
      const auto rr = static_cast<Eigen::Index>(r);
      std::optional<std::size_t> best;
      double best_mag = opt_.pivot_tol;
      for (std::size_t j = 0; j < sf_.vars.size(); ++j) {
        if (is_artificial(j) || in_basis(j)) continue;
        const double mag = std::abs(tableau_(rr, static_cast<Eigen::Index>(j)));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best) {
        pivot(r, *best);
        ++iterations_;
      }
    }
    refactor();
  }

  // Basic values and row multipliers from a fresh factorization of B.
  void final_values(Eigen::VectorXd& x_std, Eigen::VectorXd& y) const {
    const auto m = static_cast<Eigen::Index>(basis_.size());
    const auto n = static_cast<Eigen::Index>(sf_.vars.size());
    x_std = Eigen::VectorXd::Zero(n);
    y = Eigen::VectorXd::Zero(m);
    if (m == 0) return;
    Eigen::MatrixXd b(m, m);
    Eigen::VectorXd c_b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto v = static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(i)]);
      b.col(i) = sf_.a.col(v);
      c_b[i] = cost_[v];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    const Eigen::VectorXd x_b = lu.solve(sf_.b);
    y = lu.transpose().solve(c_b);
    for (Eigen::Index i = 0; i < m; ++i) {
      x_std[static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(i)])] = x_b[i];
    }
  }

 private:
  bool is_artificial(std::size_t v) const {
    return sf_.vars[v].kind == StdVar::Kind::kArtificial;
  }
  bool in_basis(std::size_t v) const {
    return std::find(basis_.begin(), basis_.end(), v) != basis_.end();
  }

  void refactor() {
    const auto m = static_cast<Eigen::Index>(basis_.size());
    const auto n = static_cast<Eigen::Index>(sf_.vars.size());
    if (m == 0) {
      tableau_.resize(0, n);
      beta_.resize(0);
      reduced_ = cost_;
      return;
    }
    Eigen::MatrixXd b(m, m);
    Eigen::VectorXd c_b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto v = static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(i)]);
      b.col(i) = sf_.a.col(v);
      c_b[i] = cost_[v];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    tableau_ = lu.solve(sf_.a);
    beta_ = lu.solve(sf_.b);
    reduced_ = cost_.transpose() - c_b.transpose() * tableau_;
    // Basic columns are unit vectors by construction; pin them exactly.
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto v = static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(i)]);
      tableau_.col(v).setZero();
      tableau_(i, v) = 1.0;
      reduced_[v] = 0.0;
    }
  }

  // Bland: lowest-index improving column.
  std::optional<std::size_t> choose_entering() const {
    for (std::size_t j = 0; j < sf_.vars.size(); ++j) {
      if (is_artificial(j)) continue;
      if (reduced_[static_cast<Eigen::Index>(j)] < -opt_.optimality_tol) return j;
    }
    return std::nullopt;
  }

  // Minimum ratio; ties go to the lowest-index basic variable.
  std::optional<std::size_t> choose_leaving(std::size_t q) const {
    std::optional<std::size_t> best;
    double best_ratio = std::numeric_limits<double>::infinity();
    const auto qq = static_cast<Eigen::Index>(q);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double a = tableau_(ii, qq);
      if (a <= opt_.pivot_tol) continue;
      const double ratio = std::max(0.0, beta_[ii]) / a;
      const double tie = 1e-12 * std::max(1.0, std::abs(best_ratio));
      if (!best || ratio < best_ratio - tie) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tie && basis_[i] < basis_[*best]) {
        best = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t q) {
    const auto rr = static_cast<Eigen::Index>(r);
    const auto qq = static_cast<Eigen::Index>(q);
    const double p = tableau_(rr, qq);
    tableau_.row(rr) /= p;
    beta_[rr] /= p;
    const Eigen::RowVectorXd pivot_row = tableau_.row(rr);
    Eigen::VectorXd factors = tableau_.col(qq);
    factors[rr] = 0.0;
    tableau_.noalias() -= factors * pivot_row;
    beta_ -= factors * beta_[rr];
    reduced_ -= reduced_[qq] * pivot_row;
    tableau_.col(qq).setZero();
    tableau_(rr, qq) = 1.0;
    reduced_[qq] = 0.0;
    basis_[r] = q;
  }

  const StandardForm& sf_;
  const SolveOptions& opt_;
  std::vector<std::size_t> basis_;
  bool has_artificials_ = false;
  Eigen::VectorXd cost_;
  Tableau tableau_;
  Eigen::VectorXd beta_;
  Eigen::RowVectorXd reduced_;
  std::size_t iterations_ = 0;
  std::size_t unbounded_var_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
  validate(lp);
  const StandardForm sf = to_standard_form(lp);
  const std::size_t m = lp.rows.size();
  const auto n_std = static_cast<Eigen::Index>(sf.vars.size());
  const double sense = lp.direction == Direction::kMinimize ? 1.0 : -1.0;

  LpSolution sol;
  sol.primal.assign(lp.columns.size(), 0.0);
  sol.dual.assign(m, 0.0);
  sol.reduced_cost.assign(lp.columns.size(), 0.0);

  DenseSimplex simplex(sf, options);

  if (simplex.has_artificials()) {
    Eigen::VectorXd phase_one = Eigen::VectorXd::Zero(n_std);
    for (Eigen::Index v = 0; v < n_std; ++v) {
      if (sf.vars[static_cast<std::size_t>(v)].kind == StdVar::Kind::kArtificial) {
        phase_one[v] = 1.0;
      }
    }
    simplex.set_phase(phase_one);
    if (simplex.run() == DenseSimplex::Outcome::kIterationLimit) {
      throw SolverError("simplex iteration limit reached in phase one");
    }
    const double b_scale = sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0;
    if (simplex.basic_artificial_sum() > options.feasibility_tol * (1.0 + b_scale)) {
      Eigen::VectorXd x_std, y;
      simplex.final_values(x_std, y);
      sol.status = LpStatus::kInfeasible;
      sol.iterations = simplex.iterations();
      for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(y[static_cast<Eigen::Index>(i)]) > options.feasibility_tol) {
          sol.infeasible_rows.push_back(i);
        }
      }
      return sol;
    }
    simplex.drive_out_artificials();
  }

  simplex.set_phase(sf.cost);
  const auto outcome = simplex.run();
  sol.iterations = simplex.iterations();
  if (outcome == DenseSimplex::Outcome::kIterationLimit) {
    throw SolverError("simplex iteration limit reached in phase two");
  }
  if (outcome == DenseSimplex::Outcome::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    const StdVar& v = sf.vars[simplex.unbounded_var()];
    if (v.kind == StdVar::Kind::kStructural) sol.unbounded_column = v.source;
    return sol;
  }

  Eigen::VectorXd x_std, y;
  simplex.final_values(x_std, y);
  for (Eigen::Index v = 0; v < n_std; ++v) {
    const StdVar& var = sf.vars[static_cast<std::size_t>(v)];
    if (var.kind == StdVar::Kind::kStructural) {
      sol.primal[var.source] += var.multiplier * x_std[v];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double flip = sf.flipped[i] ? -1.0 : 1.0;
    sol.dual[i] = sense * flip * y[static_cast<Eigen::Index>(i)];
  }
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    sol.reduced_cost[j] = lp.columns[j].cost;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (const Term& t : lp.rows[i].terms) {
      sol.reduced_cost[t.column] -= sol.dual[i] * t.value;
    }
  }
  sol.objective = objective_value(lp, sol.primal);
  sol.status = LpStatus::kOptimal;
  return sol;
}

}  // namespace gridclear
