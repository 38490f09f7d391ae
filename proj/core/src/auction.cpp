#include <chrono>

#include "gridclear/auction.hpp"

namespace gridclear {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kStandard ? "standard" : "enhanced";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "standard") return ModelKind::kStandard;
  if (text == "enhanced") return ModelKind::kEnhanced;
  throw std::invalid_argument("unknown model '" + std::string(text) +
                              "' (expected standard or enhanced)");
}

namespace {

void check_ptdf_shape(const Case& grid, const PtdfMatrix& ptdf) {
  if (ptdf.branch_count() != grid.branches.size() || ptdf.node_count() != grid.nodes.size()) {
    throw AuctionError("PTDF matrix is " + std::to_string(ptdf.branch_count()) + "x" +
                       std::to_string(ptdf.node_count()) + " but the case has " +
                       std::to_string(grid.branches.size()) + " branches and " +
                       std::to_string(grid.nodes.size()) + " nodes");
  }
}

// sign * sum_n PTDF_kn (P_n - D_n); P coefficients may be overridden.
std::vector<Term> flow_terms(const MarketLp& m, std::size_t k, double sign) {
  std::vector<Term> terms;
  const std::size_t n_nodes = m.grid.nodes.size();
  for (std::size_t n = 0; n < n_nodes; ++n) {
    const double f = m.ptdf.at(k, n);
    if (f == 0.0) continue;
    if (m.index.p_column[n]) terms.push_back({*m.index.p_column[n], sign * f});
  }
  for (std::size_t n = 0; n < n_nodes; ++n) {
    const double f = m.ptdf.at(k, n);
    if (f == 0.0) continue;
    terms.push_back({m.index.d_column[n], -sign * f});
  }
  return terms;
}

}  // namespace

MarketLp build_standard_dcopf(const Case& grid, const PtdfMatrix& ptdf) {
  check_ptdf_shape(grid, ptdf);
  MarketLp m;
  m.kind = ModelKind::kStandard;
  m.grid = grid;
  m.ptdf = ptdf;
  LinearProgram& lp = m.lp;
  MarketIndex& ix = m.index;
  lp.direction = Direction::kMinimize;

  const std::size_t n_nodes = grid.nodes.size();
  ix.p_column.assign(n_nodes, std::nullopt);
  ix.alpha_row.assign(n_nodes, std::nullopt);
  ix.d_column.assign(n_nodes, 0);
  ix.lambda_row.assign(n_nodes, 0);

  for (std::size_t n = 0; n < n_nodes; ++n) {
    const Node& node = grid.nodes[n];
    if (node.generator) ix.p_column[n] = lp.add_column("P:" + node.id, Sign::kNonneg, node.generator->cost);
  }
  for (std::size_t n = 0; n < n_nodes; ++n) {
    ix.d_column[n] = lp.add_column("D:" + grid.nodes[n].id, Sign::kFree, 0.0);
  }

  for (std::size_t n = 0; n < n_nodes; ++n) {
    const Node& node = grid.nodes[n];
    if (!node.generator) continue;
    ix.alpha_row[n] = lp.add_row("alpha:" + node.id, Sense::kGe,
                                 {{*ix.p_column[n], -1.0}}, -node.generator->p_max);
  }

  for (std::size_t k = 0; k < grid.branches.size(); ++k) {
    const Branch& br = grid.branches[k];
    ix.f_minus_row.push_back(lp.add_row("f_minus:" + br.id, Sense::kGe, flow_terms(m, k, 1.0), -br.rate_a));
    ix.f_plus_row.push_back(lp.add_row("f_plus:" + br.id, Sense::kGe, flow_terms(m, k, -1.0), -br.rate_a));
  }

  std::vector<Term> balance;
  for (std::size_t n = 0; n < n_nodes; ++n) {
    if (ix.p_column[n]) balance.push_back({*ix.p_column[n], 1.0});
  }
  for (std::size_t n = 0; n < n_nodes; ++n) balance.push_back({ix.d_column[n], -1.0});
  ix.delta_row = lp.add_row("delta", Sense::kEq, std::move(balance), 0.0);

  for (std::size_t n = 0; n < n_nodes; ++n) {
    ix.lambda_row[n] = lp.add_row("lambda:" + grid.nodes[n].id, Sense::kEq,
                                  {{ix.d_column[n], 1.0}}, grid.nodes[n].d_fixed);
  }
  return m;
}

double emergency_outage_coefficient(const PtdfMatrix& ptdf, std::size_t branch,
                                    const ContingencyGdf& gdf) {
  const std::size_t outage = gdf.outage_node;
  double coeff = ptdf.at(branch, outage);
  coeff += ptdf.at(branch, outage) * gdf.factors[outage];
  for (std::size_t s = 0; s < gdf.factors.size(); ++s) {
    if (s != outage) coeff += ptdf.at(branch, s) * gdf.factors[s];
  }
  return coeff;
}

MarketLp build_enhanced_dcopf(const Case& grid, const PtdfMatrix& ptdf, const GdfTable& gdfs) {
  MarketLp m = build_standard_dcopf(grid, ptdf);
  m.kind = ModelKind::kEnhanced;
  if (grid.critical_branches.empty() || grid.critical_contingencies.empty()) return m;

  // Emergency rows sit between the normal-rating rows and the balance row so
  // the row order mirrors the formulation; rebuild the tail.
  LinearProgram& lp = m.lp;
  MarketIndex& ix = m.index;
  std::vector<Row> tail(lp.rows.begin() + static_cast<std::ptrdiff_t>(ix.delta_row), lp.rows.end());
  lp.rows.resize(ix.delta_row);

  for (const std::string& branch_id : grid.critical_branches) {
    std::size_t k = 0;
    try {
      k = grid.branch_index(branch_id);
    } catch (const CaseError&) {
      throw AuctionError("critical branch '" + branch_id + "' is not in the case");
    }
    const Branch& br = grid.branches[k];
    for (const std::string& node_id : grid.critical_contingencies) {
      std::size_t outage = 0;
      try {
        outage = grid.node_index(node_id);
      } catch (const CaseError&) {
        throw AuctionError("critical contingency node '" + node_id + "' is not in the case");
      }
      const ContingencyGdf* gdf = gdfs.find(outage);
      if (!gdf) throw AuctionError("no GDFs supplied for contingency at node '" + node_id + "'");
      if (!ix.p_column[outage]) {
        throw AuctionError("contingency node '" + node_id + "' hosts no generator");
      }
      const double outage_coeff = emergency_outage_coefficient(ptdf, k, *gdf);

      auto terms_for = [&](double sign) {
        std::vector<Term> terms;
        for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
          if (!ix.p_column[n]) continue;
          const double f = n == outage ? outage_coeff : ptdf.at(k, n);
          if (f != 0.0) terms.push_back({*ix.p_column[n], sign * f});
        }
        for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
          const double f = ptdf.at(k, n);
          if (f != 0.0) terms.push_back({ix.d_column[n], -sign * f});
        }
        return terms;
      };

      const std::string suffix = br.id + ":" + node_id;
      EmergencyRows rows;
      rows.branch = k;
      rows.outage_node = outage;
      rows.minus_row = lp.add_row("fc_minus:" + suffix, Sense::kGe, terms_for(1.0), -br.rate_c);
      rows.plus_row = lp.add_row("fc_plus:" + suffix, Sense::kGe, terms_for(-1.0), -br.rate_c);
      ix.emergency.push_back(rows);
    }
  }

  const std::size_t shift = lp.rows.size() - ix.delta_row;
  for (Row& r : tail) lp.rows.push_back(std::move(r));
  ix.delta_row += shift;
  for (std::size_t& r : ix.lambda_row) r += shift;
  return m;
}

ClearingResult clear(const MarketLp& mlp, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  LpSolution sol = solve(mlp.lp, options);
  const auto stop = std::chrono::steady_clock::now();

  if (sol.status == LpStatus::kInfeasible) {
    std::vector<std::string> rows;
    for (std::size_t i : sol.infeasible_rows) rows.push_back(mlp.lp.rows[i].name);
    std::string message = "demand exceeds deliverable capacity";
    if (!rows.empty()) {
      message += " (conflicting constraints:";
      for (const auto& r : rows) message += " " + r;
      message += ")";
    }
    throw ClearingError(LpStatus::kInfeasible, message, std::move(rows));
  }
  if (sol.status == LpStatus::kUnbounded) {
    std::vector<std::string> ray;
    if (sol.unbounded_column) ray.push_back(mlp.lp.columns[*sol.unbounded_column].name);
    throw ClearingError(LpStatus::kUnbounded,
                        "auction is unbounded" + (ray.empty() ? std::string() : " along " + ray.front()),
                        std::move(ray));
  }

  const MarketIndex& ix = mlp.index;
  const std::size_t n_nodes = mlp.grid.nodes.size();
  ClearingResult r;
  r.grid = mlp.grid;
  r.kind = mlp.kind;
  r.ptdf = mlp.ptdf;
  r.objective = sol.objective;
  r.dispatch.assign(n_nodes, 0.0);
  r.demand.assign(n_nodes, 0.0);
  r.duals.alpha.assign(n_nodes, 0.0);
  r.duals.lambda.assign(n_nodes, 0.0);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    if (ix.p_column[n]) r.dispatch[n] = sol.primal[*ix.p_column[n]];
    if (ix.alpha_row[n]) r.duals.alpha[n] = sol.dual[*ix.alpha_row[n]];
    r.demand[n] = sol.primal[ix.d_column[n]];
    r.duals.lambda[n] = sol.dual[ix.lambda_row[n]];
  }
  for (std::size_t k = 0; k < ix.f_minus_row.size(); ++k) {
    r.duals.f_minus.push_back(sol.dual[ix.f_minus_row[k]]);
    r.duals.f_plus.push_back(sol.dual[ix.f_plus_row[k]]);
  }
  for (const EmergencyRows& e : ix.emergency) {
    r.duals.fc.push_back({e.branch, e.outage_node, sol.dual[e.minus_row], sol.dual[e.plus_row]});
  }
  r.duals.delta = sol.dual[ix.delta_row];
  r.stats.iterations = sol.iterations;
  r.stats.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  r.solution = std::move(sol);
  return r;
}

MarketLp build_market(const Case& grid, ModelKind kind) {
  const PtdfMatrix ptdf = compute_ptdf(grid);
  if (kind == ModelKind::kStandard) return build_standard_dcopf(grid, ptdf);
  return build_enhanced_dcopf(grid, ptdf, compute_gdf_table(grid));
}

ClearingResult clear_case(const Case& grid, ModelKind kind) {
  return clear(build_market(grid, kind));
}

double objective_with_demand_shift(const MarketLp& mlp, std::size_t node, double delta_mw) {
  LinearProgram lp = mlp.lp;
  lp.rows.at(mlp.index.lambda_row.at(node)).rhs += delta_mw;
  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw ClearingError(sol.status, "demand-shifted auction is not optimal", {});
  }
  return sol.objective;
}

std::vector<double> branch_flows(const ClearingResult& result) {
  const std::size_t n_nodes = result.grid.nodes.size();
  Eigen::VectorXd injection(static_cast<Eigen::Index>(n_nodes));
  for (std::size_t n = 0; n < n_nodes; ++n) {
    injection[static_cast<Eigen::Index>(n)] = result.dispatch[n] - result.demand[n];
  }
  const Eigen::VectorXd f = result.ptdf.flows(injection);
  return {f.data(), f.data() + f.size()};
}

std::vector<double> emergency_flows(const ClearingResult& result, const GdfTable& gdfs) {
  const std::vector<double> base = branch_flows(result);
  std::vector<double> out;
  out.reserve(result.duals.fc.size());
  for (const EmergencyDual& e : result.duals.fc) {
    const ContingencyGdf* gdf = gdfs.find(e.outage_node);
    if (!gdf) throw AuctionError("no GDFs for contingency at node '" + result.grid.nodes[e.outage_node].id + "'");
    out.push_back(base[e.branch] +
                  result.dispatch[e.outage_node] * gdf_shift_factor(result.ptdf, e.branch, *gdf));
  }
  return out;
}

}  // namespace gridclear
