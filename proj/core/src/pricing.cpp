#include <cmath>

#include "gridclear/pricing.hpp"

namespace gridclear {

double LmpBreakdown::max_recomposition_error() const {
  double worst = 0.0;
  for (const NodePrice& p : nodes) {
    worst = std::max(worst, std::abs(p.lambda_recomposed - p.lambda_dual));
  }
  return worst;
}

LmpBreakdown decompose_lmp(const ClearingResult& result, const GdfTable* gdfs) {
  const std::size_t n_nodes = result.grid.nodes.size();
  const MarketDuals& d = result.duals;

  LmpBreakdown out;
  out.nodes.resize(n_nodes);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    NodePrice& p = out.nodes[n];
    p.energy = d.delta;
    for (std::size_t k = 0; k < d.f_minus.size(); ++k) {
      p.congestion_pre += result.ptdf.at(k, n) * (d.f_minus[k] - d.f_plus[k]);
    }
    for (const EmergencyDual& e : d.fc) {
      p.congestion_post += result.ptdf.at(e.branch, n) * (e.minus - e.plus);
    }
    p.lambda_dual = d.lambda[n];
    p.lambda_recomposed = p.energy + p.congestion_pre + p.congestion_post;
    p.caiso_lambda = p.lambda_dual;
  }
  if (gdfs) {
    const std::vector<double> caiso = caiso_lmp(result, *gdfs);
    for (std::size_t n = 0; n < n_nodes; ++n) out.nodes[n].caiso_lambda = caiso[n];
  }
  return out;
}

bool is_critical_node(const ClearingResult& result, std::size_t node) {
  if (result.kind != ModelKind::kEnhanced) return false;
  for (const std::string& id : result.grid.critical_contingencies) {
    if (result.grid.nodes[node].id == id) return true;
  }
  return false;
}

double extra_term_rate(const ClearingResult& result, const GdfTable& gdfs, std::size_t node) {
  double rate = 0.0;
  for (const EmergencyDual& e : result.duals.fc) {
    if (e.outage_node != node) continue;
    const ContingencyGdf* gdf = gdfs.find(node);
    if (!gdf) {
      throw AuctionError("no GDFs for contingency at node '" + result.grid.nodes[node].id + "'");
    }
    rate += (e.minus - e.plus) * gdf_shift_factor(result.ptdf, e.branch, *gdf);
  }
  return rate;
}

std::vector<double> caiso_lmp(const ClearingResult& result, const GdfTable& gdfs) {
  for (const std::string& id : result.grid.critical_contingencies) {
    if (result.kind == ModelKind::kEnhanced && !gdfs.find(result.grid.node_index(id))) {
      throw AuctionError("GDF table is missing contingency at node '" + id + "'");
    }
  }
  std::vector<double> prices = result.duals.lambda;
  for (std::size_t n = 0; n < prices.size(); ++n) {
    if (is_critical_node(result, n)) prices[n] += extra_term_rate(result, gdfs, n);
  }
  return prices;
}

}  // namespace gridclear
