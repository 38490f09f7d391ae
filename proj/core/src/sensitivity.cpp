#include <cmath>

#include "gridclear/network.hpp"

namespace gridclear {
namespace {

// Reduced nodal susceptance matrix: reference row/column removed.
// `reduced_of[n]` maps a node to its reduced index (or -1 for the reference).
Eigen::MatrixXd reduced_susceptance(const Case& c, std::vector<Eigen::Index>& reduced_of) {
  const std::size_t ref = c.reference_index();
  reduced_of.assign(c.nodes.size(), -1);
  Eigen::Index next = 0;
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    if (n != ref) reduced_of[n] = next++;
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(next, next);
  for (const Branch& br : c.branches) {
    const Eigen::Index f = reduced_of[c.node_index(br.from)];
    const Eigen::Index t = reduced_of[c.node_index(br.to)];
    if (f >= 0) b(f, f) += br.susceptance;
    if (t >= 0) b(t, t) += br.susceptance;
    if (f >= 0 && t >= 0) {
      b(f, t) -= br.susceptance;
      b(t, f) -= br.susceptance;
    }
  }
  return b;
}

}  // namespace

PtdfMatrix compute_ptdf(const Case& c) {
  std::vector<Eigen::Index> reduced_of;
  const Eigen::MatrixXd b = reduced_susceptance(c, reduced_of);
  const auto n_nodes = static_cast<Eigen::Index>(c.nodes.size());
  const auto n_branches = static_cast<Eigen::Index>(c.branches.size());

  // Angle sensitivities X (node x node), zero on the reference row/column.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  if (b.rows() > 0) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) {
      throw CaseError("branches: reduced susceptance matrix is singular (islanded network)");
    }
    const Eigen::MatrixXd inv = lu.inverse();
    for (Eigen::Index i = 0; i < n_nodes; ++i) {
      const Eigen::Index ri = reduced_of[static_cast<std::size_t>(i)];
      if (ri < 0) continue;
      for (Eigen::Index j = 0; j < n_nodes; ++j) {
        const Eigen::Index rj = reduced_of[static_cast<std::size_t>(j)];
        if (rj >= 0) x(i, j) = inv(ri, rj);
      }
    }
  }

  Eigen::MatrixXd ptdf(n_branches, n_nodes);
  for (Eigen::Index k = 0; k < n_branches; ++k) {
    const Branch& br = c.branches[static_cast<std::size_t>(k)];
    const auto f = static_cast<Eigen::Index>(c.node_index(br.from));
    const auto t = static_cast<Eigen::Index>(c.node_index(br.to));
    ptdf.row(k) = br.susceptance * (x.row(f) - x.row(t));
  }
  ptdf.col(static_cast<Eigen::Index>(c.reference_index())).setZero();
  return PtdfMatrix(std::move(ptdf));
}

Eigen::VectorXd dc_branch_flows(const Case& c, const Eigen::VectorXd& injections) {
  std::vector<Eigen::Index> reduced_of;
  const Eigen::MatrixXd b = reduced_susceptance(c, reduced_of);
  Eigen::VectorXd p_reduced(b.rows());
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    if (reduced_of[n] >= 0) p_reduced[reduced_of[n]] = injections[static_cast<Eigen::Index>(n)];
  }
  Eigen::VectorXd theta_reduced = Eigen::VectorXd::Zero(b.rows());
  if (b.rows() > 0) theta_reduced = b.partialPivLu().solve(p_reduced);

  auto theta = [&](std::size_t n) {
    return reduced_of[n] >= 0 ? theta_reduced[reduced_of[n]] : 0.0;
  };
  Eigen::VectorXd flows(static_cast<Eigen::Index>(c.branches.size()));
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const Branch& br = c.branches[k];
    flows[static_cast<Eigen::Index>(k)] =
        br.susceptance * (theta(c.node_index(br.from)) - theta(c.node_index(br.to)));
  }
  return flows;
}

std::vector<double> compute_gdf(const Case& c, std::string_view contingency_node) {
  const std::size_t outage = c.node_index(contingency_node);
  if (!c.nodes[outage].generator) {
    throw ContingencyError("contingency node '" + std::string(contingency_node) +
                           "' hosts no generator");
  }

  double responsive_capacity = 0.0;
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    const auto& g = c.nodes[n].generator;
    if (n != outage && g && g->frequency_responsive) {
      responsive_capacity += g->online * g->p_max;
    }
  }
  if (!(responsive_capacity > 0.0)) {
    throw ContingencyError("contingency at node '" + std::string(contingency_node) +
                           "' has no responders");
  }

  std::vector<double> gdf(c.nodes.size(), 0.0);
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    const auto& g = c.nodes[n].generator;
    if (n == outage) {
      gdf[n] = -1.0;
    } else if (g && g->frequency_responsive) {
      gdf[n] = g->online * g->p_max / responsive_capacity;
    }
  }
  return gdf;
}

const ContingencyGdf* GdfTable::find(std::size_t outage_node) const {
  for (const auto& e : entries_) {
    if (e.outage_node == outage_node) return &e;
  }
  return nullptr;
}

GdfTable compute_gdf_table(const Case& c) {
  std::vector<ContingencyGdf> entries;
  entries.reserve(c.critical_contingencies.size());
  for (const std::string& id : c.critical_contingencies) {
    entries.push_back(ContingencyGdf{c.node_index(id), compute_gdf(c, id)});
  }
  return GdfTable(std::move(entries));
}

double gdf_shift_factor(const PtdfMatrix& ptdf, std::size_t branch,
                        const ContingencyGdf& gdf) {
  double sum = 0.0;
  for (std::size_t s = 0; s < gdf.factors.size(); ++s) {
    sum += ptdf.at(branch, s) * gdf.factors[s];
  }
  return sum;
}

}  // namespace gridclear
