#pragma once

#include <cstddef>
#include <vector>

#include "gridclear/auction.hpp"

namespace gridclear {

/// Per-node LMP split into its marginal components, $/MWh.
struct NodePrice {
  double energy = 0.0;           // delta
  double congestion_pre = 0.0;   // sum_k PTDF_kn (F-_k - F+_k)
  double congestion_post = 0.0;  // sum_{k,c} PTDF_kn (Fc-_kc - Fc+_kc)
  double lambda_dual = 0.0;      // dual of the demand-fixing row
  double lambda_recomposed = 0.0;
  double caiso_lambda = 0.0;     // lambda_dual plus the critical-generator term
};

struct LmpBreakdown {
  std::vector<NodePrice> nodes;

  /// Largest |lambda_recomposed - lambda_dual| over all nodes.
  double max_recomposition_error() const;
};

/// Decomposes the dual LMPs. caiso_lambda is filled from `gdfs` when given,
/// otherwise it equals lambda_dual.
LmpBreakdown decompose_lmp(const ClearingResult& result, const GdfTable* gdfs = nullptr);

/// Sum over critical branches k and contingencies c with n'(c) = node of
/// (Fc- - Fc+) * sum_s PTDF_ks GDF_{n'(c),s}. Zero for non-critical nodes.
double extra_term_rate(const ClearingResult& result, const GdfTable& gdfs, std::size_t node);

/// LMP with the critical-generator term folded in at outage nodes. Not a
/// dual price: loads never settle on it.
std::vector<double> caiso_lmp(const ClearingResult& result, const GdfTable& gdfs);

/// True when `node` hosts a critical generator contingency in this result.
bool is_critical_node(const ClearingResult& result, std::size_t node);

}  // namespace gridclear
