#pragma once

// Market auction models as explicit linear programs.
//
// Standard model (PTDF-based DCOPF):
//   min  sum_n c_n P_n
//   s.t. -P_n                          >= -Pmax_n      (alpha_n)
//         sum_n PTDF_kn (P_n - D_n)    >= -RateA_k     (F-_k)
//        -sum_n PTDF_kn (P_n - D_n)    >= -RateA_k     (F+_k)
//         sum_n P_n - D_n              == 0            (delta)
//         D_n                          == Dbar_n       (lambda_n)
//         P_n >= 0, D_n free
//
// The enhanced model adds, for every critical branch k and critical
// generator outage c at node n'(c), a pair of emergency-rating rows
//   +/- sum_n PTDF_kn (P_n + GDF_{n'(c),n} P_{n'(c)} - D_n) >= -RateC_k   (Fc-, Fc+)
//
// Demand is a free column pinned by an equality row so that lambda_n is read
// directly as a dual rather than buried in the right-hand side.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridclear/lp.hpp"
#include "gridclear/network.hpp"

namespace gridclear {

enum class ModelKind { kStandard, kEnhanced };
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct EmergencyRows {
  std::size_t branch = 0;
  std::size_t outage_node = 0;
  std::size_t minus_row = 0;
  std::size_t plus_row = 0;
};

/// Bidirectional map between market quantities and LP rows/columns.
struct MarketIndex {
  std::vector<std::optional<std::size_t>> p_column;   // per node, generators only
  std::vector<std::size_t> d_column;                  // per node
  std::vector<std::optional<std::size_t>> alpha_row;  // per node, generators only
  std::vector<std::size_t> lambda_row;                // per node
  std::vector<std::size_t> f_minus_row;               // per branch
  std::vector<std::size_t> f_plus_row;                // per branch
  std::vector<EmergencyRows> emergency;               // (critical branch, contingency)
  std::size_t delta_row = 0;
};

struct MarketLp {
  LinearProgram lp;
  MarketIndex index;
  ModelKind kind = ModelKind::kStandard;
  Case grid;
  PtdfMatrix ptdf;
};

class AuctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

MarketLp build_standard_dcopf(const Case& grid, const PtdfMatrix& ptdf);
MarketLp build_enhanced_dcopf(const Case& grid, const PtdfMatrix& ptdf,
                              const GdfTable& gdfs);

/// Coefficient of P_{n'(c)} in an emergency row. The self term PTDF_{k,n'}
/// and GDF_{n'(c),n'(c)} = -1 are combined first so they cancel exactly.
double emergency_outage_coefficient(const PtdfMatrix& ptdf, std::size_t branch,
                                    const ContingencyGdf& gdf);

struct EmergencyDual {
  std::size_t branch = 0;
  std::size_t outage_node = 0;
  double minus = 0.0;  // Fc-
  double plus = 0.0;   // Fc+
};

struct MarketDuals {
  std::vector<double> alpha;  // per node, 0 where no generator
  std::vector<double> f_minus;
  std::vector<double> f_plus;
  std::vector<EmergencyDual> fc;
  double delta = 0.0;
  std::vector<double> lambda;
};

struct SolverStats {
  std::size_t iterations = 0;
  double wall_time_ms = 0.0;
};

struct ClearingResult {
  Case grid;
  ModelKind kind = ModelKind::kStandard;
  PtdfMatrix ptdf;
  std::vector<double> dispatch;  // per node, MW (0 where no generator)
  std::vector<double> demand;    // per node, MW
  double objective = 0.0;        // $/h
  MarketDuals duals;
  SolverStats stats;
  LpSolution solution;
};

/// Raised when the auction has no optimal solution.
class ClearingError : public std::runtime_error {
 public:
  ClearingError(LpStatus status, std::string message, std::vector<std::string> certificate)
      : std::runtime_error(std::move(message)),
        status_(status),
        certificate_(std::move(certificate)) {}
  LpStatus status() const noexcept { return status_; }
  /// Row names (infeasible) or the ray column name (unbounded).
  const std::vector<std::string>& certificate() const noexcept { return certificate_; }

 private:
  LpStatus status_;
  std::vector<std::string> certificate_;
};

ClearingResult clear(const MarketLp& mlp, const SolveOptions& options = {});

/// Builds and clears the requested model for a validated case.
MarketLp build_market(const Case& grid, ModelKind kind);
ClearingResult clear_case(const Case& grid, ModelKind kind);

/// Optimal objective after moving Dbar at `node` by `delta_mw`.
double objective_with_demand_shift(const MarketLp& mlp, std::size_t node, double delta_mw);

/// Pre-contingency branch flows PTDF (P - D), MW.
std::vector<double> branch_flows(const ClearingResult& result);

/// Post-contingency flow on each emergency-row pair, aligned with duals.fc.
std::vector<double> emergency_flows(const ClearingResult& result, const GdfTable& gdfs);

}  // namespace gridclear
