#pragma once

// Money flows of a cleared auction and the audit of the identities that
// strong duality and complementary slackness impose on them.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridclear/pricing.hpp"

namespace gridclear {

enum class PaymentScheme {
  kDualConsistent,  // lambda * P plus the critical-generator term * P
  kLmpOnly,         // lambda * P only
  kCaiso,           // caiso_lmp * P
};
std::string_view to_string(PaymentScheme scheme);
PaymentScheme parse_payment_scheme(std::string_view text);

struct GeneratorSettlement {
  std::size_t node = 0;
  double dispatch = 0.0;        // MW
  double energy_revenue = 0.0;  // lambda_n * P_n
  double extra_payment = 0.0;   // critical-generator term * P_n (scheme dependent)
  double cost = 0.0;            // c_n * P_n
  double rent = 0.0;            // Pmax_n * alpha_n
  double payment() const { return energy_revenue + extra_payment; }
  double profit() const { return payment() - cost; }
};

struct Settlement {
  PaymentScheme scheme = PaymentScheme::kDualConsistent;
  double load_payment = 0.0;
  std::vector<GeneratorSettlement> generators;
  double congestion_rent_pre = 0.0;   // sum_k RateA_k (F-_k + F+_k)
  double congestion_rent_post = 0.0;  // sum_{k,c} RateC_k (Fc- + Fc+)
  double iso_residual = 0.0;
  /// (node, extra_term_rate * P_n) per critical generator. Under lmp_only
  /// these sum to the ISO residual.
  std::vector<std::pair<std::size_t, double>> critical_extra_terms;

  double generator_payments() const;
};

class SettlementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Settlement settle(const ClearingResult& result, const GdfTable& gdfs, PaymentScheme scheme);

inline constexpr double kDefaultAuditTol = 1e-6;

struct AuditEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool all_pass() const;
};

/// Money balance  sum c_n P_n = -sum Pmax alpha - sum RateA (F- + F+)
///                 - sum RateC (Fc- + Fc+) + sum Dbar_n lambda_n
/// evaluated with the supplied nodal prices in place of the dual lambda.
AuditEntry money_balance(const ClearingResult& result, const std::vector<double>& lambda,
                         double tol = kDefaultAuditTol);

/// Rent identities per generator, capacity complementary slackness, the
/// money balance, and the two congestion-rent computations.
AuditReport audit_identities(const ClearingResult& result, const GdfTable& gdfs,
                             double tol = kDefaultAuditTol);

}  // namespace gridclear
