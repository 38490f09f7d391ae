#include <cmath>

#include "gridclear/settlement.hpp"

namespace gridclear {

std::string_view to_string(PaymentScheme scheme) {
  switch (scheme) {
    case PaymentScheme::kDualConsistent: return "dual_consistent";
    case PaymentScheme::kLmpOnly: return "lmp_only";
    case PaymentScheme::kCaiso: return "caiso";
  }
  return "?";
}

PaymentScheme parse_payment_scheme(std::string_view text) {
  if (text == "dual_consistent") return PaymentScheme::kDualConsistent;
  if (text == "lmp_only") return PaymentScheme::kLmpOnly;
  if (text == "caiso") return PaymentScheme::kCaiso;
  throw std::invalid_argument("unknown payment scheme '" + std::string(text) +
                              "' (expected dual_consistent, lmp_only or caiso)");
}

double Settlement::generator_payments() const {
  double sum = 0.0;
  for (const auto& g : generators) sum += g.payment();
  return sum;
}

namespace {

double congestion_rent_pre(const ClearingResult& r) {
  double sum = 0.0;
  for (std::size_t k = 0; k < r.duals.f_minus.size(); ++k) {
    sum += r.grid.branches[k].rate_a * (r.duals.f_minus[k] + r.duals.f_plus[k]);
  }
  return sum;
}

double congestion_rent_post(const ClearingResult& r) {
  double sum = 0.0;
  for (const EmergencyDual& e : r.duals.fc) {
    sum += r.grid.branches[e.branch].rate_c * (e.minus + e.plus);
  }
  return sum;
}

double load_payment(const ClearingResult& r, const std::vector<double>& lambda) {
  double sum = 0.0;
  for (std::size_t n = 0; n < r.grid.nodes.size(); ++n) sum += lambda[n] * r.grid.nodes[n].d_fixed;
  return sum;
}

AuditEntry make_entry(std::string name, double lhs, double rhs, double tol) {
  AuditEntry e;
  e.name = std::move(name);
  e.lhs = lhs;
  e.rhs = rhs;
  e.residual = lhs - rhs;
  e.pass = std::abs(e.residual) <= tol * (1.0 + std::abs(lhs));
  return e;
}

}  // namespace

Settlement settle(const ClearingResult& result, const GdfTable& gdfs, PaymentScheme scheme) {
  if (scheme == PaymentScheme::kCaiso && result.kind != ModelKind::kEnhanced) {
    throw SettlementError("the caiso scheme applies only to enhanced-model results");
  }

  Settlement s;
  s.scheme = scheme;
  s.load_payment = load_payment(result, result.duals.lambda);
  s.congestion_rent_pre = congestion_rent_pre(result);
  s.congestion_rent_post = congestion_rent_post(result);

  std::vector<double> caiso;
  if (scheme == PaymentScheme::kCaiso) caiso = caiso_lmp(result, gdfs);

  for (std::size_t n = 0; n < result.grid.nodes.size(); ++n) {
    const auto& gen = result.grid.nodes[n].generator;
    if (!gen) continue;
    const double p = result.dispatch[n];
    const double extra = is_critical_node(result, n) ? extra_term_rate(result, gdfs, n) : 0.0;

    GeneratorSettlement g;
    g.node = n;
    g.dispatch = p;
    g.energy_revenue = result.duals.lambda[n] * p;
    g.cost = gen->cost * p;
    g.rent = gen->p_max * result.duals.alpha[n];
    switch (scheme) {
      case PaymentScheme::kDualConsistent:
        g.extra_payment = extra * p;
        break;
      case PaymentScheme::kLmpOnly:
        g.extra_payment = 0.0;
        break;
      case PaymentScheme::kCaiso:
        // Paid caiso_lmp on production; report the part above lambda separately.
        g.extra_payment = caiso[n] * p - g.energy_revenue;
        break;
    }
    if (is_critical_node(result, n)) s.critical_extra_terms.emplace_back(n, extra * p);
    s.generators.push_back(g);
  }

  s.iso_residual = s.load_payment - s.generator_payments() -
                   (s.congestion_rent_pre + s.congestion_rent_post);
  return s;
}

bool AuditReport::all_pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

AuditEntry money_balance(const ClearingResult& result, const std::vector<double>& lambda, double tol) {
  double cost = 0.0;
  double rent = 0.0;
  for (std::size_t n = 0; n < result.grid.nodes.size(); ++n) {
    const auto& gen = result.grid.nodes[n].generator;
    if (!gen) continue;
    cost += gen->cost * result.dispatch[n];
    rent += gen->p_max * result.duals.alpha[n];
  }
  const double dual_objective = -rent - congestion_rent_pre(result) - congestion_rent_post(result) +
                                load_payment(result, lambda);
  return make_entry("money_balance", cost, dual_objective, tol);
}

AuditReport audit_identities(const ClearingResult& result, const GdfTable& gdfs, double tol) {
  AuditReport report;
  double dual_consistent_revenue = 0.0;

  for (std::size_t n = 0; n < result.grid.nodes.size(); ++n) {
    const Node& node = result.grid.nodes[n];
    if (!node.generator) continue;
    const double p = result.dispatch[n];
    const double alpha = result.duals.alpha[n];
    const double lambda = result.duals.lambda[n];
    const double rent = node.generator->p_max * alpha;
    const double margin = lambda * p - node.generator->cost * p;

    if (is_critical_node(result, n)) {
      const double extra = extra_term_rate(result, gdfs, n) * p;
      report.entries.push_back(make_entry("critical_generator_rent:" + node.id, rent, margin + extra, tol));
      dual_consistent_revenue += lambda * p + extra;
    } else {
      report.entries.push_back(make_entry("generator_rent:" + node.id, rent, margin, tol));
      dual_consistent_revenue += lambda * p;
    }
    report.entries.push_back(
        make_entry("capacity_slackness:" + node.id, (node.generator->p_max - p) * alpha, 0.0, tol));
  }

  report.entries.push_back(money_balance(result, result.duals.lambda, tol));

  const double rents = congestion_rent_pre(result) + congestion_rent_post(result);
  report.entries.push_back(make_entry("congestion_rent_equivalence", rents,
                                      load_payment(result, result.duals.lambda) - dual_consistent_revenue,
                                      tol));
  return report;
}

}  // namespace gridclear
