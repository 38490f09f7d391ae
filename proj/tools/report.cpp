#include "report.hpp"

#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace gridclear::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string case_fingerprint(const Case& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : case_to_json(grid).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunReport run_case(const std::string& path, const Case& grid, const RunOptions& options) {
  RunReport r;
  r.path = path;
  r.grid = grid;
  r.options = options;
  if (options.model == ModelKind::kEnhanced) r.gdfs = compute_gdf_table(grid);
  try {
    r.result = clear_case(grid, options.model);
  } catch (const ClearingError& e) {
    r.status = std::string(to_string(e.status()));
    r.failure = e.what();
    r.certificate = e.certificate();
    return r;
  }
  r.status = "optimal";
  r.prices = decompose_lmp(*r.result, options.model == ModelKind::kEnhanced ? &r.gdfs : nullptr);
  r.settlement = settle(*r.result, r.gdfs, options.scheme);
  r.audit = audit_identities(*r.result, r.gdfs, options.tolerance);
  return r;
}

namespace {

// Doubles go through format_number so JSON and CSV agree digit for digit.
Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return Json::parse(format_number(v));
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string pair_key(const Case& c, std::size_t branch, std::size_t node) {
  return c.branches[branch].id + ":" + c.nodes[node].id;
}

Json result_json(const RunReport& rep) {
  const ClearingResult& r = *rep.result;
  const Case& c = rep.grid;
  Json out;
  out["objective"] = num(r.objective);
  Json dispatch = Json::object(), demand = Json::object(), alpha = Json::object(), lambda = Json::object();
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    const std::string& id = c.nodes[n].id;
    if (c.nodes[n].generator) {
      dispatch[id] = num(r.dispatch[n]);
      alpha[id] = num(r.duals.alpha[n]);
    }
    demand[id] = num(r.demand[n]);
    lambda[id] = num(r.duals.lambda[n]);
  }
  const auto flows = branch_flows(r);
  Json flow = Json::object(), fm = Json::object(), fp = Json::object();
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    flow[c.branches[k].id] = num(flows[k]);
    fm[c.branches[k].id] = num(r.duals.f_minus[k]);
    fp[c.branches[k].id] = num(r.duals.f_plus[k]);
  }
  const auto post = emergency_flows(r, rep.gdfs);
  Json pflow = Json::object(), fcm = Json::object(), fcp = Json::object();
  for (std::size_t i = 0; i < r.duals.fc.size(); ++i) {
    const auto& e = r.duals.fc[i];
    const std::string key = pair_key(c, e.branch, e.outage_node);
    pflow[key] = num(post[i]);
    fcm[key] = num(e.minus);
    fcp[key] = num(e.plus);
  }
  out["dispatch"] = dispatch;
  out["demand"] = demand;
  out["flows"] = flow;
  out["emergency_flows"] = pflow;
  out["duals"] = {{"delta", num(r.duals.delta)}, {"lambda", lambda}, {"alpha", alpha},
                  {"f_minus", fm},           {"f_plus", fp},         {"fc_minus", fcm},
                  {"fc_plus", fcp}};
  return out;
}

Json settlement_json(const RunReport& rep) {
  const Settlement& s = *rep.settlement;
  Json gens = Json::array();
  for (const auto& g : s.generators) {
    gens.push_back({{"node", rep.grid.nodes[g.node].id},
                    {"dispatch", num(g.dispatch)},
                    {"energy_revenue", num(g.energy_revenue)},
                    {"extra_payment", num(g.extra_payment)},
                    {"payment", num(g.payment())},
                    {"cost", num(g.cost)},
                    {"profit", num(g.profit())},
                    {"rent", num(g.rent)}});
  }
  Json extra = Json::array();
  double extra_sum = 0.0;
  for (const auto& [node, v] : s.critical_extra_terms) {
    extra.push_back({{"node", rep.grid.nodes[node].id}, {"amount", num(v)}});
    extra_sum += v;
  }
  return {{"scheme", std::string(to_string(s.scheme))},
          {"load_payment", num(s.load_payment)},
          {"generator_payments", num(s.generator_payments())},
          {"congestion_rent_pre", num(s.congestion_rent_pre)},
          {"congestion_rent_post", num(s.congestion_rent_post)},
          {"iso_residual", num(s.iso_residual)},
          {"critical_extra_terms", extra},
          {"critical_extra_total", num(extra_sum)},
          {"generators", gens}};
}

}  // namespace

Json report_json(const RunReport& rep) {
  const Case& c = rep.grid;
  Json out;
  out["tool"] = "gridclear";
  if (rep.options.timestamp) out["generated_at"] = utc_now();
  out["input"] = {{"path", rep.path},
                  {"digest",
                   {{"fingerprint", case_fingerprint(c)},
                    {"nodes", c.nodes.size()},
                    {"branches", c.branches.size()},
                    {"generators", c.generator_count()},
                    {"critical_branches", c.critical_branches.size()},
                    {"critical_contingencies", c.critical_contingencies.size()}}},
                  {"case", Json::parse(case_to_json(c).dump())}};
  out["model"] = std::string(to_string(rep.options.model));
  out["scheme"] = std::string(to_string(rep.options.scheme));
  out["tolerance"] = num(rep.options.tolerance);
  out["status"] = rep.status;
  if (!rep.result) {
    out["error"] = rep.failure;
    out["certificate"] = rep.certificate;
    return out;
  }

  out["result"] = result_json(rep);
  Json prices = Json::array();
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    const NodePrice& p = rep.prices->nodes[n];
    prices.push_back({{"node", c.nodes[n].id},
                      {"delta", num(p.energy)},
                      {"congestion_pre", num(p.congestion_pre)},
                      {"congestion_post", num(p.congestion_post)},
                      {"lambda", num(p.lambda_dual)},
                      {"lambda_recomposed", num(p.lambda_recomposed)},
                      {"caiso_lambda", num(p.caiso_lambda)}});
  }
  out["prices"] = prices;
  out["settlement"] = settlement_json(rep);
  Json entries = Json::array();
  for (const auto& e : rep.audit->entries) {
    entries.push_back({{"name", e.name}, {"lhs", num(e.lhs)}, {"rhs", num(e.rhs)},
                       {"residual", num(e.residual)}, {"pass", e.pass}});
  }
  out["audit"] = {{"pass", rep.audit->all_pass()}, {"entries", entries}};
  Json solver = {{"iterations", rep.result->stats.iterations}};
  if (rep.options.timestamp) solver["wall_time_ms"] = num(rep.result->stats.wall_time_ms);
  out["solver"] = solver;
  return out;
}

std::string report_csv(const RunReport& rep) {
  const Case& c = rep.grid;
  std::ostringstream out;
  out << "# case " << rep.path << " model " << to_string(rep.options.model) << " status " << rep.status << "\n";
  if (!rep.result) {
    out << "# error " << rep.failure << "\n";
    return out.str();
  }
  const ClearingResult& r = *rep.result;
  auto f = format_number;

  out << "node,dispatch,demand,alpha,delta,congestion_pre,congestion_post,lambda,caiso_lambda\n";
  for (std::size_t n = 0; n < c.nodes.size(); ++n) {
    const NodePrice& p = rep.prices->nodes[n];
    const bool gen = c.nodes[n].generator.has_value();
    out << c.nodes[n].id << "," << (gen ? f(r.dispatch[n]) : "") << "," << f(r.demand[n]) << ","
        << (gen ? f(r.duals.alpha[n]) : "") << "," << f(p.energy) << "," << f(p.congestion_pre) << ","
        << f(p.congestion_post) << "," << f(p.lambda_dual) << "," << f(p.caiso_lambda) << "\n";
  }

  out << "\nbranch,flow,rate_a,f_minus,f_plus\n";
  const auto flows = branch_flows(r);
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    out << c.branches[k].id << "," << f(flows[k]) << "," << f(c.branches[k].rate_a) << ","
        << f(r.duals.f_minus[k]) << "," << f(r.duals.f_plus[k]) << "\n";
  }

  out << "\nbranch,contingency,flow,rate_c,fc_minus,fc_plus\n";
  const auto post = emergency_flows(r, rep.gdfs);
  for (std::size_t i = 0; i < r.duals.fc.size(); ++i) {
    const auto& e = r.duals.fc[i];
    out << c.branches[e.branch].id << "," << c.nodes[e.outage_node].id << "," << f(post[i]) << ","
        << f(c.branches[e.branch].rate_c) << "," << f(e.minus) << "," << f(e.plus) << "\n";
  }
  return out.str();
}

}  // namespace gridclear::cli
