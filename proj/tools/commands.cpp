#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gridclear/random_case.hpp"
#include "report.hpp"

namespace gridclear::cli {
namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double tolerance_from_env() {
  const char* raw = std::getenv("GRIDCLEAR_TOL");
  if (!raw || !*raw) return kDefaultAuditTol;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (*end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string("GRIDCLEAR_TOL: expected a positive number, got '") + raw + "'");
  }
  return v;
}

// Loads a case and turns every library-side input problem into InputError.
RunReport load_and_run(const std::string& path, const RunOptions& options) {
  try {
    return run_case(path, load_case_file(path), options);
  } catch (const CaseError& e) {
    const std::string msg = e.what();
    throw InputError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
  } catch (const ContingencyError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const SettlementError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const AuctionError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError(path + ": cannot open for writing");
  file << text;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

struct JobResult {
  int code = kExitOk;
  std::string text;
  std::string error;
};

int cmd_clear(const std::vector<std::string>& paths, const RunOptions& options, const std::string& format,
              const std::string& out_path, unsigned jobs, std::ostream& out, std::ostream& err) {
  std::vector<JobResult> results(paths.size());
  std::vector<Json> docs(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      try {
        const RunReport rep = load_and_run(paths[i], options);
        if (format == "csv") results[i].text = report_csv(rep);
        else docs[i] = report_json(rep);
        if (!rep.result) {
          results[i].code = kExitNotOptimal;
          results[i].error = paths[i] + ": " + rep.failure;
        }
      } catch (const InputError& e) {
        results[i].code = kExitInputError;
        results[i].error = e.what();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(paths.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitOk;
  std::string text;
  Json all = Json::array();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const JobResult& r = results[i];
    if (!r.error.empty()) err << "error: " << r.error << "\n";
    if (r.code == kExitInputError) {
      code = kExitInputError;
      continue;
    }
    if (r.code == kExitNotOptimal && code == kExitOk) code = kExitNotOptimal;
    if (format == "csv") {
      if (!text.empty()) text += "\n";
      text += r.text;
    } else {
      all.push_back(docs[i]);
    }
  }
  if (format != "csv" && !all.empty()) text = (all.size() == 1 && paths.size() == 1 ? all[0] : all).dump(2) + "\n";
  write_output(out_path, text, out);
  return code;
}

int cmd_audit(const std::string& path, const RunOptions& options, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const RunReport rep = load_and_run(path, options);
  if (!out_path.empty()) write_output(out_path, report_json(rep).dump(2) + "\n", out);
  out << "case " << path << "  model " << to_string(options.model) << "  scheme " << to_string(options.scheme)
      << "  tolerance " << format_number(options.tolerance) << "\n";
  if (!rep.result) {
    err << "error: " << path << ": " << rep.failure << "\n";
    return kExitNotOptimal;
  }
  for (const auto& e : rep.audit->entries) {
    out << (e.pass ? "PASS " : "FAIL ") << e.name << "  lhs " << fixed(e.lhs) << "  rhs " << fixed(e.rhs)
        << "  residual " << format_number(e.residual) << "\n";
  }
  const Settlement& s = *rep.settlement;
  out << "load_payment " << fixed(s.load_payment) << "  generator_payments " << fixed(s.generator_payments())
      << "  congestion_rent " << fixed(s.congestion_rent_pre + s.congestion_rent_post) << "\n";
  out << "iso_residual " << fixed(s.iso_residual) << "\n";
  const double scale = options.tolerance * (1.0 + std::abs(s.load_payment));
  if (std::abs(s.iso_residual) > scale) {
    double total = 0.0;
    for (const auto& [node, v] : s.critical_extra_terms) total += v;
    out << "  nonzero ISO residual; critical-generator terms not paid to generators:\n";
    for (const auto& [node, v] : s.critical_extra_terms) {
      out << "    node " << rep.grid.nodes[node].id << ": extra_term_rate * P = " << fixed(v) << "\n";
    }
    out << "    total " << fixed(total) << "  unexplained " << format_number(s.iso_residual - total) << "\n";
  }
  const bool pass = rep.audit->all_pass();
  out << (pass ? "audit: all identities hold\n" : "audit: identity violations found\n");
  return pass ? kExitOk : kExitAuditFailed;
}

int cmd_compare(const std::string& path, double tol, std::ostream& out, std::ostream& err) {
  RunOptions std_opts;
  std_opts.timestamp = false;
  std_opts.tolerance = tol;
  RunOptions enh_opts = std_opts;
  enh_opts.model = ModelKind::kEnhanced;
  const RunReport a = load_and_run(path, std_opts);
  const RunReport b = load_and_run(path, enh_opts);
  if (!a.result || !b.result) {
    err << "error: " << path << ": " << (a.result ? b.failure : a.failure) << "\n";
    return kExitNotOptimal;
  }
  auto differs = [tol](double x, double y) { return std::abs(x - y) > tol * (1.0 + std::abs(x)); };

  bool identical = !differs(a.result->objective, b.result->objective);
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %14s %14s %14s %16s\n", "node", "lambda_std", "lambda_enh",
                "d_lambda", "dispatch_std", "dispatch_enh", "d_dispatch", "congestion_post");
  out << line;
  for (std::size_t n = 0; n < a.grid.nodes.size(); ++n) {
    const double la = a.result->duals.lambda[n], lb = b.result->duals.lambda[n];
    const double pa = a.result->dispatch[n], pb = b.result->dispatch[n];
    const double post = b.prices->nodes[n].congestion_post;
    identical = identical && !differs(la, lb) && !differs(pa, pb) && std::abs(post) <= tol;
    std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %14s %14s %14s %16s\n", a.grid.nodes[n].id.c_str(),
                  fixed(la).c_str(), fixed(lb).c_str(), fixed(lb - la).c_str(), fixed(pa).c_str(),
                  fixed(pb).c_str(), fixed(pb - pa).c_str(), fixed(post).c_str());
    out << line;
  }
  out << "objective_std " << fixed(a.result->objective) << "  objective_enh " << fixed(b.result->objective)
      << "  d_objective " << fixed(b.result->objective - a.result->objective) << "\n";
  out << (identical ? "models identical\n" : "models differ\n");
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clear DC power-flow electricity auctions and audit their settlements."};
  app.name("gridclear");
  app.require_subcommand(1);

  std::string model = "standard";
  std::string scheme = "dual_consistent";
  std::string format = "json";
  std::string out_path;
  bool no_timestamp = false;
  unsigned jobs = 1;
  std::vector<std::string> paths;
  std::string path;

  auto* clear = app.add_subcommand("clear", "Clear one or more cases and write run reports");
  clear->add_option("cases", paths, "Case files")->required();
  clear->add_option("--model", model, "standard or enhanced")->check(CLI::IsMember({"standard", "enhanced"}));
  clear->add_option("--scheme", scheme, "dual_consistent, lmp_only or caiso")
      ->check(CLI::IsMember({"dual_consistent", "lmp_only", "caiso"}));
  clear->add_option("--out", out_path, "Output file (default stdout)");
  clear->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  clear->add_option("--jobs", jobs, "Cases cleared in parallel")->check(CLI::PositiveNumber);
  clear->add_flag("--no-timestamp", no_timestamp, "Omit generated_at and wall time");

  auto* audit = app.add_subcommand("audit", "Clear, settle and check the money identities");
  audit->add_option("case", path, "Case file")->required();
  audit->add_option("--model", model, "standard or enhanced")->check(CLI::IsMember({"standard", "enhanced"}));
  audit->add_option("--scheme", scheme, "dual_consistent, lmp_only or caiso")
      ->check(CLI::IsMember({"dual_consistent", "lmp_only", "caiso"}));
  audit->add_option("--out", out_path, "Also write the JSON run report here");
  audit->add_flag("--no-timestamp", no_timestamp, "Omit generated_at and wall time");

  auto* compare = app.add_subcommand("compare", "Side-by-side standard and enhanced clearing");
  compare->add_option("case", path, "Case file")->required();

  std::uint64_t seed = 1;
  RandomCaseOptions gen_opts;
  bool no_contingencies = false;
  auto* generate = app.add_subcommand("generate", "Write a random feasible case");
  generate->add_option("--seed", seed, "Generator seed")->required();
  generate->add_option("--min-nodes", gen_opts.min_nodes, "Smallest node count")->check(CLI::Range(2, 1000));
  generate->add_option("--max-nodes", gen_opts.max_nodes, "Largest node count")->check(CLI::Range(2, 1000));
  generate->add_flag("--no-contingencies", no_contingencies, "Leave the critical sets empty");
  generate->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    RunOptions options;
    options.model = parse_model_kind(model);
    options.scheme = parse_payment_scheme(scheme);
    options.timestamp = !no_timestamp;
    options.tolerance = tolerance_from_env();

    if (*clear) return cmd_clear(paths, options, format, out_path, jobs, out, err);
    if (*audit) return cmd_audit(path, options, out_path, out, err);
    if (*compare) return cmd_compare(path, options.tolerance, out, err);
    if (*generate) {
      gen_opts.with_contingencies = !no_contingencies;
      if (gen_opts.max_nodes < gen_opts.min_nodes) throw InputError("--max-nodes must be >= --min-nodes");
      write_output(out_path, case_to_json(generate_random_case(seed, gen_opts)).dump(2) + "\n", out);
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace gridclear::cli
