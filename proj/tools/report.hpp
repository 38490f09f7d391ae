#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gridclear/settlement.hpp"

namespace gridclear::cli {

using Json = nlohmann::ordered_json;

struct RunOptions {
  ModelKind model = ModelKind::kStandard;
  PaymentScheme scheme = PaymentScheme::kDualConsistent;
  double tolerance = kDefaultAuditTol;
  bool timestamp = true;
};

/// Everything produced for one case file. `result` is empty when the
/// auction had no optimal solution; `failure` then holds the reason.
struct RunReport {
  std::string path;
  Case grid;
  RunOptions options;
  GdfTable gdfs;
  std::optional<ClearingResult> result;
  std::optional<LmpBreakdown> prices;
  std::optional<Settlement> settlement;
  std::optional<AuditReport> audit;
  std::string status;  // optimal, infeasible, unbounded
  std::string failure;
  std::vector<std::string> certificate;
};

/// Clears, settles and audits an already-validated case.
RunReport run_case(const std::string& path, const Case& grid, const RunOptions& options);

/// Stable 64-bit FNV-1a of the canonical case JSON, as 16 hex digits.
std::string case_fingerprint(const Case& grid);

Json report_json(const RunReport& report);
std::string report_csv(const RunReport& report);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace gridclear::cli
