#pragma once

// Network/market instance, case-file ingestion, and the sensitivity
// factors the auctions are built from: PTDFs (branch flow per MW injected
// at a node and withdrawn at the reference node) and generation-loss
// distribution factors for critical generator outages.

#include <Eigen/Dense>
#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridclear {

/// Thrown for any schema or invariant violation in case input. The message
/// starts with the JSON path of the offending field.
class CaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Generator {
  double cost = 0.0;   // $/MWh
  double p_max = 0.0;  // MW
  bool frequency_responsive = false;
  int online = 1;  // u_n, 0 or 1
};

struct Node {
  std::string id;
  std::optional<Generator> generator;
  double d_fixed = 0.0;  // MW
};

struct Branch {
  std::string id;
  std::string from;
  std::string to;
  double susceptance = 0.0;  // per unit
  double rate_a = 0.0;       // MW, normal
  double rate_c = 0.0;       // MW, emergency
};

struct Case {
  std::vector<Node> nodes;
  std::vector<Branch> branches;
  std::string reference_node;
  std::vector<std::string> critical_branches;
  std::vector<std::string> critical_contingencies;  // outage node ids

  std::size_t node_index(std::string_view id) const;
  std::size_t branch_index(std::string_view id) const;
  std::size_t reference_index() const { return node_index(reference_node); }
  std::size_t generator_count() const;
  double total_demand() const;
};

/// Throws CaseError on the first violated invariant.
void validate_case(const Case& c);

/// Parses and validates a case document. Unknown keys are rejected.
Case load_case(std::string_view bytes);
Case load_case_file(const std::string& path);

nlohmann::json case_to_json(const Case& c);

/// Branch x node matrix of flow sensitivities w.r.t. the reference node.
class PtdfMatrix {
 public:
  PtdfMatrix() = default;
  explicit PtdfMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  double at(std::size_t branch, std::size_t node) const {
    return entries_(static_cast<Eigen::Index>(branch), static_cast<Eigen::Index>(node));
  }
  std::size_t branch_count() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t node_count() const { return static_cast<std::size_t>(entries_.cols()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  /// Branch flows for a nodal injection vector (MW).
  Eigen::VectorXd flows(const Eigen::VectorXd& injections) const {
    return entries_ * injections;
  }

 private:
  Eigen::MatrixXd entries_;
};

PtdfMatrix compute_ptdf(const Case& c);

/// Branch flows from a direct DC power-flow solve of the reduced nodal
/// susceptance system. Injections must sum to zero; the reference node
/// absorbs any mismatch.
Eigen::VectorXd dc_branch_flows(const Case& c, const Eigen::VectorXd& injections);

/// Distribution factors for one critical generator outage, indexed by node.
struct ContingencyGdf {
  std::size_t outage_node = 0;
  std::vector<double> factors;
};

class ContingencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generation-loss distribution factors for the outage of the generator at
/// `contingency_node`: -1 there, a share of online responsive capacity at
/// every other responsive node, and 0 elsewhere.
std::vector<double> compute_gdf(const Case& c, std::string_view contingency_node);

class GdfTable {
 public:
  GdfTable() = default;
  explicit GdfTable(std::vector<ContingencyGdf> entries) : entries_(std::move(entries)) {}

  const std::vector<ContingencyGdf>& entries() const { return entries_; }
  const ContingencyGdf* find(std::size_t outage_node) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<ContingencyGdf> entries_;
};

/// GDFs for every critical contingency listed in the case.
GdfTable compute_gdf_table(const Case& c);

/// Net flow change on `branch` per MW of output lost at the outage node
/// when that output is redistributed by its GDFs: sum_s PTDF(k,s) GDF(s).
double gdf_shift_factor(const PtdfMatrix& ptdf, std::size_t branch,
                        const ContingencyGdf& gdf);

}  // namespace gridclear
