#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gridclear/network.hpp"

namespace gridclear {

using nlohmann::json;

std::size_t Case::node_index(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  throw CaseError("unknown node id '" + std::string(id) + "'");
}

std::size_t Case::branch_index(std::string_view id) const {
  for (std::size_t k = 0; k < branches.size(); ++k) {
    if (branches[k].id == id) return k;
  }
  throw CaseError("unknown branch id '" + std::string(id) + "'");
}

std::size_t Case::generator_count() const {
  std::size_t count = 0;
  for (const Node& n : nodes) count += n.generator.has_value();
  return count;
}

double Case::total_demand() const {
  double sum = 0.0;
  for (const Node& n : nodes) sum += n.d_fixed;
  return sum;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw CaseError(path + ": " + message);
}

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void check_finite(const std::string& path, double v) {
  if (!std::isfinite(v)) fail(path, "must be finite");
}

}  // namespace

void validate_case(const Case& c) {
  if (c.nodes.empty()) fail("nodes", "must list at least one node");

  std::unordered_map<std::string, std::size_t> node_ids;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Node& n = c.nodes[i];
    const std::string path = at("nodes", i);
    if (n.id.empty()) fail(path + ".id", "must be non-empty");
    if (!node_ids.emplace(n.id, i).second) {
      fail(path + ".id", "duplicate node id '" + n.id + "'");
    }
    check_finite(path + ".d_fixed", n.d_fixed);
    if (n.d_fixed < 0.0) fail(path + ".d_fixed", "must be >= 0");
    if (n.generator) {
      const Generator& g = *n.generator;
      check_finite(path + ".generator.cost", g.cost);
      check_finite(path + ".generator.p_max", g.p_max);
      if (g.p_max <= 0.0) fail(path + ".generator.p_max", "must be > 0");
      if (g.online != 0 && g.online != 1) fail(path + ".generator.online", "must be 0 or 1");
    }
  }

  if (!node_ids.count(c.reference_node)) {
    fail("reference_node", "'" + c.reference_node + "' is not a node id");
  }

  std::unordered_set<std::string> branch_ids;
  std::vector<std::vector<std::size_t>> adjacency(c.nodes.size());
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const Branch& b = c.branches[k];
    const std::string path = at("branches", k);
    if (b.id.empty()) fail(path + ".id", "must be non-empty");
    if (!branch_ids.insert(b.id).second) fail(path + ".id", "duplicate branch id '" + b.id + "'");
    auto from = node_ids.find(b.from);
    auto to = node_ids.find(b.to);
    if (from == node_ids.end()) fail(path + ".from", "'" + b.from + "' is not a node id");
    if (to == node_ids.end()) fail(path + ".to", "'" + b.to + "' is not a node id");
    if (b.from == b.to) fail(path, "from and to must differ");
    check_finite(path + ".susceptance", b.susceptance);
    check_finite(path + ".rate_a", b.rate_a);
    check_finite(path + ".rate_c", b.rate_c);
    if (b.susceptance <= 0.0) fail(path + ".susceptance", "must be > 0");
    if (b.rate_a <= 0.0) fail(path + ".rate_a", "must be > 0");
    if (b.rate_c < b.rate_a) fail(path + ".rate_c", "must be >= rate_a");
    adjacency[from->second].push_back(to->second);
    adjacency[to->second].push_back(from->second);
  }

  // Connectivity from the reference node.
  std::vector<bool> seen(c.nodes.size(), false);
  std::queue<std::size_t> frontier;
  frontier.push(node_ids.at(c.reference_node));
  seen[frontier.front()] = true;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    if (!seen[i]) fail(at("nodes", i), "node '" + c.nodes[i].id + "' is disconnected from the reference node");
  }

  std::set<std::string> crit_branches;
  for (std::size_t i = 0; i < c.critical_branches.size(); ++i) {
    const std::string& id = c.critical_branches[i];
    if (!branch_ids.count(id)) fail(at("critical_branches", i), "'" + id + "' is not a branch id");
    if (!crit_branches.insert(id).second) fail(at("critical_branches", i), "duplicate entry '" + id + "'");
  }

  std::set<std::string> crit_nodes;
  for (std::size_t i = 0; i < c.critical_contingencies.size(); ++i) {
    const std::string& id = c.critical_contingencies[i];
    auto it = node_ids.find(id);
    if (it == node_ids.end()) fail(at("critical_contingencies", i), "'" + id + "' is not a node id");
    if (!c.nodes[it->second].generator) {
      fail(at("critical_contingencies", i), "node '" + id + "' hosts no generator");
    }
    if (!crit_nodes.insert(id).second) fail(at("critical_contingencies", i), "duplicate entry '" + id + "'");
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string field_path(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double get_number(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_number()) fail(field_path(path, key), "expected a number");
  return v.get<double>();
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) fail(field_path(path, key), "expected a string");
  return v.get<std::string>();
}

const json& get_array(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_array()) fail(field_path(path, key), "expected an array");
  return v;
}

Generator parse_generator(const json& g, const std::string& path) {
  if (g.is_array()) fail(path, "at most one generator per node is supported");
  if (!g.is_object()) fail(path, "expected an object");
  reject_unknown_keys(g, path, {"cost", "p_max", "frequency_responsive", "online"});
  Generator gen;
  gen.cost = get_number(g, path, "cost");
  gen.p_max = get_number(g, path, "p_max");
  const json& fr = require(g, path, "frequency_responsive");
  if (!fr.is_boolean()) fail(path + ".frequency_responsive", "expected a boolean");
  gen.frequency_responsive = fr.get<bool>();
  const json& online = require(g, path, "online");
  if (online.is_boolean()) {
    gen.online = online.get<bool>() ? 1 : 0;
  } else if (online.is_number_integer()) {
    gen.online = online.get<int>();
  } else {
    fail(path + ".online", "expected 0, 1, or a boolean");
  }
  return gen;
}

}  // namespace

Case load_case(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw CaseError(std::string("document: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  reject_unknown_keys(doc, "",
                      {"nodes", "branches", "reference_node", "critical_branches",
                       "critical_contingencies"});

  Case c;
  const json& nodes = get_array(doc, "", "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = at("nodes", i);
    const json& n = nodes[i];
    if (!n.is_object()) fail(path, "expected an object");
    reject_unknown_keys(n, path, {"id", "generator", "d_fixed"});
    Node node;
    node.id = get_string(n, path, "id");
    node.d_fixed = get_number(n, path, "d_fixed");
    if (auto g = n.find("generator"); g != n.end() && !g->is_null()) {
      node.generator = parse_generator(*g, path + ".generator");
    }
    c.nodes.push_back(std::move(node));
  }

  const json& branches = get_array(doc, "", "branches");
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const std::string path = at("branches", k);
    const json& b = branches[k];
    if (!b.is_object()) fail(path, "expected an object");
    reject_unknown_keys(b, path, {"id", "from", "to", "susceptance", "rate_a", "rate_c"});
    Branch br;
    br.id = get_string(b, path, "id");
    br.from = get_string(b, path, "from");
    br.to = get_string(b, path, "to");
    br.susceptance = get_number(b, path, "susceptance");
    br.rate_a = get_number(b, path, "rate_a");
    br.rate_c = get_number(b, path, "rate_c");
    c.branches.push_back(std::move(br));
  }

  c.reference_node = get_string(doc, "", "reference_node");

  auto string_list = [&doc](const char* key) {
    std::vector<std::string> out;
    const json& arr = get_array(doc, "", key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) fail(at(key, i), "expected a string");
      out.push_back(arr[i].get<std::string>());
    }
    return out;
  };
  c.critical_branches = string_list("critical_branches");
  c.critical_contingencies = string_list("critical_contingencies");

  validate_case(c);
  return c;
}

Case load_case_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaseError(path + ": cannot open case file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_case(buffer.str());
}

json case_to_json(const Case& c) {
  json doc;
  doc["nodes"] = json::array();
  for (const Node& n : c.nodes) {
    json node{{"id", n.id}, {"d_fixed", n.d_fixed}};
    if (n.generator) {
      node["generator"] = {{"cost", n.generator->cost},
                           {"p_max", n.generator->p_max},
                           {"frequency_responsive", n.generator->frequency_responsive},
                           {"online", n.generator->online}};
    }
    doc["nodes"].push_back(std::move(node));
  }
  doc["branches"] = json::array();
  for (const Branch& b : c.branches) {
    doc["branches"].push_back({{"id", b.id},
                               {"from", b.from},
                               {"to", b.to},
                               {"susceptance", b.susceptance},
                               {"rate_a", b.rate_a},
                               {"rate_c", b.rate_c}});
  }
  doc["reference_node"] = c.reference_node;
  doc["critical_branches"] = c.critical_branches;
  doc["critical_contingencies"] = c.critical_contingencies;
  return doc;
}

}  // namespace gridclear
