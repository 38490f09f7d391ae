#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gridclear/random_case.hpp"

namespace gridclear {
namespace {

// mt19937_64 output is fully specified; the std distributions are not, so
// draws are mapped by hand to keep cases identical across standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Case generate_random_case(std::uint64_t seed, const RandomCaseOptions& options) {
  Draw draw(seed);
  Case c;

  const std::size_t n = draw.index(std::max<std::size_t>(options.min_nodes, 2),
                                   std::max(options.min_nodes, options.max_nodes));
  for (std::size_t i = 0; i < n; ++i) c.nodes.push_back(Node{"n" + std::to_string(i + 1), std::nullopt, 0.0});
  c.reference_node = c.nodes[draw.index(0, n - 1)].id;

  // Spanning tree plus a few meshing branches.
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace(draw.index(0, i - 1), i);
  const std::size_t extra = draw.index(0, n);
  for (std::size_t t = 0; t < extra; ++t) {
    std::size_t a = draw.index(0, n - 1);
    std::size_t b = draw.index(0, n - 1);
    if (a == b) continue;
    edges.emplace(std::min(a, b), std::max(a, b));
  }
  for (const auto& [a, b] : edges) {
    Branch br;
    br.id = c.nodes[a].id + "-" + c.nodes[b].id;
    br.from = c.nodes[a].id;
    br.to = c.nodes[b].id;
    br.susceptance = draw.uniform(5.0, 20.0);
    c.branches.push_back(std::move(br));
  }

  auto make_generator = [&] {
    Generator g;
    g.cost = draw.uniform(options.min_cost, options.max_cost);
    g.p_max = draw.uniform(20.0, 200.0);
    g.frequency_responsive = draw.chance(0.75);
    g.online = draw.chance(0.9) ? 1 : 0;
    return g;
  };
  for (Node& node : c.nodes) {
    if (draw.chance(0.6)) node.generator = make_generator();
  }
  while (c.generator_count() < 2) {
    Node& node = c.nodes[draw.index(0, n - 1)];
    if (!node.generator) node.generator = make_generator();
  }

  for (Node& node : c.nodes) {
    if (draw.chance(0.7)) node.d_fixed = draw.uniform(10.0, 80.0);
  }
  if (c.total_demand() == 0.0) c.nodes[draw.index(0, n - 1)].d_fixed = draw.uniform(10.0, 80.0);

  double capacity = 0.0;
  for (const Node& node : c.nodes) {
    if (node.generator) capacity += node.generator->p_max;
  }
  const double target = draw.uniform(0.3, 0.75) * capacity;
  if (c.total_demand() > target) {
    const double scale = target / c.total_demand();
    for (Node& node : c.nodes) node.d_fixed *= scale;
  }

  // Proportional dispatch is feasible by construction; ratings sit above its flows.
  const double share = c.total_demand() / capacity;
  Eigen::VectorXd injection(static_cast<Eigen::Index>(n));
  std::vector<double> proportional(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.nodes[i].generator) proportional[i] = share * c.nodes[i].generator->p_max;
    injection[static_cast<Eigen::Index>(i)] = proportional[i] - c.nodes[i].d_fixed;
  }
  const PtdfMatrix ptdf = compute_ptdf(c);
  const Eigen::VectorXd flow = ptdf.flows(injection);
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    Branch& br = c.branches[k];
    br.rate_a = std::max(std::abs(flow[static_cast<Eigen::Index>(k)]) * draw.uniform(1.02, 1.8), 5.0);
    br.rate_c = br.rate_a * draw.uniform(1.0, 1.3);
  }

  if (options.with_contingencies) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.nodes[i].generator) continue;
      double responders = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        const auto& g = c.nodes[s].generator;
        if (s != i && g && g->frequency_responsive) responders += g->online * g->p_max;
      }
      if (responders > 0.0) candidates.push_back(i);
    }
    if (!candidates.empty()) {
      const std::size_t n_cont = draw.index(1, std::min<std::size_t>(3, candidates.size()));
      std::set<std::size_t> picked;
      while (picked.size() < n_cont) picked.insert(candidates[draw.index(0, candidates.size() - 1)]);
      for (std::size_t i : picked) c.critical_contingencies.push_back(c.nodes[i].id);

      const std::size_t n_crit = draw.index(1, std::min<std::size_t>(3, c.branches.size()));
      std::set<std::size_t> crit;
      while (crit.size() < n_crit) crit.insert(draw.index(0, c.branches.size() - 1));
      for (std::size_t k : crit) {
        Branch& br = c.branches[k];
        br.rate_c = br.rate_a;
        for (std::size_t outage : picked) {
          const ContingencyGdf gdf{outage, compute_gdf(c, c.nodes[outage].id)};
          const double post = flow[static_cast<Eigen::Index>(k)] +
                              proportional[outage] * gdf_shift_factor(ptdf, k, gdf);
          br.rate_c = std::max(br.rate_c, std::abs(post) * draw.uniform(1.02, 1.4));
        }
        c.critical_branches.push_back(br.id);
      }
    }
  }

  validate_case(c);
  return c;
}

}  // namespace gridclear
