#pragma once

#include <cstdint>

#include "gridclear/network.hpp"

namespace gridclear {

struct RandomCaseOptions {
  std::size_t min_nodes = 3;
  std::size_t max_nodes = 20;
  double min_cost = 5.0;    // $/MWh
  double max_cost = 100.0;  // $/MWh
  // Adds critical branches and generator contingencies with emergency
  // ratings that the proportional dispatch always satisfies.
  bool with_contingencies = true;
};

/// Deterministic random case for a seed. Every generated case is feasible:
/// normal and emergency ratings are set above the flows of a dispatch that
/// spreads demand across generators in proportion to capacity.
Case generate_random_case(std::uint64_t seed, const RandomCaseOptions& options = {});

}  // namespace gridclear
