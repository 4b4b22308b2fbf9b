#pragma once

#include <cstdint>
#include <vector>

#include "rcsn/instance.hpp"

namespace rcsn {

struct GenConfig {
  int n_nodes = 10;
  int n_terminals = 3;
  int target_arc_count = 24;
  std::uint64_t seed = 1;
  double plane_size = 100.0;
  int max_k = 3; // full selection must survive this many failures
};

/// Seed-deterministic planar instance: nearest pairs become opposite arc
/// pairs, capacities scale with |T| and shrink away from the root, cost is
/// length times a load factor. Regenerates until the full selection passes
/// the max_k feasibility check; throws std::runtime_error when no attempt
/// within the retry budget does.
Instance generate_random(const GenConfig &cfg);

struct ThreePartitionInstance {
  int m = 0;
  int bound = 0;           // triple target B
  std::vector<int> demand; // 3m integers, each strictly between B/4 and B/2
};

/// Spanning-network reduction: root over m group nodes, a complete bipartite
/// layer of 3m item nodes, and demand-1 pendant chains per item. Uniform
/// capacity |T|, unit costs. The instance admits worst-case robustness B+1
/// iff the demands split into m triples of sum B.
Instance generate_3partition_graph(const ThreePartitionInstance &tp);

} // namespace rcsn
