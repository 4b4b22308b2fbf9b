#pragma once

#include <array>
#include <random>
#include <vector>

#include "rcsn/instance.hpp"
#include "rcsn/instance_gen.hpp"

namespace testutil {

struct ArcSpec {
  int tail;
  int head;
  int capacity;
  double cost = 1.0;
};

inline rcsn::Instance make_instance(int n_nodes, rcsn::NodeId root,
                                    std::vector<rcsn::NodeId> terminals,
                                    const std::vector<ArcSpec>& arcs) {
  rcsn::Instance inst;
  for (int v = 0; v < n_nodes; ++v) inst.nodes.push_back(v);
  inst.root = root;
  inst.terminals = std::move(terminals);
  for (const ArcSpec& s : arcs)
    inst.arcs.push_back(rcsn::Arc{s.tail, s.head, s.capacity, s.cost});
  inst.validate();
  return inst;
}

// small connected instances with varied shapes, one per seed
inline rcsn::Instance small_random_instance(unsigned seed, int max_k = 0) {
  rcsn::GenConfig cfg;
  cfg.n_nodes = 6 + static_cast<int>(seed % 4);
  cfg.n_terminals = 2 + static_cast<int>(seed % 2);
  cfg.target_arc_count = 14 + static_cast<int>(seed % 7);
  cfg.seed = seed;
  cfg.max_k = max_k;
  return rcsn::generate_random(cfg);
}

// random sub-selection keeping every fictive arc selected
inline std::vector<char> random_selection(const rcsn::AugmentedInstance& aug,
                                          std::mt19937_64& rng, double keep_prob) {
  std::vector<char> sel(aug.arc_count(), 0);
  for (int a = 0; a < aug.arc_count(); ++a) {
    if (aug.is_fictive(a))
      sel[a] = 1;
    else
      sel[a] = (rng() % 1000) < keep_prob * 1000 ? 1 : 0;
  }
  return sel;
}

}  // namespace testutil
