#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rcsn {

using NodeId = int;
using ArcId = int;

struct Arc {
  NodeId tail = -1;
  NodeId head = -1;
  int capacity = 1;
  double cost = 0.0;
};

/// Rooted capacitated digraph with a terminal set. Arc ids are positions in `arcs`.
struct Instance {
  std::vector<NodeId> nodes;
  std::vector<Arc> arcs;
  NodeId root = -1;
  std::vector<NodeId> terminals;                  // sorted, unique, root excluded
  std::map<NodeId, std::array<double, 2>> coords; // optional planar embedding

  bool has_node(NodeId v) const;
  bool is_terminal(NodeId v) const;
  int num_terminals() const { return static_cast<int>(terminals.size()); }

  /// Throws std::invalid_argument on structural violations: duplicate or unknown
  /// node ids, arcs into the root, self-loops, capacity < 1, negative costs.
  void validate() const;
};

bool operator==(const Instance &a, const Instance &b);

/// Failure scenario: up to k failed arc ids, sorted.
struct Scenario {
  std::vector<ArcId> failed;
};

/// Instance plus a fictive super-sink: one unit-capacity, zero-cost arc per
/// terminal. Arc ids [0, initial_arc_count) are the original arcs, the rest
/// are fictive. Nodes carry compact indices for flow computations.
struct AugmentedInstance {
  Instance base;
  NodeId sink = -1;
  std::vector<Arc> arcs;
  int initial_arc_count = 0;

  std::vector<NodeId> node_ids; // base nodes followed by sink
  std::unordered_map<NodeId, int> node_index;
  std::vector<std::vector<ArcId>> out_arcs, in_arcs; // by node index
  std::vector<int> tail_index, head_index;           // per arc
  int root_index = -1, sink_index = -1;

  int arc_count() const { return static_cast<int>(arcs.size()); }
  int node_count() const { return static_cast<int>(node_ids.size()); }
  int num_terminals() const { return base.num_terminals(); }
  bool is_fictive(ArcId a) const { return a >= initial_arc_count; }
  ArcId fictive_arc_of(NodeId terminal) const;
  int index_of(NodeId v) const;
};

AugmentedInstance augment_with_sink(const Instance &inst);

/// Capacity vector for flow computations: cap(a) = arcs[a].capacity where
/// selected, 0 elsewhere; arcs listed in `zeroed` are forced to 0.
std::vector<int> selection_capacities(const AugmentedInstance &aug,
                                      const std::vector<char> &selected,
                                      std::span<const ArcId> zeroed = {});

/// Mask helpers (size = aug.arc_count()).
std::vector<char> full_selection(const AugmentedInstance &aug);
std::vector<char> mask_from_arcs(const AugmentedInstance &aug, std::span<const ArcId> arcs);

} // namespace rcsn
