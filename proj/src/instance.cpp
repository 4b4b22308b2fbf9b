#include "rcsn/instance.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace rcsn {

bool Instance::has_node(NodeId v) const {
  return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

bool Instance::is_terminal(NodeId v) const {
  return std::binary_search(terminals.begin(), terminals.end(), v);
}

void Instance::validate() const {
  std::set<NodeId> seen;
  for (NodeId v : nodes) {
    if (!seen.insert(v).second)
      throw std::invalid_argument("duplicate node id " + std::to_string(v));
  }
  if (!seen.count(root)) throw std::invalid_argument("root is not a node");
  if (terminals.empty()) throw std::invalid_argument("no terminals");
  if (!std::is_sorted(terminals.begin(), terminals.end()))
    throw std::invalid_argument("terminals not sorted");
  NodeId prev = -1;
  bool first = true;
  for (NodeId t : terminals) {
    if (!first && t == prev) throw std::invalid_argument("duplicate terminal");
    first = false;
    prev = t;
    if (t == root) throw std::invalid_argument("root listed as terminal");
    if (!seen.count(t)) throw std::invalid_argument("terminal is not a node");
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc &a = arcs[i];
    const std::string at = "arc " + std::to_string(i);
    if (!seen.count(a.tail) || !seen.count(a.head))
      throw std::invalid_argument(at + ": unknown endpoint");
    if (a.tail == a.head) throw std::invalid_argument(at + ": self-loop");
    if (a.head == root) throw std::invalid_argument(at + ": enters the root");
    if (a.capacity < 1) throw std::invalid_argument(at + ": capacity < 1");
    if (!(a.cost >= 0.0)) throw std::invalid_argument(at + ": negative cost");
  }
  for (const auto &[v, xy] : coords) {
    (void)xy;
    if (!seen.count(v)) throw std::invalid_argument("coordinates for unknown node");
  }
}

bool operator==(const Instance &a, const Instance &b) {
  auto arc_eq = [](const Arc &x, const Arc &y) {
    return x.tail == y.tail && x.head == y.head && x.capacity == y.capacity &&
           x.cost == y.cost;
  };
  if (a.nodes != b.nodes || a.root != b.root || a.terminals != b.terminals ||
      a.coords != b.coords || a.arcs.size() != b.arcs.size())
    return false;
  for (std::size_t i = 0; i < a.arcs.size(); ++i)
    if (!arc_eq(a.arcs[i], b.arcs[i])) return false;
  return true;
}

AugmentedInstance augment_with_sink(const Instance &inst) {
  inst.validate();
  AugmentedInstance aug;
  aug.base = inst;
  NodeId max_id = inst.root;
  for (NodeId v : inst.nodes) max_id = std::max(max_id, v);
  aug.sink = max_id + 1;

  aug.arcs = inst.arcs;
  aug.initial_arc_count = static_cast<int>(inst.arcs.size());
  for (NodeId t : inst.terminals)
    aug.arcs.push_back(Arc{t, aug.sink, 1, 0.0});

  aug.node_ids = inst.nodes;
  aug.node_ids.push_back(aug.sink);
  for (int i = 0; i < static_cast<int>(aug.node_ids.size()); ++i)
    aug.node_index.emplace(aug.node_ids[i], i);
  aug.root_index = aug.node_index.at(inst.root);
  aug.sink_index = aug.node_index.at(aug.sink);

  aug.out_arcs.assign(aug.node_ids.size(), {});
  aug.in_arcs.assign(aug.node_ids.size(), {});
  aug.tail_index.resize(aug.arc_count());
  aug.head_index.resize(aug.arc_count());
  for (int a = 0; a < aug.arc_count(); ++a) {
    aug.tail_index[a] = aug.node_index.at(aug.arcs[a].tail);
    aug.head_index[a] = aug.node_index.at(aug.arcs[a].head);
    aug.out_arcs[aug.tail_index[a]].push_back(a);
    aug.in_arcs[aug.head_index[a]].push_back(a);
  }
  return aug;
}

ArcId AugmentedInstance::fictive_arc_of(NodeId terminal) const {
  for (int a = initial_arc_count; a < arc_count(); ++a)
    if (arcs[a].tail == terminal) return a;
  throw std::invalid_argument("not a terminal: " + std::to_string(terminal));
}

int AugmentedInstance::index_of(NodeId v) const {
  auto it = node_index.find(v);
  if (it == node_index.end())
    throw std::invalid_argument("unknown node " + std::to_string(v));
  return it->second;
}

std::vector<int> selection_capacities(const AugmentedInstance &aug,
                                      const std::vector<char> &selected,
                                      std::span<const ArcId> zeroed) {
  if (static_cast<int>(selected.size()) != aug.arc_count())
    throw std::invalid_argument("selection mask size mismatch");
  std::vector<int> cap(aug.arc_count(), 0);
  for (int a = 0; a < aug.arc_count(); ++a)
    if (selected[a]) cap[a] = aug.arcs[a].capacity;
  for (ArcId a : zeroed) cap.at(a) = 0;
  return cap;
}

std::vector<char> full_selection(const AugmentedInstance &aug) {
  return std::vector<char>(aug.arc_count(), 1);
}

std::vector<char> mask_from_arcs(const AugmentedInstance &aug,
                                 std::span<const ArcId> arcs) {
  std::vector<char> mask(aug.arc_count(), 0);
  for (ArcId a : arcs) mask.at(a) = 1;
  return mask;
}

} // namespace rcsn
