#pragma once

#include <span>
#include <vector>

#include "rcsn/instance.hpp"

namespace rcsn {

struct FlowAssignment {
  std::vector<long long> flow; // per arc id
  long long value = 0;
};

/// Integral max flow root -> sink under the given per-arc capacities.
FlowAssignment max_flow(const AugmentedInstance &aug, std::span<const int> cap);

/// Same, but into an arbitrary target node.
FlowAssignment max_flow_to(const AugmentedInstance &aug, std::span<const int> cap,
                           NodeId target);

struct CutCertificate {
  std::vector<NodeId> side_root;  // nodes reachable from the root in the residual
  std::vector<ArcId> cutset;      // arcs from side_root into the far side, sorted
  std::vector<ArcId> deleted;     // C subset of cutset treated as failed
  long long residual_capacity = 0;
};

/// Minimum root->sink cut under `cap`. residual_capacity equals the max-flow
/// value; the equality is asserted and a violation throws std::logic_error.
CutCertificate min_cut(const AugmentedInstance &aug, std::span<const int> cap);

} // namespace rcsn
