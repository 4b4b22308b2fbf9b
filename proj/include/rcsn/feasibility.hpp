#pragma once

#include <vector>

#include "rcsn/instance.hpp"
#include "rcsn/max_flow.hpp"

namespace rcsn {

inline constexpr long long kDefaultEnumerationBudget = 200000;

struct VitalArcsResult {
  Scenario scenario;        // worst failure set, |failed| <= k
  long long residual = 0;   // max flow surviving that failure set
  bool used_mip = false;
};

/// Worst k-failure among selected, unprotected, non-fictive arcs. Enumerates
/// all k-subsets when their count fits the budget (ties resolved toward the
/// lexicographically smallest arc-id set), otherwise delegates to the
/// separation MIP.
VitalArcsResult most_vital_arcs(const AugmentedInstance &aug,
                                const std::vector<char> &selected,
                                const std::vector<char> &protected_arcs, int k,
                                long long enumeration_budget = kDefaultEnumerationBudget);

struct FeasibilityResult {
  bool feasible = false;
  Scenario witness;        // a worst failure set; meaningful when infeasible
  long long residual = 0;  // flow surviving the worst failure set
};

/// A selection survives k failures iff the worst-case residual flow still
/// routes one unit per terminal.
FeasibilityResult check_feasibility(const AugmentedInstance &aug,
                                    const std::vector<char> &selected,
                                    const std::vector<char> &protected_arcs, int k,
                                    long long enumeration_budget = kDefaultEnumerationBudget);

/// Number of arc-disjoint root->terminal paths inside the selection.
int count_arc_disjoint_paths(const AugmentedInstance &aug,
                             const std::vector<char> &selected, NodeId terminal);

} // namespace rcsn
