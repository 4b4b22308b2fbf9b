#include "rcsn/feasibility.hpp"

#include <algorithm>
#include <stdexcept>

#include "rcsn/survivable.hpp"

namespace rcsn {

namespace {

long long subset_count(int n, int k) {
  long long c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > (1LL << 60)) return 1LL << 60;
  }
  return c;
}

} // namespace

VitalArcsResult most_vital_arcs(const AugmentedInstance &aug,
                                const std::vector<char> &selected,
                                const std::vector<char> &protected_arcs, int k,
                                long long enumeration_budget) {
  if (k < 0) throw std::invalid_argument("k < 0");
  if (static_cast<int>(selected.size()) != aug.arc_count() ||
      static_cast<int>(protected_arcs.size()) != aug.arc_count())
    throw std::invalid_argument("mask size mismatch");

  std::vector<ArcId> candidates;
  for (int a = 0; a < aug.initial_arc_count; ++a)
    if (selected[a] && !protected_arcs[a]) candidates.push_back(a);

  const int pick = std::min<int>(k, static_cast<int>(candidates.size()));
  if (subset_count(static_cast<int>(candidates.size()), pick) > enumeration_budget) {
    SeparationCut sep = separation_mip_cut(aug, selected, protected_arcs, k);
    VitalArcsResult out;
    out.scenario.failed = sep.cut.deleted;
    out.residual = sep.residual;
    out.used_mip = true;
    return out;
  }

  std::vector<int> base_cap = selection_capacities(aug, selected);
  VitalArcsResult best;
  best.residual = std::numeric_limits<long long>::max();

  // Lexicographic enumeration; only strict improvements replace the incumbent,
  // so ties resolve toward the smallest arc-id set.
  std::vector<int> comb(pick);
  for (int i = 0; i < pick; ++i) comb[i] = i;
  std::vector<int> cap = base_cap;
  while (true) {
    for (int i : comb) cap[candidates[i]] = 0;
    long long value = max_flow(aug, cap).value;
    for (int i : comb) cap[candidates[i]] = base_cap[candidates[i]];
    if (value < best.residual) {
      best.residual = value;
      best.scenario.failed.clear();
      for (int i : comb) best.scenario.failed.push_back(candidates[i]);
    }
    if (pick == 0) break;
    int j = pick - 1;
    while (j >= 0 && comb[j] == static_cast<int>(candidates.size()) - pick + j) --j;
    if (j < 0) break;
    ++comb[j];
    for (int i = j + 1; i < pick; ++i) comb[i] = comb[i - 1] + 1;
  }
  return best;
}

FeasibilityResult check_feasibility(const AugmentedInstance &aug,
                                    const std::vector<char> &selected,
                                    const std::vector<char> &protected_arcs, int k,
                                    long long enumeration_budget) {
  VitalArcsResult vital =
      most_vital_arcs(aug, selected, protected_arcs, k, enumeration_budget);
  FeasibilityResult out;
  out.residual = vital.residual;
  out.witness = vital.scenario;
  out.feasible = vital.residual >= aug.num_terminals();
  return out;
}

int count_arc_disjoint_paths(const AugmentedInstance &aug,
                             const std::vector<char> &selected, NodeId terminal) {
  if (!aug.base.is_terminal(terminal))
    throw std::invalid_argument("not a terminal: " + std::to_string(terminal));
  std::vector<int> cap(aug.arc_count(), 0);
  for (int a = 0; a < aug.arc_count(); ++a)
    if (selected[a]) cap[a] = 1;
  return static_cast<int>(max_flow_to(aug, cap, terminal).value);
}

} // namespace rcsn
