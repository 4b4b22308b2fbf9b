#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "rcsn/feasibility.hpp"
#include "rcsn/instance.hpp"
#include "rcsn/max_flow.hpp"
#include "rcsn/milp.hpp"

namespace rcsn {

struct SurvivableProblem {
  const AugmentedInstance *aug = nullptr;
  int k = 0;      // simultaneous arc failures to survive
  int k_prot = 0; // arcs that may be hardened against failure
};

struct NetworkDesign {
  std::vector<ArcId> selected;       // sorted, includes all fictive arcs
  std::vector<ArcId> protected_arcs; // sorted subset of selected
  double cost = 0.0;
  bool certified = false; // worst-case residual recheck passed
};

enum class SeparationMode { Auto, Enumerate, Mip };

struct SurvivableOptions {
  bool use_valid_inequalities = true;
  bool uniform_capacity_mode = false; // requires equal initial capacities, k_prot = 0
  SeparationMode separation = SeparationMode::Auto;
  bool use_enhancement = true; // bilevel only: sparsify + lift before cutting
  bool full_resolve = false;   // debug path: restart the MILP after each cut
  milp::SolveConfig milp;
  std::ostream *trace = nullptr; // JSON-lines progress records
};

struct SurvivableResult {
  milp::SolveStatus status = milp::SolveStatus::Infeasible;
  NetworkDesign design; // meaningful when status is Optimal or BudgetExceeded
  long long iterations = 0; // cuts or scenarios added
  long long node_count = 0;
  long long lp_count = 0;
};

/// Cut-based design: rows demand residual cut capacity >= |T| after the k
/// heaviest unprotected selected arcs of the cut fail. Rows are generated at
/// integral incumbents.
SurvivableResult solve_cutset(const SurvivableProblem &prob,
                              const SurvivableOptions &opts = {});

/// Scenario-based design: one routing copy per failure scenario, scenarios
/// added from worst-case failures of each incumbent, starting from {empty}.
SurvivableResult solve_flow(const SurvivableProblem &prob,
                            const SurvivableOptions &opts = {});

/// Interdiction-dual design: cuts come from optimal attacker responses,
/// computed by the mixed-integer dual subproblem.
SurvivableResult solve_bilevel(const SurvivableProblem &prob,
                               const SurvivableOptions &opts = {});

struct SeparationCut {
  CutCertificate cut;
  long long residual = 0; // value of the worst attack on the returned cut
};

/// MIP separation: min-capacity selected cut after its best k unprotected
/// deletions; exact counterpart of the enumeration path.
SeparationCut separation_mip_cut(const AugmentedInstance &aug,
                                 const std::vector<char> &selected,
                                 const std::vector<char> &protected_arcs, int k,
                                 const milp::SolveConfig &cfg = {});

struct AttackCut {
  std::vector<char> lambda; // cut membership per arc
  std::vector<char> gamma;  // attacked per arc
  std::vector<char> lifted; // gamma restricted to attacked-and-deletable arcs
  Scenario scenario;        // deletable attacked arcs
  long long value = 0;      // residual capacity of the attack
};

/// Attacker subproblem for the bilevel loop: picks up to k deletable arcs and
/// a cut minimizing surviving capacity. Solved as a MILP on binary deletions
/// with continuous cut duals; vertices are asserted integral.
AttackCut solve_attack_subproblem(const AugmentedInstance &aug,
                                  const std::vector<char> &selected,
                                  const std::vector<char> &protected_arcs, int k,
                                  const milp::SolveConfig &cfg = {});

/// Sparsest non-surviving cut at the incumbent; returns the lifted selection
/// (incumbent plus every arc off that cut). Throws std::logic_error when no
/// such cut exists, i.e. the incumbent was actually feasible.
std::vector<char> enhance_selection(const AugmentedInstance &aug,
                                    const std::vector<char> &selected,
                                    const std::vector<char> &protected_arcs, int k,
                                    const milp::SolveConfig &cfg = {});

/// Master variable handles used when emitting strengthening rows.
struct MasterVars {
  std::vector<int> y;          // per arc
  std::vector<int> p;          // per initial arc; empty when k_prot = 0
};

/// Degree- and connectivity-based strengthening rows, selected per (k, k_prot).
std::vector<milp::Row> valid_inequalities(const SurvivableProblem &prob,
                                          const MasterVars &vars);

} // namespace rcsn
