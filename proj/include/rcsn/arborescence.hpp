#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rcsn/instance.hpp"
#include "rcsn/milp.hpp"

namespace rcsn {

enum class ArbObjective { Cost, WorstRobustness, BalancedRobustness };

/// One model = an objective plus any bounds that do not restate it.
struct ArbModelSpec {
  ArbObjective objective = ArbObjective::Cost;
  std::optional<int> bound_worst;      // cap on max terminals lost to one failure
  std::optional<double> bound_cost;    // cap on total selected cost
  std::optional<int> bound_balanced;   // cap on the sum of per-node worst losses
};

struct Arborescence {
  std::vector<ArcId> arcs;     // selected arcs, zero-flow arcs pruned, sorted
  std::vector<long long> x;    // terminals routed through each arc (full size)
  double cost = 0.0;
  int worst_robustness = 0;    // max terminals cut off by one arc failure
  int balanced_robustness = 0; // sum over nodes of the worst outgoing loss
};

/// Handle into a model built by build_flow_model: per-arc variable ids.
struct ArbVars {
  std::vector<int> x; // continuous routing load, one per arc
  std::vector<int> y; // binary selection, one per arc
};

/// Appends the routing polytope to `model`: conservation rows (root emits
/// |T|, each terminal absorbs one), in-degree <= 1, and x <= u y coupling.
ArbVars build_flow_model(const Instance &inst, milp::Model &model);

struct ArbSolveResult {
  milp::SolveStatus status = milp::SolveStatus::Infeasible;
  Arborescence arb; // meaningful when status == Optimal
  long long node_count = 0;
  long long lp_count = 0;
};

ArbSolveResult solve_model(const Instance &inst, const ArbModelSpec &spec,
                           const milp::SolveConfig &cfg = {});

/// Terminals disconnected in the worst single-arc deletion, by simulation.
int evaluate_worst_case(const Instance &inst, const Arborescence &arb);

/// For uncapacitated instances (every u >= |T|): reattach tree nodes adjacent
/// to the root directly onto the root. Never worsens the worst case.
Arborescence normalize_root_attach(const Instance &inst, const Arborescence &arb);

struct RobustnessReport {
  double min_cost = 0.0;              // unconstrained cost optimum
  int min_worst = 0;                  // unconstrained worst-case optimum
  double cost_at_min_worst = 0.0;
  double delta_cost_worst = 0.0;      // relative price of the robust optimum
  int min_balanced = 0;
  double cost_at_min_balanced = 0.0;
  double delta_cost_balanced = 0.0;
  int worst_of_min_balanced = 0;      // worst case of the balanced optimum
  std::vector<std::pair<double, int>> worst_at_cost_gap; // (gap, robustness)
};

/// Full metric sweep over the model family; throws std::runtime_error when the
/// base cost model is infeasible.
RobustnessReport robustness_report(const Instance &inst, std::span<const double> cost_gaps,
                                   const milp::SolveConfig &cfg = {});

} // namespace rcsn
