#include "rcsn/arborescence.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace rcsn {

namespace {

struct Adjacency {
  std::unordered_map<NodeId, std::vector<int>> out, in; // arc indices
};

Adjacency adjacency(const Instance& inst) {
  Adjacency adj;
  for (int i = 0; i < static_cast<int>(inst.arcs.size()); ++i) {
    adj.out[inst.arcs[i].tail].push_back(i);
    adj.in[inst.arcs[i].head].push_back(i);
  }
  return adj;
}

// Subtree terminal counts below each kept arc; arcs carrying nothing are
// dropped so the result is inclusion-wise minimal.
Arborescence rebuild(const Instance& inst, const std::vector<int>& parent_arc) {
  Arborescence arb;
  arb.x.assign(inst.arcs.size(), 0);
  std::unordered_map<NodeId, std::vector<int>> children; // node -> arcs out of it
  for (int a : parent_arc)
    if (a >= 0) children[inst.arcs[a].tail].push_back(a);

  // Terminal count under each node, computed leaf-up over the parent forest.
  std::unordered_map<NodeId, long long> cnt;
  std::vector<NodeId> order;
  std::vector<NodeId> stack{inst.root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    auto it = children.find(v);
    if (it != children.end())
      for (int a : it->second) stack.push_back(inst.arcs[a].head);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    long long c = inst.is_terminal(v) ? 1 : 0;
    auto ch = children.find(v);
    if (ch != children.end())
      for (int a : ch->second) c += cnt.at(inst.arcs[a].head);
    cnt[v] = c;
  }
  for (int a : parent_arc) {
    if (a < 0) continue;
    long long c = cnt.at(inst.arcs[a].head);
    if (c == 0) continue; // nothing routed: prune
    arb.arcs.push_back(a);
    arb.x[a] = c;
    arb.cost += inst.arcs[a].cost;
  }
  std::sort(arb.arcs.begin(), arb.arcs.end());

  long long worst = 0;
  std::unordered_map<NodeId, long long> node_max;
  for (int a : arb.arcs) {
    worst = std::max(worst, arb.x[a]);
    auto& m = node_max[inst.arcs[a].tail];
    m = std::max(m, arb.x[a]);
  }
  long long balanced = 0;
  for (auto& [node, m] : node_max) balanced += m;
  arb.worst_robustness = static_cast<int>(worst);
  arb.balanced_robustness = static_cast<int>(balanced);

  // Monotonicity along paths means the worst arc sits at the root.
  long long root_max = 0;
  for (int a : arb.arcs)
    if (inst.arcs[a].tail == inst.root) root_max = std::max(root_max, arb.x[a]);
  if (root_max != worst) throw std::logic_error("worst load not at a root arc");
  for (int a : arb.arcs) {
    for (int b : arb.arcs) {
      if (inst.arcs[b].tail != inst.arcs[a].head) continue;
      if (arb.x[a] < arb.x[b]) throw std::logic_error("load grew along a tree path");
    }
  }
  return arb;
}

std::vector<int> parent_arcs_from_selection(const Instance& inst,
                                            const std::vector<char>& selected) {
  Adjacency adj = adjacency(inst);
  std::unordered_map<NodeId, int> parent; // node -> arc into it
  std::unordered_set<NodeId> seen{inst.root};
  std::queue<NodeId> bfs;
  bfs.push(inst.root);
  while (!bfs.empty()) {
    NodeId v = bfs.front();
    bfs.pop();
    auto it = adj.out.find(v);
    if (it == adj.out.end()) continue;
    for (int a : it->second) {
      if (!selected[a]) continue;
      NodeId w = inst.arcs[a].head;
      if (seen.count(w)) {
        if (!parent.count(w) || parent.at(w) != a)
          throw std::logic_error("selection has in-degree above one");
        continue;
      }
      seen.insert(w);
      parent[w] = a;
      bfs.push(w);
    }
  }
  for (NodeId t : inst.terminals)
    if (!seen.count(t)) throw std::logic_error("terminal unreachable in selection");
  std::vector<int> out;
  out.reserve(parent.size());
  for (auto& [node, a] : parent) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

ArbVars build_flow_model(const Instance& inst, milp::Model& model) {
  if (inst.terminals.empty()) throw std::invalid_argument("instance has no terminals");
  const int n_arcs = static_cast<int>(inst.arcs.size());
  const double t = static_cast<double>(inst.num_terminals());
  ArbVars vars;
  vars.x.reserve(n_arcs);
  vars.y.reserve(n_arcs);
  for (int i = 0; i < n_arcs; ++i) {
    double cap = std::min(static_cast<double>(inst.arcs[i].capacity), t);
    vars.x.push_back(
        model.add_var("x" + std::to_string(i), milp::VarKind::Continuous, 0.0, cap));
  }
  for (int i = 0; i < n_arcs; ++i)
    vars.y.push_back(model.add_var("y" + std::to_string(i), milp::VarKind::Binary, 0.0, 1.0));

  Adjacency adj = adjacency(inst);
  for (NodeId v : inst.nodes) {
    milp::Row row;
    row.name = "cons" + std::to_string(v);
    auto out = adj.out.find(v);
    if (out != adj.out.end())
      for (int a : out->second) row.coeffs.emplace_back(vars.x[a], 1.0);
    auto in = adj.in.find(v);
    if (in != adj.in.end())
      for (int a : in->second) row.coeffs.emplace_back(vars.x[a], -1.0);
    row.sense = milp::RowSense::EQ;
    if (v == inst.root)
      row.rhs = t;
    else if (inst.is_terminal(v))
      row.rhs = -1.0;
    else
      row.rhs = 0.0;
    if (row.coeffs.empty() && row.rhs != 0.0)
      throw std::invalid_argument("isolated node with nonzero demand");
    if (!row.coeffs.empty()) model.add_row(std::move(row));
  }
  for (NodeId v : inst.nodes) {
    if (v == inst.root) continue;
    auto in = adj.in.find(v);
    if (in == adj.in.end()) continue;
    milp::Row row;
    row.name = "indeg" + std::to_string(v);
    for (int a : in->second) row.coeffs.emplace_back(vars.y[a], 1.0);
    row.sense = milp::RowSense::LE;
    row.rhs = 1.0;
    model.add_row(std::move(row));
  }
  for (int i = 0; i < n_arcs; ++i) {
    milp::Row row;
    row.name = "cap" + std::to_string(i);
    row.coeffs.emplace_back(vars.x[i], 1.0);
    row.coeffs.emplace_back(vars.y[i], -static_cast<double>(inst.arcs[i].capacity));
    row.sense = milp::RowSense::LE;
    row.rhs = 0.0;
    model.add_row(std::move(row));
  }
  return vars;
}

ArbSolveResult solve_model(const Instance& inst, const ArbModelSpec& spec,
                           const milp::SolveConfig& cfg) {
  if (spec.objective == ArbObjective::Cost && spec.bound_cost)
    throw std::invalid_argument("cost bound restates the cost objective");
  if (spec.objective == ArbObjective::WorstRobustness && spec.bound_worst)
    throw std::invalid_argument("worst-case bound restates the worst-case objective");
  if (spec.objective == ArbObjective::BalancedRobustness && spec.bound_balanced)
    throw std::invalid_argument("balanced bound restates the balanced objective");

  {
    // a terminal the full arc set cannot reach makes every model infeasible
    std::unordered_set<NodeId> seen{inst.root};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Arc& arc : inst.arcs)
        if (seen.count(arc.tail) && seen.insert(arc.head).second) grew = true;
    }
    for (NodeId v : inst.terminals)
      if (!seen.count(v)) return {};
  }

  milp::Model model;
  ArbVars vars = build_flow_model(inst, model);
  const int n_arcs = static_cast<int>(inst.arcs.size());
  const double t = static_cast<double>(inst.num_terminals());

  auto add_balanced_terms = [&](double obj_coeff) {
    // one ceiling variable per node that can route anything out
    std::unordered_map<NodeId, int> z;
    for (int i = 0; i < n_arcs; ++i) {
      NodeId tail = inst.arcs[i].tail;
      auto [it, fresh] = z.try_emplace(tail, -1);
      if (fresh)
        it->second = model.add_var("zb" + std::to_string(tail), milp::VarKind::Continuous,
                                   0.0, t, obj_coeff);
      milp::Row row;
      row.name = "zb_cap" + std::to_string(i);
      row.coeffs.emplace_back(vars.x[i], 1.0);
      row.coeffs.emplace_back(it->second, -1.0);
      row.sense = milp::RowSense::LE;
      row.rhs = 0.0;
      model.add_row(std::move(row));
    }
    return z;
  };

  switch (spec.objective) {
  case ArbObjective::Cost:
    for (int i = 0; i < n_arcs; ++i) model.set_obj(vars.y[i], inst.arcs[i].cost);
    break;
  case ArbObjective::WorstRobustness: {
    int z = model.add_var("z", milp::VarKind::Continuous, 0.0, t, 1.0);
    for (int i = 0; i < n_arcs; ++i) {
      if (inst.arcs[i].tail != inst.root) continue;
      milp::Row row;
      row.name = "zworst" + std::to_string(i);
      row.coeffs.emplace_back(vars.x[i], 1.0);
      row.coeffs.emplace_back(z, -1.0);
      row.sense = milp::RowSense::LE;
      model.add_row(std::move(row));
    }
    break;
  }
  case ArbObjective::BalancedRobustness: add_balanced_terms(1.0); break;
  }

  if (spec.bound_worst) {
    for (int i = 0; i < n_arcs; ++i) {
      if (inst.arcs[i].tail != inst.root) continue;
      milp::Row row;
      row.name = "bworst" + std::to_string(i);
      row.coeffs.emplace_back(vars.x[i], 1.0);
      row.sense = milp::RowSense::LE;
      row.rhs = static_cast<double>(*spec.bound_worst);
      model.add_row(std::move(row));
    }
  }
  if (spec.bound_cost) {
    milp::Row row;
    row.name = "bcost";
    for (int i = 0; i < n_arcs; ++i)
      if (inst.arcs[i].cost != 0.0) row.coeffs.emplace_back(vars.y[i], inst.arcs[i].cost);
    row.sense = milp::RowSense::LE;
    row.rhs = *spec.bound_cost;
    model.add_row(std::move(row));
  }
  if (spec.bound_balanced) {
    auto z = add_balanced_terms(0.0);
    milp::Row row;
    row.name = "bbal";
    for (auto& [node, var] : z) row.coeffs.emplace_back(var, 1.0);
    std::sort(row.coeffs.begin(), row.coeffs.end());
    row.sense = milp::RowSense::LE;
    row.rhs = static_cast<double>(*spec.bound_balanced);
    model.add_row(std::move(row));
  }

  milp::Solution sol = milp::solve(model, cfg);
  ArbSolveResult result;
  result.status = sol.status;
  result.node_count = sol.node_count;
  result.lp_count = sol.lp_count;
  if (sol.values.empty()) return result;

  std::vector<char> selected(n_arcs, 0);
  for (int i = 0; i < n_arcs; ++i) selected[i] = sol.values[vars.y[i]] > 0.5;
  result.arb = rebuild(inst, parent_arcs_from_selection(inst, selected));

  if (sol.status == milp::SolveStatus::Optimal) {
    double model_value = 0.0;
    switch (spec.objective) {
    case ArbObjective::Cost: model_value = result.arb.cost; break;
    case ArbObjective::WorstRobustness: model_value = result.arb.worst_robustness; break;
    case ArbObjective::BalancedRobustness: model_value = result.arb.balanced_robustness; break;
    }
    if (std::fabs(model_value - sol.objective) > 1e-6 * (1.0 + std::fabs(sol.objective)))
      throw std::logic_error("extracted tree does not match the model objective");
  }
  return result;
}

int evaluate_worst_case(const Instance& inst, const Arborescence& arb) {
  std::unordered_map<NodeId, std::vector<int>> children;
  for (int a : arb.arcs) children[inst.arcs[a].tail].push_back(a);
  int worst = 0;
  for (int removed : arb.arcs) {
    std::unordered_set<NodeId> seen{inst.root};
    std::vector<NodeId> stack{inst.root};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      auto it = children.find(v);
      if (it == children.end()) continue;
      for (int a : it->second) {
        if (a == removed) continue;
        NodeId w = inst.arcs[a].head;
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    int lost = 0;
    for (NodeId t : inst.terminals)
      if (!seen.count(t)) ++lost;
    worst = std::max(worst, lost);
  }
  return worst;
}

Arborescence normalize_root_attach(const Instance& inst, const Arborescence& arb) {
  const long long t = inst.num_terminals();
  for (const Arc& a : inst.arcs)
    if (a.capacity < t)
      throw std::invalid_argument("normalization needs every capacity >= terminal count");

  // lowest-id direct arc from the root to each of its out-neighbors
  std::unordered_map<NodeId, int> root_arc;
  for (int i = 0; i < static_cast<int>(inst.arcs.size()); ++i)
    if (inst.arcs[i].tail == inst.root) root_arc.try_emplace(inst.arcs[i].head, i);

  std::vector<int> parents;
  for (int a : arb.arcs) {
    NodeId head = inst.arcs[a].head;
    auto direct = root_arc.find(head);
    parents.push_back(direct == root_arc.end() ? a : direct->second);
  }
  std::sort(parents.begin(), parents.end());
  parents.erase(std::unique(parents.begin(), parents.end()), parents.end());

  Arborescence out = rebuild(inst, parents);
  if (evaluate_worst_case(inst, out) > evaluate_worst_case(inst, arb))
    throw std::logic_error("root reattachment worsened the worst case");
  return out;
}

RobustnessReport robustness_report(const Instance& inst, std::span<const double> cost_gaps,
                                   const milp::SolveConfig& cfg) {
  auto must = [&](const ArbModelSpec& spec) {
    ArbSolveResult r = solve_model(inst, spec, cfg);
    if (r.status != milp::SolveStatus::Optimal)
      throw std::runtime_error("robustness report: model not solved to optimality");
    return r.arb;
  };

  RobustnessReport rep;
  Arborescence base = must({ArbObjective::Cost, {}, {}, {}});
  rep.min_cost = base.cost;
  Arborescence robust = must({ArbObjective::WorstRobustness, {}, {}, {}});
  rep.min_worst = robust.worst_robustness;
  Arborescence cheap_robust = must({ArbObjective::Cost, rep.min_worst, {}, {}});
  rep.cost_at_min_worst = cheap_robust.cost;
  rep.delta_cost_worst =
      rep.min_cost > 0 ? (rep.cost_at_min_worst - rep.min_cost) / rep.min_cost : 0.0;

  Arborescence balanced = must({ArbObjective::BalancedRobustness, {}, {}, {}});
  rep.min_balanced = balanced.balanced_robustness;
  rep.worst_of_min_balanced = evaluate_worst_case(inst, balanced);
  Arborescence cheap_balanced = must({ArbObjective::Cost, {}, {}, rep.min_balanced});
  rep.cost_at_min_balanced = cheap_balanced.cost;
  rep.delta_cost_balanced =
      rep.min_cost > 0 ? (rep.cost_at_min_balanced - rep.min_cost) / rep.min_cost : 0.0;

  for (double gap : cost_gaps) {
    double budget = (1.0 + gap) * rep.min_cost + 1e-6 * (1.0 + std::fabs(rep.min_cost));
    Arborescence capped = must({ArbObjective::WorstRobustness, {}, budget, {}});
    rep.worst_at_cost_gap.emplace_back(gap, capped.worst_robustness);
  }
  return rep;
}

} // namespace rcsn
