#include "rcsn/survivable.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rcsn {

namespace {

struct SeparationTimeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double budget = 1e18;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  double remaining() const { return budget - elapsed(); }
};

const char* status_name(milp::SolveStatus s) {
  switch (s) {
  case milp::SolveStatus::Optimal: return "optimal";
  case milp::SolveStatus::Infeasible: return "infeasible";
  case milp::SolveStatus::Unbounded: return "unbounded";
  case milp::SolveStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

void validate_problem(const SurvivableProblem& prob) {
  if (!prob.aug) throw std::invalid_argument("problem has no graph");
  if (prob.k < 0 || prob.k_prot < 0) throw std::invalid_argument("negative budget");
  if (prob.k >= 1 && prob.k > prob.aug->initial_arc_count - 1)
    throw std::invalid_argument("failure budget exceeds deletable arc count");
  if (prob.aug->num_terminals() == 0) throw std::invalid_argument("no terminals");
}

long long uniform_capacity(const AugmentedInstance& aug) {
  long long u = aug.arcs[0].capacity;
  for (int a = 0; a < aug.initial_arc_count; ++a)
    if (aug.arcs[a].capacity != u)
      throw std::invalid_argument("uniform mode needs equal capacities on real arcs");
  return u;
}

struct MasterContext {
  milp::Model model;
  MasterVars vars;
  long long uniform_u = 0; // nonzero only in uniform mode
};

std::vector<char> decode(const std::vector<double>& values, const std::vector<int>& ids,
                         int size) {
  std::vector<char> mask(size, 0);
  for (int a = 0; a < static_cast<int>(ids.size()); ++a)
    if (values[ids[a]] > 0.5) mask[a] = 1;
  return mask;
}

NetworkDesign make_design(const AugmentedInstance& aug, const std::vector<char>& selected,
                          const std::vector<char>& protected_arcs, int k) {
  NetworkDesign d;
  for (int a = 0; a < aug.arc_count(); ++a) {
    if (!selected[a]) continue;
    d.selected.push_back(a);
    d.cost += aug.arcs[a].cost;
    if (a < static_cast<int>(protected_arcs.size()) && protected_arcs[a])
      d.protected_arcs.push_back(a);
  }
  d.certified = check_feasibility(aug, selected, protected_arcs, k).feasible;
  return d;
}

// Protection rows shared by all three masters: protect only what is selected,
// at most k_prot arcs in total. Protection is restricted to real arcs; the
// fictive ones cannot fail in the first place.
void add_protection(const SurvivableProblem& prob, MasterContext& ctx) {
  const AugmentedInstance& aug = *prob.aug;
  if (prob.k_prot == 0) return;
  ctx.vars.p.reserve(aug.initial_arc_count);
  for (int a = 0; a < aug.initial_arc_count; ++a) {
    ctx.vars.p.push_back(
        ctx.model.add_var("p" + std::to_string(a), milp::VarKind::Binary, 0.0, 1.0));
    // fractional hardening slips past every cut row at a trickle per arc, so
    // the relaxation stays weak until the p are decided: branch them first
    ctx.model.set_branch_priority(ctx.vars.p[a], 1);
  }
  for (int a = 0; a < aug.initial_arc_count; ++a) {
    milp::Row row;
    row.name = "prot_sel" + std::to_string(a);
    row.coeffs.emplace_back(ctx.vars.p[a], 1.0);
    row.coeffs.emplace_back(ctx.vars.y[a], -1.0);
    row.sense = milp::RowSense::LE;
    row.rhs = 0.0;
    ctx.model.add_row(std::move(row));
  }
  milp::Row budget;
  budget.name = "prot_budget";
  for (int a = 0; a < aug.initial_arc_count; ++a)
    budget.coeffs.emplace_back(ctx.vars.p[a], 1.0);
  budget.sense = milp::RowSense::LE;
  budget.rhs = static_cast<double>(prob.k_prot);
  ctx.model.add_row(std::move(budget));
}

MasterContext build_master(const SurvivableProblem& prob, const SurvivableOptions& opts,
                           bool with_initial_cut_rows) {
  const AugmentedInstance& aug = *prob.aug;
  MasterContext ctx;
  if (opts.uniform_capacity_mode) {
    if (prob.k_prot != 0)
      throw std::invalid_argument("uniform mode does not support protection");
    ctx.uniform_u = uniform_capacity(aug);
  }
  ctx.vars.y.reserve(aug.arc_count());
  for (int a = 0; a < aug.arc_count(); ++a) {
    double lb = 0.0;
    if (ctx.uniform_u > 0 && aug.is_fictive(a)) lb = 1.0; // sink arcs always on
    ctx.vars.y.push_back(ctx.model.add_var("y" + std::to_string(a), milp::VarKind::Binary,
                                           lb, 1.0, aug.arcs[a].cost));
  }
  add_protection(prob, ctx);

  if (with_initial_cut_rows) {
    const double t = static_cast<double>(aug.num_terminals());
    const double rhs = t + static_cast<double>(prob.k) * static_cast<double>(ctx.uniform_u);
    {
      milp::Row row;
      row.name = "cut_root";
      for (int a : aug.out_arcs[aug.root_index])
        row.coeffs.emplace_back(ctx.vars.y[a], static_cast<double>(aug.arcs[a].capacity));
      row.sense = milp::RowSense::GE;
      row.rhs = rhs;
      ctx.model.add_row(std::move(row));
    }
    for (NodeId term : aug.base.terminals) {
      // cut isolating {terminal, sink}: its real in-arcs plus the other sink arcs
      milp::Row row;
      row.name = "cut_term" + std::to_string(term);
      for (int a : aug.in_arcs[aug.index_of(term)])
        row.coeffs.emplace_back(ctx.vars.y[a], static_cast<double>(aug.arcs[a].capacity));
      for (NodeId other : aug.base.terminals) {
        if (other == term) continue;
        int f = aug.fictive_arc_of(other);
        row.coeffs.emplace_back(ctx.vars.y[f], static_cast<double>(aug.arcs[f].capacity));
      }
      row.sense = milp::RowSense::GE;
      row.rhs = rhs;
      ctx.model.add_row(std::move(row));
    }
  }
  if (opts.use_valid_inequalities)
    for (milp::Row& row : valid_inequalities(prob, ctx.vars)) ctx.model.add_row(std::move(row));
  return ctx;
}

// Worst attack on the incumbent, dispatched per configured mode.
VitalArcsResult run_separation(const AugmentedInstance& aug, const std::vector<char>& sel,
                               const std::vector<char>& prot, int k, SeparationMode mode,
                               const milp::SolveConfig& cfg) {
  switch (mode) {
  case SeparationMode::Auto: return most_vital_arcs(aug, sel, prot, k);
  case SeparationMode::Enumerate:
    return most_vital_arcs(aug, sel, prot, k, std::numeric_limits<long long>::max());
  case SeparationMode::Mip: {
    SeparationCut sep = separation_mip_cut(aug, sel, prot, k, cfg);
    VitalArcsResult out;
    out.scenario.failed = sep.cut.deleted;
    out.residual = sep.residual;
    out.used_mip = true;
    return out;
  }
  }
  throw std::logic_error("unknown separation mode");
}

milp::SolveConfig sub_config(const SurvivableOptions& opts, const Timer& timer) {
  milp::SolveConfig cfg = opts.milp;
  cfg.lazy_rows = nullptr;
  cfg.time_budget_sec = std::max(1.0, timer.remaining());
  return cfg;
}

void trace_event(std::ostream* os, const std::string& line) {
  if (os) *os << line << '\n';
}

std::string json_head(const char* event, const char* formulation) {
  std::string s = "{\"event\":\"";
  s += event;
  s += "\",\"formulation\":\"";
  s += formulation;
  s += "\"";
  return s;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Cut row for certificate S and failure set C (C already restricted to real
// arcs). Plain form drops the failed capacity outright; the protected form
// refunds it arc by arc when the failed arc is protected; the uniform form
// keeps the whole cut and raises the demand instead.
milp::Row cut_row(const AugmentedInstance& aug, const MasterVars& vars,
                  const CutCertificate& cert, const std::vector<ArcId>& attack,
                  long long uniform_u, int k, bool with_protection, long long iteration) {
  std::vector<char> in_attack(aug.arc_count(), 0);
  for (ArcId a : attack) in_attack[a] = 1;
  milp::Row row;
  row.name = "cut" + std::to_string(iteration);
  row.sense = milp::RowSense::GE;
  const double t = static_cast<double>(aug.num_terminals());
  if (uniform_u > 0) {
    for (ArcId a : cert.cutset)
      row.coeffs.emplace_back(vars.y[a], static_cast<double>(aug.arcs[a].capacity));
    row.rhs = t + static_cast<double>(k) * static_cast<double>(uniform_u);
    return row;
  }
  for (ArcId a : cert.cutset) {
    double u = static_cast<double>(aug.arcs[a].capacity);
    if (!in_attack[a]) {
      row.coeffs.emplace_back(vars.y[a], u);
    } else if (with_protection) {
      row.coeffs.emplace_back(vars.p[a], u); // failed arc counts only if hardened
    }
  }
  row.rhs = t;
  return row;
}

} // namespace

std::vector<milp::Row> valid_inequalities(const SurvivableProblem& prob,
                                          const MasterVars& vars) {
  const AugmentedInstance& aug = *prob.aug;
  const Instance& base = aug.base;
  const int k = prob.k;
  const int n_term = aug.num_terminals();
  std::vector<milp::Row> rows;

  // adjacency over real arcs only
  std::map<NodeId, std::vector<int>> in_init, out_init;
  for (int a = 0; a < aug.initial_arc_count; ++a) {
    out_init[aug.arcs[a].tail].push_back(a);
    in_init[aug.arcs[a].head].push_back(a);
  }
  auto in_of = [&](NodeId v) -> const std::vector<int>& {
    static const std::vector<int> none;
    auto it = in_init.find(v);
    return it == in_init.end() ? none : it->second;
  };
  auto out_of = [&](NodeId v) -> const std::vector<int>& {
    static const std::vector<int> none;
    auto it = out_init.find(v);
    return it == out_init.end() ? none : it->second;
  };

  if (prob.k_prot == 0) {
    for (NodeId t : base.terminals) {
      milp::Row row;
      row.name = "deg_in" + std::to_string(t);
      for (int a : in_of(t)) row.coeffs.emplace_back(vars.y[a], 1.0);
      row.sense = milp::RowSense::GE;
      row.rhs = static_cast<double>(k + 1);
      rows.push_back(std::move(row));
    }
    milp::Row root;
    root.name = "deg_root";
    for (int a : out_of(base.root)) root.coeffs.emplace_back(vars.y[a], 1.0);
    root.sense = milp::RowSense::GE;
    root.rhs = static_cast<double>(k + 1);
    rows.push_back(std::move(root));
  } else {
    for (NodeId t : base.terminals) {
      milp::Row row;
      row.name = "reach_in" + std::to_string(t);
      for (int a : in_of(t)) row.coeffs.emplace_back(vars.y[a], 1.0);
      row.sense = milp::RowSense::GE;
      row.rhs = 1.0;
      rows.push_back(std::move(row));
    }
    milp::Row root;
    root.name = "reach_root";
    for (int a : out_of(base.root)) root.coeffs.emplace_back(vars.y[a], 1.0);
    root.sense = milp::RowSense::GE;
    root.rhs = 1.0;
    rows.push_back(std::move(root));

    // Every terminal in-star and the root out-star needs k+1 arcs unless a
    // protected arc sits on it. One protected arc can relieve two of those
    // hubs at once when it runs from the root straight to a terminal, so cap
    // the relieved count accordingly rather than by k_prot alone.
    bool root_to_terminal = false;
    for (int a : out_of(base.root))
      if (base.is_terminal(aug.arcs[a].head)) root_to_terminal = true;
    long long relieved = std::min<long long>(
        root_to_terminal ? 2LL * prob.k_prot : prob.k_prot, n_term + 1);
    milp::Row hub;
    hub.name = "hub_degrees";
    std::map<int, double> coeff;
    for (NodeId t : base.terminals)
      for (int a : in_of(t)) coeff[vars.y[a]] += 1.0;
    for (int a : out_of(base.root)) coeff[vars.y[a]] += 1.0;
    for (auto& [var, c] : coeff) hub.coeffs.emplace_back(var, c);
    hub.sense = milp::RowSense::GE;
    hub.rhs = static_cast<double>((n_term + 1 - relieved) * (k + 1) + relieved);
    rows.push_back(std::move(hub));
  }

  // Flow through a Steiner vertex needs a continuation on both sides.
  for (NodeId j : base.nodes) {
    if (j == base.root || base.is_terminal(j)) continue;
    const auto& ins = in_of(j);
    const auto& outs = out_of(j);
    for (int a : ins) {
      milp::Row row;
      row.name = "through_out" + std::to_string(a);
      row.coeffs.emplace_back(vars.y[a], 1.0);
      for (int b : outs) row.coeffs.emplace_back(vars.y[b], -1.0);
      row.sense = milp::RowSense::LE;
      row.rhs = 0.0;
      rows.push_back(std::move(row));
    }
    for (int b : outs) {
      milp::Row row;
      row.name = "through_in" + std::to_string(b);
      row.coeffs.emplace_back(vars.y[b], 1.0);
      for (int a : ins) row.coeffs.emplace_back(vars.y[a], -1.0);
      row.sense = milp::RowSense::LE;
      row.rhs = 0.0;
      rows.push_back(std::move(row));
    }
  }

  // A terminal needs k+1 distinct feeding neighbors; the non-terminal ones
  // each carry at least two incident arcs in a minimal solution (the root
  // qualifies through its k+1 outgoing arcs, which needs k >= 1). Skip
  // terminals with parallel in-arcs, which break the distinctness count.
  if (k >= 1 && prob.k_prot == 0) {
    for (NodeId t : base.terminals) {
      std::vector<NodeId> in_neighbors;
      for (int a : in_of(t)) in_neighbors.push_back(aug.arcs[a].tail);
      std::sort(in_neighbors.begin(), in_neighbors.end());
      if (std::adjacent_find(in_neighbors.begin(), in_neighbors.end()) !=
          in_neighbors.end())
        continue;
      std::vector<NodeId> neighbors = in_neighbors;
      for (int a : out_of(t)) neighbors.push_back(aug.arcs[a].head);
      std::sort(neighbors.begin(), neighbors.end());
      neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
      int terminal_neighbors = 0;
      for (NodeId v : neighbors)
        if (base.is_terminal(v)) ++terminal_neighbors;
      double rhs = 2.0 * (k + 1 - terminal_neighbors);
      if (rhs <= 0.0) continue;
      std::map<int, double> coeff;
      for (NodeId v : neighbors) {
        if (base.is_terminal(v)) continue;
        for (int a : in_of(v)) coeff[vars.y[a]] += 1.0;
        for (int a : out_of(v)) coeff[vars.y[a]] += 1.0;
      }
      if (coeff.empty()) continue;
      milp::Row row;
      row.name = "feeders" + std::to_string(t);
      for (auto& [var, c] : coeff) row.coeffs.emplace_back(var, c);
      row.sense = milp::RowSense::GE;
      row.rhs = rhs;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SeparationCut separation_mip_cut(const AugmentedInstance& aug,
                                 const std::vector<char>& selected,
                                 const std::vector<char>& protected_arcs, int k,
                                 const milp::SolveConfig& cfg) {
  if (static_cast<int>(selected.size()) != aug.arc_count())
    throw std::invalid_argument("selection mask size mismatch");
  milp::Model model;
  std::vector<int> s_var(aug.arc_count()), d_var(aug.arc_count(), -1);
  for (int a = 0; a < aug.arc_count(); ++a) {
    double weight = selected[a] ? static_cast<double>(aug.arcs[a].capacity) : 0.0;
    s_var[a] = model.add_var("s" + std::to_string(a), milp::VarKind::Binary, 0.0, 1.0,
                             weight);
  }
  for (int a = 0; a < aug.initial_arc_count; ++a) {
    bool deletable = selected[a] &&
                     !(a < static_cast<int>(protected_arcs.size()) && protected_arcs[a]);
    if (deletable)
      d_var[a] = model.add_var("d" + std::to_string(a), milp::VarKind::Binary, 0.0, 1.0);
  }
  std::vector<int> v_var(aug.node_count());
  for (int i = 0; i < aug.node_count(); ++i) {
    double lb = 0.0, ub = 1.0;
    if (i == aug.root_index) lb = 1.0;
    if (i == aug.sink_index) ub = 0.0;
    v_var[i] = model.add_var("v" + std::to_string(i), milp::VarKind::Binary, lb, ub);
  }
  for (int a = 0; a < aug.arc_count(); ++a) {
    milp::Row row;
    row.name = "cross" + std::to_string(a);
    row.coeffs.emplace_back(s_var[a], 1.0);
    if (d_var[a] >= 0) row.coeffs.emplace_back(d_var[a], 1.0);
    row.coeffs.emplace_back(v_var[aug.tail_index[a]], -1.0);
    row.coeffs.emplace_back(v_var[aug.head_index[a]], 1.0);
    row.sense = milp::RowSense::GE;
    row.rhs = 0.0;
    model.add_row(std::move(row));
  }
  {
    milp::Row row;
    row.name = "attack_budget";
    for (int a = 0; a < aug.arc_count(); ++a)
      if (d_var[a] >= 0) row.coeffs.emplace_back(d_var[a], 1.0);
    row.sense = milp::RowSense::LE;
    row.rhs = static_cast<double>(k);
    if (!row.coeffs.empty()) model.add_row(std::move(row));
  }
  milp::Solution sol = milp::solve(model, cfg);
  if (sol.status != milp::SolveStatus::Optimal)
    throw SeparationTimeout("cut separation did not finish");

  SeparationCut out;
  std::vector<char> near(aug.node_count(), 0);
  for (int i = 0; i < aug.node_count(); ++i) near[i] = sol.values[v_var[i]] > 0.5;
  for (int i = 0; i < aug.node_count(); ++i)
    if (near[i]) out.cut.side_root.push_back(aug.node_ids[i]);
  for (int a = 0; a < aug.arc_count(); ++a) {
    if (!(near[aug.tail_index[a]] && !near[aug.head_index[a]])) continue;
    out.cut.cutset.push_back(a);
    bool deleted = d_var[a] >= 0 && sol.values[d_var[a]] > 0.5;
    if (deleted) {
      out.cut.deleted.push_back(a);
    } else if (selected[a]) {
      out.cut.residual_capacity += aug.arcs[a].capacity;
    }
  }
  out.residual = out.cut.residual_capacity;
  return out;
}

AttackCut solve_attack_subproblem(const AugmentedInstance& aug,
                                  const std::vector<char>& selected,
                                  const std::vector<char>& protected_arcs, int k,
                                  const milp::SolveConfig& cfg) {
  if (static_cast<int>(selected.size()) != aug.arc_count())
    throw std::invalid_argument("selection mask size mismatch");
  auto prot = [&](int a) {
    return a < static_cast<int>(protected_arcs.size()) && protected_arcs[a];
  };

  auto build_and_solve = [&](bool integral_duals) {
    milp::Model model;
    std::vector<int> b_var(aug.arc_count(), -1), l_var(aug.arc_count(), -1);
    std::vector<int> lam(aug.arc_count()), gam(aug.arc_count());
    std::vector<int> mu(aug.node_count());
    milp::VarKind dual_kind =
        integral_duals ? milp::VarKind::Binary : milp::VarKind::Continuous;
    for (int a = 0; a < aug.arc_count(); ++a) {
      double y = selected[a] ? 1.0 : 0.0;
      lam[a] = model.add_var("lam" + std::to_string(a), dual_kind, 0.0, 1.0,
                             y * aug.arcs[a].capacity);
      double gamma_cost = aug.arcs[a].capacity * (prot(a) ? 2.0 : 1.0);
      gam[a] = model.add_var("gam" + std::to_string(a), dual_kind, 0.0, 1.0, gamma_cost);
    }
    for (int i = 0; i < aug.node_count(); ++i) {
      double lb = i == aug.root_index ? 1.0 : 0.0;
      double ub = i == aug.sink_index ? 0.0 : 1.0;
      mu[i] = model.add_var("mu" + std::to_string(i), dual_kind, lb, ub);
    }
    for (int a = 0; a < aug.initial_arc_count; ++a) {
      if (!selected[a] || prot(a)) continue;
      b_var[a] = model.add_var("b" + std::to_string(a), milp::VarKind::Binary, 0.0, 1.0);
      l_var[a] = model.add_var("l" + std::to_string(a), dual_kind, 0.0, 1.0,
                               -static_cast<double>(aug.arcs[a].capacity));
    }
    for (int a = 0; a < aug.arc_count(); ++a) {
      milp::Row row;
      row.name = "cutdual" + std::to_string(a);
      row.coeffs.emplace_back(lam[a], 1.0);
      row.coeffs.emplace_back(gam[a], 1.0);
      row.coeffs.emplace_back(mu[aug.tail_index[a]], -1.0);
      row.coeffs.emplace_back(mu[aug.head_index[a]], 1.0);
      row.sense = milp::RowSense::GE;
      row.rhs = 0.0;
      model.add_row(std::move(row));
    }
    {
      milp::Row row;
      row.name = "attack_budget";
      for (int a = 0; a < aug.arc_count(); ++a)
        if (b_var[a] >= 0) row.coeffs.emplace_back(b_var[a], 1.0);
      row.sense = milp::RowSense::LE;
      row.rhs = static_cast<double>(k);
      if (!row.coeffs.empty()) model.add_row(std::move(row));
    }
    for (int a = 0; a < aug.arc_count(); ++a) {
      if (b_var[a] < 0) continue;
      milp::Row le_b{"lb" + std::to_string(a),
                     {{l_var[a], 1.0}, {b_var[a], -1.0}},
                     milp::RowSense::LE,
                     0.0};
      milp::Row le_g{"lg" + std::to_string(a),
                     {{l_var[a], 1.0}, {gam[a], -1.0}},
                     milp::RowSense::LE,
                     0.0};
      milp::Row ge{"lbg" + std::to_string(a),
                   {{l_var[a], 1.0}, {gam[a], -1.0}, {b_var[a], -1.0}},
                   milp::RowSense::GE,
                   -1.0};
      model.add_row(std::move(le_b));
      model.add_row(std::move(le_g));
      model.add_row(std::move(ge));
    }
    milp::Solution sol = milp::solve(model, cfg);
    if (sol.status != milp::SolveStatus::Optimal)
      throw SeparationTimeout("attack subproblem did not finish");
    bool integral = true;
    auto frac = [&](int var) {
      double v = sol.values[var];
      return std::fabs(v - std::round(v)) > 1e-6;
    };
    for (int a = 0; a < aug.arc_count() && integral; ++a)
      if (frac(lam[a]) || frac(gam[a]) || (l_var[a] >= 0 && frac(l_var[a])))
        integral = false;
    for (int i = 0; i < aug.node_count() && integral; ++i)
      if (frac(mu[i])) integral = false;

    AttackCut cut;
    cut.lambda.assign(aug.arc_count(), 0);
    cut.gamma.assign(aug.arc_count(), 0);
    cut.lifted.assign(aug.arc_count(), 0);
    for (int a = 0; a < aug.arc_count(); ++a) {
      cut.lambda[a] = sol.values[lam[a]] > 0.5;
      cut.gamma[a] = sol.values[gam[a]] > 0.5;
      if (l_var[a] >= 0) cut.lifted[a] = sol.values[l_var[a]] > 0.5;
      if (b_var[a] >= 0 && sol.values[b_var[a]] > 0.5) cut.scenario.failed.push_back(a);
    }
    cut.value = std::llround(sol.objective);
    return std::pair<AttackCut, bool>(std::move(cut), integral);
  };

  auto [cut, integral] = build_and_solve(false);
  if (!integral) {
    // The continuous relaxation of the dual block should only return vertices;
    // fall back to declaring it integral outright if numerics disagree.
    auto [cut2, integral2] = build_and_solve(true);
    if (!integral2) throw std::logic_error("attack subproblem returned fractional duals");
    return std::move(cut2);
  }
  return std::move(cut);
}

std::vector<char> enhance_selection(const AugmentedInstance& aug,
                                    const std::vector<char>& selected,
                                    const std::vector<char>& protected_arcs, int k,
                                    const milp::SolveConfig& cfg) {
  auto prot = [&](int a) {
    return a < static_cast<int>(protected_arcs.size()) && protected_arcs[a];
  };
  milp::Model model;
  std::vector<int> lam(aug.arc_count()), gam(aug.arc_count()), mu(aug.node_count());
  for (int a = 0; a < aug.arc_count(); ++a) {
    lam[a] = model.add_var("lam" + std::to_string(a), milp::VarKind::Continuous, 0.0, 1.0,
                           1.0);
    double ub = aug.is_fictive(a) ? 0.0 : 1.0; // sink arcs cannot fail
    gam[a] = model.add_var("gam" + std::to_string(a), milp::VarKind::Binary, 0.0, ub);
  }
  for (int i = 0; i < aug.node_count(); ++i) {
    double lb = i == aug.root_index ? 1.0 : 0.0;
    double ub = i == aug.sink_index ? 0.0 : 1.0;
    mu[i] = model.add_var("mu" + std::to_string(i), milp::VarKind::Binary, lb, ub);
  }
  for (int a = 0; a < aug.arc_count(); ++a) {
    milp::Row row;
    row.name = "cutdual" + std::to_string(a);
    row.coeffs.emplace_back(lam[a], 1.0);
    row.coeffs.emplace_back(gam[a], 1.0);
    row.coeffs.emplace_back(mu[aug.tail_index[a]], -1.0);
    row.coeffs.emplace_back(mu[aug.head_index[a]], 1.0);
    row.sense = milp::RowSense::GE;
    row.rhs = 0.0;
    model.add_row(std::move(row));
  }
  {
    // the exhibited cut must be breakable: surviving capacity below demand
    milp::Row row;
    row.name = "breakable";
    for (int a = 0; a < aug.arc_count(); ++a) {
      if (selected[a])
        row.coeffs.emplace_back(lam[a], static_cast<double>(aug.arcs[a].capacity));
      if (prot(a))
        row.coeffs.emplace_back(gam[a], static_cast<double>(aug.arcs[a].capacity));
    }
    row.sense = milp::RowSense::LE;
    row.rhs = static_cast<double>(aug.num_terminals() - 1);
    model.add_row(std::move(row));
  }
  {
    milp::Row row;
    row.name = "attack_budget";
    for (int a = 0; a < aug.arc_count(); ++a) row.coeffs.emplace_back(gam[a], 1.0);
    row.sense = milp::RowSense::LE;
    row.rhs = static_cast<double>(k);
    model.add_row(std::move(row));
  }
  milp::Solution sol = milp::solve(model, cfg);
  if (sol.status == milp::SolveStatus::Infeasible)
    throw std::logic_error("no breakable cut: incumbent was already feasible");
  if (sol.status != milp::SolveStatus::Optimal)
    throw SeparationTimeout("cut sparsification did not finish");

  std::vector<char> lifted = selected;
  for (int a = 0; a < aug.arc_count(); ++a) {
    double l = sol.values[lam[a]];
    if (std::fabs(l - std::round(l)) > 1e-6)
      throw std::logic_error("cut sparsification returned fractional membership");
    if (l < 0.5 && sol.values[gam[a]] < 0.5) lifted[a] = 1;
  }
  return lifted;
}

namespace {

SurvivableResult finalize(const SurvivableProblem& prob, const milp::Solution& sol,
                          const MasterContext& ctx, long long iterations,
                          const SurvivableOptions& opts, const char* formulation) {
  const AugmentedInstance& aug = *prob.aug;
  SurvivableResult res;
  res.status = sol.status;
  res.iterations = iterations;
  res.node_count = sol.node_count;
  res.lp_count = sol.lp_count;
  if (!sol.values.empty()) {
    std::vector<char> sel = decode(sol.values, ctx.vars.y, aug.arc_count());
    std::vector<char> pr = decode(sol.values, ctx.vars.p, aug.arc_count());
    res.design = make_design(aug, sel, pr, prob.k);
    if (res.status == milp::SolveStatus::Optimal && !res.design.certified)
      throw std::logic_error("accepted design fails the worst-case recheck");
  }
  trace_event(opts.trace, json_head("done", formulation) +
                              ",\"status\":\"" + status_name(res.status) +
                              "\",\"cost\":" + fmt_double(res.design.cost) +
                              ",\"iterations\":" + std::to_string(iterations) + "}");
  return res;
}

} // namespace

SurvivableResult solve_cutset(const SurvivableProblem& prob, const SurvivableOptions& opts) {
  validate_problem(prob);
  const AugmentedInstance& aug = *prob.aug;
  Timer timer{std::chrono::steady_clock::now(), opts.milp.time_budget_sec};
  MasterContext ctx = build_master(prob, opts, true);
  long long iterations = 0;
  trace_event(opts.trace, json_head("start", "cutset") + ",\"k\":" + std::to_string(prob.k) +
                              ",\"k_prot\":" + std::to_string(prob.k_prot) +
                              ",\"arcs\":" + std::to_string(aug.arc_count()) + "}");

  auto separate = [&](const std::vector<double>& values) -> std::vector<milp::Row> {
    std::vector<char> sel = decode(values, ctx.vars.y, aug.arc_count());
    std::vector<char> pr = decode(values, ctx.vars.p, aug.arc_count());
    double incumbent_cost = 0.0;
    for (int a = 0; a < aug.arc_count(); ++a)
      if (sel[a]) incumbent_cost += aug.arcs[a].cost;

    CutCertificate cert;
    long long residual = 0;
    if (opts.separation == SeparationMode::Mip) {
      SeparationCut sep = separation_mip_cut(aug, sel, pr, prob.k, sub_config(opts, timer));
      cert = sep.cut;
      residual = sep.residual;
    } else {
      VitalArcsResult vital = run_separation(aug, sel, pr, prob.k, opts.separation,
                                             sub_config(opts, timer));
      residual = vital.residual;
      if (residual < aug.num_terminals()) {
        cert = min_cut(aug, selection_capacities(aug, sel, vital.scenario.failed));
        cert.deleted = vital.scenario.failed;
      }
    }
    bool accepted = residual >= aug.num_terminals();
    trace_event(opts.trace, json_head("separation", "cutset") +
                                ",\"iteration\":" + std::to_string(iterations) +
                                ",\"incumbent_cost\":" + fmt_double(incumbent_cost) +
                                ",\"value\":" + std::to_string(residual) +
                                ",\"rows_added\":" + (accepted ? "0" : "1") + "}");
    if (accepted) return {};
    ++iterations;
    std::vector<ArcId> attack;
    for (ArcId a : cert.deleted)
      if (std::binary_search(cert.cutset.begin(), cert.cutset.end(), a)) attack.push_back(a);
    return {cut_row(aug, ctx.vars, cert, attack, ctx.uniform_u, prob.k,
                    prob.k_prot > 0, iterations)};
  };

  try {
    if (!opts.full_resolve) {
      milp::SolveConfig cfg = opts.milp;
      cfg.lazy_rows = separate;
      return finalize(prob, milp::solve(ctx.model, cfg), ctx, iterations, opts, "cutset");
    }
    long long nodes = 0, lps = 0;
    double floor_obj = -milp::kInf; // optima only climb as rows accumulate
    for (;;) {
      milp::SolveConfig cfg = sub_config(opts, timer);
      cfg.objective_floor = floor_obj;
      milp::Solution sol = milp::solve(ctx.model, cfg);
      nodes += sol.node_count;
      lps += sol.lp_count;
      sol.node_count = nodes;
      sol.lp_count = lps;
      if (sol.status != milp::SolveStatus::Optimal)
        return finalize(prob, sol, ctx, iterations, opts, "cutset");
      floor_obj = sol.objective;
      std::vector<milp::Row> rows = separate(sol.values);
      if (rows.empty()) return finalize(prob, sol, ctx, iterations, opts, "cutset");
      for (milp::Row& row : rows) ctx.model.add_row(std::move(row));
    }
  } catch (const SeparationTimeout&) {
    SurvivableResult res;
    res.status = milp::SolveStatus::BudgetExceeded;
    res.iterations = iterations;
    return res;
  }
}

SurvivableResult solve_flow(const SurvivableProblem& prob, const SurvivableOptions& opts) {
  validate_problem(prob);
  if (opts.uniform_capacity_mode)
    throw std::invalid_argument("uniform mode applies to the cut-based solver only");
  const AugmentedInstance& aug = *prob.aug;
  Timer timer{std::chrono::steady_clock::now(), opts.milp.time_budget_sec};
  trace_event(opts.trace, json_head("start", "flow") + ",\"k\":" + std::to_string(prob.k) +
                              ",\"k_prot\":" + std::to_string(prob.k_prot) +
                              ",\"arcs\":" + std::to_string(aug.arc_count()) + "}");

  std::vector<Scenario> scenarios{Scenario{}};
  long long nodes = 0, lps = 0, iterations = 0;
  double floor_obj = -milp::kInf; // optima only climb as scenarios accumulate

  try {
    for (;;) {
      // one routing copy per scenario, rebuilt from scratch each round
      MasterContext ctx = build_master(prob, opts, false);
      for (int f = 0; f < static_cast<int>(scenarios.size()); ++f) {
        std::vector<char> failed(aug.arc_count(), 0);
        for (ArcId a : scenarios[f].failed) failed[a] = 1;
        std::vector<int> x(aug.arc_count());
        for (int a = 0; a < aug.arc_count(); ++a)
          x[a] = ctx.model.add_var("x" + std::to_string(f) + "_" + std::to_string(a),
                                   milp::VarKind::Continuous, 0.0,
                                   static_cast<double>(aug.arcs[a].capacity));
        for (int i = 0; i < aug.node_count(); ++i) {
          if (i == aug.root_index || i == aug.sink_index) continue;
          milp::Row row;
          row.name = "bal" + std::to_string(f) + "_" + std::to_string(i);
          for (int a : aug.in_arcs[i]) row.coeffs.emplace_back(x[a], 1.0);
          for (int a : aug.out_arcs[i]) row.coeffs.emplace_back(x[a], -1.0);
          row.sense = milp::RowSense::EQ;
          row.rhs = 0.0;
          ctx.model.add_row(std::move(row));
        }
        {
          milp::Row row;
          row.name = "demand" + std::to_string(f);
          for (int a : aug.in_arcs[aug.sink_index]) row.coeffs.emplace_back(x[a], 1.0);
          row.sense = milp::RowSense::EQ;
          row.rhs = static_cast<double>(aug.num_terminals());
          ctx.model.add_row(std::move(row));
        }
        for (int a = 0; a < aug.arc_count(); ++a) {
          milp::Row row;
          row.name = "carry" + std::to_string(f) + "_" + std::to_string(a);
          row.coeffs.emplace_back(x[a], 1.0);
          row.coeffs.emplace_back(ctx.vars.y[a], -static_cast<double>(aug.arcs[a].capacity));
          row.sense = milp::RowSense::LE;
          row.rhs = 0.0;
          ctx.model.add_row(std::move(row));
          if (!failed[a]) continue;
          milp::Row gone;
          gone.name = "failed" + std::to_string(f) + "_" + std::to_string(a);
          gone.coeffs.emplace_back(x[a], 1.0);
          if (prob.k_prot > 0) // protected arcs still carry in their failure scenario
            gone.coeffs.emplace_back(ctx.vars.p[a], -static_cast<double>(aug.arcs[a].capacity));
          gone.sense = milp::RowSense::LE;
          gone.rhs = 0.0;
          ctx.model.add_row(std::move(gone));
        }
      }

      milp::SolveConfig cfg = sub_config(opts, timer);
      cfg.objective_floor = floor_obj;
      milp::Solution sol = milp::solve(ctx.model, cfg);
      nodes += sol.node_count;
      lps += sol.lp_count;
      sol.node_count = nodes;
      sol.lp_count = lps;
      if (sol.status != milp::SolveStatus::Optimal)
        return finalize(prob, sol, ctx, iterations, opts, "flow");
      floor_obj = sol.objective;

      std::vector<char> sel = decode(sol.values, ctx.vars.y, aug.arc_count());
      std::vector<char> pr = decode(sol.values, ctx.vars.p, aug.arc_count());
      VitalArcsResult vital =
          run_separation(aug, sel, pr, prob.k, opts.separation, sub_config(opts, timer));
      bool accepted = vital.residual >= aug.num_terminals();
      trace_event(opts.trace, json_head("separation", "flow") +
                                  ",\"iteration\":" + std::to_string(iterations) +
                                  ",\"incumbent_cost\":" + fmt_double(sol.objective) +
                                  ",\"value\":" + std::to_string(vital.residual) +
                                  ",\"rows_added\":" + (accepted ? "0" : "1") + "}");
      if (accepted) return finalize(prob, sol, ctx, iterations, opts, "flow");
      for (const Scenario& seen : scenarios)
        if (seen.failed == vital.scenario.failed)
          throw std::logic_error("separation repeated a failure scenario");
      scenarios.push_back(vital.scenario);
      ++iterations;

      // harvest complementary attacks on the same incumbent: masking the arcs
      // of each found scenario forces the next one onto fresh arcs, so every
      // rebuild learns several routing copies instead of one
      std::vector<char> masked = pr;
      const Scenario* last = &scenarios.back();
      for (int extra = 0; extra < 1; ++extra) {
        for (ArcId a : last->failed) masked[a] = 1;
        VitalArcsResult more =
            run_separation(aug, sel, masked, prob.k, opts.separation, sub_config(opts, timer));
        if (more.residual >= aug.num_terminals()) break;
        scenarios.push_back(more.scenario);
        last = &scenarios.back();
      }
    }
  } catch (const SeparationTimeout&) {
    SurvivableResult res;
    res.status = milp::SolveStatus::BudgetExceeded;
    res.iterations = iterations;
    res.node_count = nodes;
    res.lp_count = lps;
    return res;
  }
}

SurvivableResult solve_bilevel(const SurvivableProblem& prob, const SurvivableOptions& opts) {
  validate_problem(prob);
  if (opts.uniform_capacity_mode)
    throw std::invalid_argument("uniform mode applies to the cut-based solver only");
  const AugmentedInstance& aug = *prob.aug;
  Timer timer{std::chrono::steady_clock::now(), opts.milp.time_budget_sec};
  MasterContext ctx = build_master(prob, opts, false);
  long long iterations = 0;
  trace_event(opts.trace, json_head("start", "bilevel") + ",\"k\":" + std::to_string(prob.k) +
                              ",\"k_prot\":" + std::to_string(prob.k_prot) +
                              ",\"arcs\":" + std::to_string(aug.arc_count()) + "}");

  auto attack_row = [&](const AttackCut& atk) {
    milp::Row row;
    row.name = "attack" + std::to_string(iterations);
    double constant = 0.0; // capacity the attacker concedes regardless of y
    for (int a = 0; a < aug.arc_count(); ++a) {
      double u = static_cast<double>(aug.arcs[a].capacity);
      if (atk.lambda[a]) row.coeffs.emplace_back(ctx.vars.y[a], u);
      if (atk.gamma[a]) {
        constant += u;
        if (prob.k_prot > 0 && a < aug.initial_arc_count)
          row.coeffs.emplace_back(ctx.vars.p[a], u);
      }
      if (atk.lifted[a]) constant -= u;
    }
    row.sense = milp::RowSense::GE;
    row.rhs = static_cast<double>(aug.num_terminals()) - constant;
    return row;
  };

  auto separate = [&](const std::vector<double>& values) -> std::vector<milp::Row> {
    std::vector<char> sel = decode(values, ctx.vars.y, aug.arc_count());
    std::vector<char> pr = decode(values, ctx.vars.p, aug.arc_count());
    double incumbent_cost = 0.0;
    for (int a = 0; a < aug.arc_count(); ++a)
      if (sel[a]) incumbent_cost += aug.arcs[a].cost;

    AttackCut atk = solve_attack_subproblem(aug, sel, pr, prob.k, sub_config(opts, timer));
    bool accepted = atk.value >= aug.num_terminals();
    trace_event(opts.trace, json_head("separation", "bilevel") +
                                ",\"iteration\":" + std::to_string(iterations) +
                                ",\"incumbent_cost\":" + fmt_double(incumbent_cost) +
                                ",\"value\":" + std::to_string(atk.value) +
                                ",\"rows_added\":" + (accepted ? "0" : "1") + "}");
    if (accepted) return {};
    if (opts.use_enhancement) {
      std::vector<char> lifted =
          enhance_selection(aug, sel, pr, prob.k, sub_config(opts, timer));
      AttackCut stronger =
          solve_attack_subproblem(aug, lifted, pr, prob.k, sub_config(opts, timer));
      if (stronger.value >= aug.num_terminals())
        throw std::logic_error("lifted incumbent escaped the breakable cut");
      atk = std::move(stronger);
    }
    ++iterations;
    return {attack_row(atk)};
  };

  try {
    if (!opts.full_resolve) {
      milp::SolveConfig cfg = opts.milp;
      cfg.lazy_rows = separate;
      return finalize(prob, milp::solve(ctx.model, cfg), ctx, iterations, opts, "bilevel");
    }
    long long nodes = 0, lps = 0;
    double floor_obj = -milp::kInf; // optima only climb as rows accumulate
    for (;;) {
      milp::SolveConfig cfg = sub_config(opts, timer);
      cfg.objective_floor = floor_obj;
      milp::Solution sol = milp::solve(ctx.model, cfg);
      nodes += sol.node_count;
      lps += sol.lp_count;
      sol.node_count = nodes;
      sol.lp_count = lps;
      if (sol.status != milp::SolveStatus::Optimal)
        return finalize(prob, sol, ctx, iterations, opts, "bilevel");
      floor_obj = sol.objective;
      std::vector<milp::Row> rows = separate(sol.values);
      if (rows.empty()) return finalize(prob, sol, ctx, iterations, opts, "bilevel");
      for (milp::Row& row : rows) ctx.model.add_row(std::move(row));
    }
  } catch (const SeparationTimeout&) {
    SurvivableResult res;
    res.status = milp::SolveStatus::BudgetExceeded;
    res.iterations = iterations;
    return res;
  }
}

} // namespace rcsn
