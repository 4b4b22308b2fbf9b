#include "rcsn/milp.hpp"

#include "lp_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace rcsn::milp {

namespace {

SolveStatus map_status(detail::LpStatus s) {
  switch (s) {
  case detail::LpStatus::Optimal: return SolveStatus::Optimal;
  case detail::LpStatus::Infeasible: return SolveStatus::Infeasible;
  case detail::LpStatus::Unbounded: return SolveStatus::Unbounded;
  }
  throw std::logic_error("unknown lp status");
}

// One bound tightening relative to the parent node.  Chains back to the root
// so open nodes cost O(1) memory each.
struct BBNode {
  int parent = -1;
  int var = -1;
  double lb = 0.0;
  double ub = 0.0; // applied as lb = max(lb, node.lb), ub = min(ub, node.ub)
  double bound = 0.0;
  int depth = 0;
};

struct QueueEntry {
  double bound;
  int depth;
  long long id;
  int node;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    return a.id < b.id; // LIFO: the newest open node sits nearest the basis
                        // the solver still holds, so its warm repair is short
  }
};

bool is_int_kind(VarKind k) { return k != VarKind::Continuous; }

double fractionality(double v) {
  double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

} // namespace

Solution solve(const Model& model, const SolveConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto out_of_time = [&] {
    return std::chrono::duration<double>(clock::now() - t0).count() > cfg.time_budget_sec;
  };

  const int n = model.var_count();
  std::vector<Row> pool; // rows accepted from the lazy callback, global
  detail::LpData data = detail::build_lp_data(model, pool);
  detail::SimplexSolver solver;
  solver.set_data(&data);

  std::vector<BBNode> arena;
  arena.push_back(BBNode{});
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;
  open.push(QueueEntry{-kInf, 0, 0, 0});
  long long next_id = 1;

  Solution best;
  best.status = SolveStatus::Infeasible;
  best.objective = kInf;
  bool have_incumbent = false;

  std::vector<double> lb(n), ub(n);
  Solution result;
  result.node_count = 0;
  result.lp_count = 0;

  // dive: after branching, plunge into the child matching the LP rounding
  // instead of returning to the global queue, so incumbents appear early
  QueueEntry pending{-kInf, 0, -1, -1};

  while (pending.node >= 0 || !open.empty()) {
    if (result.node_count >= cfg.node_budget || out_of_time()) {
      best.status = SolveStatus::BudgetExceeded;
      best.proven = false;
      best.node_count = result.node_count;
      best.lp_count = result.lp_count;
      return best;
    }
    QueueEntry top = pending;
    pending.node = -1;
    if (top.node < 0) {
      top = open.top();
      open.pop();
    }
    if (have_incumbent && top.bound >= best.objective - 1e-9) continue;
    ++result.node_count;

    for (int j = 0; j < n; ++j) {
      lb[j] = model.vars[j].lb;
      ub[j] = model.vars[j].ub;
    }
    for (int at = top.node; at != 0; at = arena[at].parent) {
      const BBNode& o = arena[at];
      lb[o.var] = std::max(lb[o.var], o.lb);
      ub[o.var] = std::min(ub[o.var], o.ub);
    }

    detail::LpResult lp;
    bool pruned = false;
    for (;;) { // re-solve loop: lazy rows may cut off the current optimum
      // warm is a hint: the solver ignores it unless it still holds an
      // optimal basis of the same shape, and LIFO keeps that basis near
      lp = solver.solve(lb, ub, true);
      ++result.lp_count;
      if (lp.status == detail::LpStatus::Infeasible) {
        pruned = true;
        break;
      }
      if (lp.status == detail::LpStatus::Unbounded) {
        if (top.node == 0 && !have_incumbent && pool.empty()) {
          best.status = SolveStatus::Unbounded;
          best.node_count = result.node_count;
          best.lp_count = result.lp_count;
          return best;
        }
        throw std::logic_error("unbounded lp below a bounded root");
      }
      if (have_incumbent && lp.obj >= best.objective - 1e-9) {
        pruned = true;
        break;
      }
      // prefer costly fractional variables: deciding them moves the bound
      // most; priority classes override, highest class branches first
      int branch_var = -1;
      double branch_score = 0.0;
      int branch_prio = std::numeric_limits<int>::min();
      for (int j = 0; j < n; ++j) {
        if (!is_int_kind(model.vars[j].kind)) continue;
        double f = fractionality(lp.x[j]);
        if (f <= cfg.int_tol) continue;
        int pj = model.priority_of(j);
        double score = f * (1.0 + std::fabs(model.objective[j]));
        if (pj > branch_prio || (pj == branch_prio && score > branch_score)) {
          branch_prio = pj;
          branch_score = score;
          branch_var = j;
        }
      }
      if (branch_var >= 0) { // fractional: branch, no callback
        double v = lp.x[branch_var];
        double down = std::floor(v);
        double up = down + 1.0;
        int depth = top.depth + 1;
        int down_node = -1, up_node = -1;
        if (down >= lb[branch_var] - 0.5) {
          arena.push_back(BBNode{top.node, branch_var, lb[branch_var], down, lp.obj, depth});
          down_node = static_cast<int>(arena.size()) - 1;
        }
        if (up <= ub[branch_var] + 0.5) {
          arena.push_back(BBNode{top.node, branch_var, up, ub[branch_var], lp.obj, depth});
          up_node = static_cast<int>(arena.size()) - 1;
        }
        bool take_down = v - down < 0.5 ? down_node >= 0 : up_node < 0;
        int dive = take_down ? down_node : up_node;
        int defer = take_down ? up_node : down_node;
        if (dive >= 0) pending = QueueEntry{lp.obj, depth, next_id++, dive};
        if (defer >= 0) open.push(QueueEntry{lp.obj, depth, next_id++, defer});
        pruned = true; // node handled
        break;
      }

      // Integral candidate.  Give the callback exact integer values.
      std::vector<double> cand = lp.x;
      for (int j = 0; j < n; ++j)
        if (is_int_kind(model.vars[j].kind)) cand[j] = std::round(cand[j]);
      std::vector<Row> extra;
      if (cfg.lazy_rows) extra = cfg.lazy_rows(cand);
      if (extra.empty()) {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += model.objective[j] * cand[j];
        if (!have_incumbent || obj < best.objective) {
          have_incumbent = true;
          best.status = SolveStatus::Optimal;
          best.values = cand;
          best.objective = obj;
          if (obj <= cfg.objective_floor + 1e-9) {
            best.proven = true;
            best.node_count = result.node_count;
            best.lp_count = result.lp_count;
            return best;
          }
        }
        pruned = true;
        break;
      }
      for (const Row& r : extra) {
        double act = 0.0;
        for (auto [v, c] : r.coeffs) act += c * cand.at(v);
        double viol = 0.0;
        switch (r.sense) {
        case RowSense::LE: viol = act - r.rhs; break;
        case RowSense::GE: viol = r.rhs - act; break;
        case RowSense::EQ: viol = std::fabs(act - r.rhs); break;
        }
        if (viol <= cfg.feas_tol)
          throw std::logic_error("lazy row not violated by the candidate: " + r.name);
        pool.push_back(r);
      }
      data = detail::build_lp_data(model, pool);
      solver.set_data(&data);
      if (out_of_time()) {
        best.status = SolveStatus::BudgetExceeded;
        best.proven = false;
        best.node_count = result.node_count;
        best.lp_count = result.lp_count;
        return best;
      }
    }
    (void)pruned;
  }

  best.node_count = result.node_count;
  best.lp_count = result.lp_count;
  best.proven = have_incumbent;
  if (!have_incumbent) best.status = SolveStatus::Infeasible;
  return best;
}

Solution solve_lp(const Model& model, const SolveConfig& cfg) {
  (void)cfg;
  detail::LpData data = detail::build_lp_data(model, {});
  detail::SimplexSolver solver;
  solver.set_data(&data);
  const int n = model.var_count();
  std::vector<double> lb(n), ub(n);
  for (int j = 0; j < n; ++j) {
    lb[j] = model.vars[j].lb;
    ub[j] = model.vars[j].ub;
  }
  detail::LpResult r = solver.solve(lb, ub);
  Solution s;
  s.status = map_status(r.status);
  s.lp_count = 1;
  s.proven = r.status == detail::LpStatus::Optimal;
  if (r.status == detail::LpStatus::Optimal) {
    s.values = r.x;
    s.objective = r.obj;
  } else {
    s.objective = r.status == detail::LpStatus::Unbounded ? -kInf : kInf;
  }
  return s;
}

} // namespace rcsn::milp
