#pragma once

#include <vector>

#include "rcsn/milp.hpp"

namespace rcsn::milp::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Computational form min c'x, A x + w = b with per-row slack bounds derived
/// from the row sense. Columns stored sparse per structural variable.
struct LpData {
  int n = 0;
  int m = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> obj;
  std::vector<double> rhs;
  std::vector<RowSense> sense;
};

LpData build_lp_data(const Model &model, const std::vector<Row> &extra_rows);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x; // structural values
  double obj = 0.0;
  int iterations = 0;
};

/// Bounded-variable primal simplex, two phases with row artificials. Dantzig
/// pricing, Bland's rule after a degeneracy streak, dense basis inverse with
/// drift-triggered refactorization. Weak duality is checked on optimal exit.
///
/// A solve with warm=true reuses the basis left by the previous optimal solve
/// under new bounds: dual pivots repair primal feasibility, then phase 2
/// finishes. Any trouble on that path falls back to the cold solve, and a
/// warm infeasibility verdict is re-confirmed cold before being returned.
class SimplexSolver {
public:
  void set_data(const LpData *data);
  LpResult solve(const std::vector<double> &lb, const std::vector<double> &ub,
                 bool warm = false);

private:
  const LpData *d_ = nullptr;
  bool warm_ready_ = false;

  // column world: [0,n) structural, [n,n+m) slack, [n+m, ...) artificials
  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<double> lo_, up_, cost_;
  std::vector<int> basic_;           // per row
  std::vector<unsigned char> state_; // 0 at lower, 1 at upper, 2 basic
  std::vector<double> xb_;           // per row
  std::vector<double> binv_;         // m*m row-major
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  std::vector<double> w_, y_;

  double col_entry_sum(int j, const std::vector<double> &vec) const;
  void compute_w(int j);
  double nb_value(int j) const;
  void recompute_xb();
  bool refactor();
  double value_of(int j) const;
  double primal_row_violation() const;
  LpStatus run_phase(bool phase1, int &iters);
  LpStatus dual_repair(int &iters);
  LpResult finish_phase2(int iters);
  void check_duality() const;
};

} // namespace rcsn::milp::detail
