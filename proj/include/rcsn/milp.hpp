#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace rcsn::milp {

enum class VarKind { Continuous, Integer, Binary };
enum class RowSense { LE, GE, EQ };
enum class SolveStatus { Optimal, Infeasible, Unbounded, BudgetExceeded };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Var {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = kInf;
};

struct Row {
  std::string name;
  std::vector<std::pair<int, double>> coeffs; // (var index, coefficient)
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

/// Sparse minimization model. Integer and binary variables must carry finite
/// bounds; add_row validates variable indices eagerly.
class Model {
public:
  int add_var(std::string name, VarKind kind, double lb, double ub, double obj = 0.0);
  void add_row(Row row);
  void set_obj(int var, double coeff);
  void set_branch_priority(int var, int priority);

  int var_count() const { return static_cast<int>(vars.size()); }
  int row_count() const { return static_cast<int>(rows.size()); }
  int priority_of(int var) const {
    return var < static_cast<int>(branch_priority.size()) ? branch_priority[var] : 0;
  }

  std::vector<Var> vars;
  std::vector<Row> rows;
  std::vector<double> objective;    // dense, parallel to vars
  std::vector<int> branch_priority; // sparse tail of zeros allowed; higher first
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  bool proven = false; // false when a budget cut the search short
  long long node_count = 0;
  long long lp_count = 0;
};

/// Callback inspected at every integral incumbent: return an empty vector to
/// accept it, or rows to add (each must be violated by the incumbent by more
/// than feas_tol, otherwise the solver throws std::logic_error).
using LazyRowCallback = std::function<std::vector<Row>(const std::vector<double> &)>;

struct SolveConfig {
  double feas_tol = 1e-6;
  double int_tol = 1e-6;
  double time_budget_sec = 1e18;
  long long node_budget = 50'000'000;
  // caller-certified lower bound on the optimum: an incumbent within 1e-9 of
  // it is accepted as optimal without draining the tree
  double objective_floor = -kInf;
  LazyRowCallback lazy_rows;
};

/// Branch and bound over the LP relaxation: best-bound node order,
/// most-fractional branching with lowest-index tie break.
Solution solve(const Model &model, const SolveConfig &cfg = {});

/// Single bounded-variable simplex solve with integrality dropped.
Solution solve_lp(const Model &model, const SolveConfig &cfg = {});

/// Deterministic LP-format text export.
void write_lp(const Model &model, std::ostream &out);

} // namespace rcsn::milp
