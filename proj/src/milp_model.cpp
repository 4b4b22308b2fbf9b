#include "rcsn/milp.hpp"

#include <cmath>
#include <stdexcept>

namespace rcsn::milp {

int Model::add_var(std::string name, VarKind kind, double lb, double ub, double obj) {
  if (kind == VarKind::Binary) {
    lb = std::max(lb, 0.0);
    ub = std::min(ub, 1.0);
  }
  if (lb > ub) throw std::invalid_argument("variable " + name + ": lb > ub");
  if (kind != VarKind::Continuous && (!std::isfinite(lb) || !std::isfinite(ub)))
    throw std::invalid_argument("variable " + name + ": integer bounds must be finite");
  vars.push_back(Var{std::move(name), kind, lb, ub});
  objective.push_back(obj);
  return static_cast<int>(vars.size()) - 1;
}

void Model::add_row(Row row) {
  for (auto [v, c] : row.coeffs) {
    if (v < 0 || v >= var_count())
      throw std::invalid_argument("row " + row.name + ": bad variable index");
    if (!std::isfinite(c)) throw std::invalid_argument("row " + row.name + ": bad coefficient");
  }
  rows.push_back(std::move(row));
}

void Model::set_obj(int var, double coeff) { objective.at(var) = coeff; }

void Model::set_branch_priority(int var, int priority) {
  if (var < 0 || var >= var_count()) throw std::invalid_argument("bad variable index");
  if (var >= static_cast<int>(branch_priority.size())) branch_priority.resize(var + 1, 0);
  branch_priority[var] = priority;
}

} // namespace rcsn::milp
