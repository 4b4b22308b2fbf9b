#include "rcsn/milp.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rcsn::milp {

namespace {

std::string num(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms,
                 const Model& model) {
  bool first = true;
  for (auto [v, c] : terms) {
    if (c == 0.0) continue;
    if (first) {
      out << (c < 0 ? "- " : "");
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << num(std::fabs(c)) << ' ' << model.vars[v].name;
  }
  if (first) out << "0 " << model.vars[0].name;
}

} // namespace

void write_lp(const Model& model, std::ostream& out) {
  out << "Minimize\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < model.var_count(); ++j)
    if (model.objective[j] != 0.0) obj.emplace_back(j, model.objective[j]);
  write_terms(out, obj, model);
  out << "\nSubject To\n";
  for (int i = 0; i < model.row_count(); ++i) {
    const Row& r = model.rows[i];
    out << ' ' << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ": ";
    write_terms(out, r.coeffs, model);
    switch (r.sense) {
    case RowSense::LE: out << " <= "; break;
    case RowSense::GE: out << " >= "; break;
    case RowSense::EQ: out << " = "; break;
    }
    out << num(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const Var& v : model.vars) {
    if (v.lb == -kInf && v.ub == kInf) {
      out << ' ' << v.name << " free\n";
    } else {
      out << ' ' << num(v.lb) << " <= " << v.name << " <= " << num(v.ub) << '\n';
    }
  }
  bool any_bin = false, any_gen = false;
  for (const Var& v : model.vars) {
    any_bin = any_bin || v.kind == VarKind::Binary;
    any_gen = any_gen || v.kind == VarKind::Integer;
  }
  if (any_bin) {
    out << "Binaries\n";
    for (const Var& v : model.vars)
      if (v.kind == VarKind::Binary) out << ' ' << v.name << '\n';
  }
  if (any_gen) {
    out << "Generals\n";
    for (const Var& v : model.vars)
      if (v.kind == VarKind::Integer) out << ' ' << v.name << '\n';
  }
  out << "End\n";
}

} // namespace rcsn::milp
