#include "rcsn/instance_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rcsn {

namespace {

std::string coord_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cost_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

struct LineParser {
  std::istringstream in;
  int line;

  LineParser(const std::string& text, int line_no) : in(text), line(line_no) {}

  std::string word(const char* what) {
    std::string w;
    if (!(in >> w)) fail(line, std::string("missing ") + what);
    return w;
  }
  long long integer(const char* what) {
    long long v;
    if (!(in >> v)) fail(line, std::string("expected integer ") + what);
    return v;
  }
  double decimal(const char* what) {
    double v;
    if (!(in >> v)) fail(line, std::string("expected number ") + what);
    return v;
  }
  bool more() {
    std::string w;
    return static_cast<bool>(in >> w);
  }
  void done() {
    if (more()) fail(line, "trailing tokens");
  }
};

// strips comments and surrounding whitespace; empty result means skip
std::string clean(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

void write_instance(const Instance& inst, std::ostream& out) {
  out << "RCSN 1\n";
  for (NodeId v : inst.nodes) {
    out << "node " << v;
    auto it = inst.coords.find(v);
    if (it != inst.coords.end())
      out << ' ' << coord_text(it->second[0]) << ' ' << coord_text(it->second[1]);
    out << '\n';
  }
  out << "root " << inst.root << '\n';
  for (NodeId t : inst.terminals) out << "terminal " << t << '\n';
  for (std::size_t i = 0; i < inst.arcs.size(); ++i) {
    const Arc& a = inst.arcs[i];
    out << "arc " << i << ' ' << a.tail << ' ' << a.head << ' ' << a.capacity << ' '
        << cost_text(a.cost) << '\n';
  }
}

std::string instance_to_string(const Instance& inst) {
  std::ostringstream out;
  write_instance(inst, out);
  return out.str();
}

Instance read_instance(std::istream& in) {
  Instance inst;
  bool have_header = false, have_root = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = clean(raw);
    if (text.empty()) continue;
    if (!have_header) {
      LineParser p(text, line);
      if (p.word("header") != "RCSN") fail(line, "expected header RCSN 1");
      if (p.integer("format version") != 1) fail(line, "unsupported format version");
      p.done();
      have_header = true;
      continue;
    }
    LineParser p(text, line);
    std::string kind = p.word("directive");
    if (kind == "node") {
      NodeId v = static_cast<NodeId>(p.integer("node id"));
      double x;
      if (p.in >> x) {
        double y = p.decimal("y coordinate");
        p.done();
        inst.coords[v] = {x, y};
      } else if (!p.in.eof()) {
        fail(line, "expected coordinates");
      }
      inst.nodes.push_back(v);
    } else if (kind == "root") {
      if (have_root) fail(line, "duplicate root");
      inst.root = static_cast<NodeId>(p.integer("root id"));
      p.done();
      have_root = true;
    } else if (kind == "terminal") {
      inst.terminals.push_back(static_cast<NodeId>(p.integer("terminal id")));
      p.done();
    } else if (kind == "arc") {
      long long id = p.integer("arc id");
      if (id != static_cast<long long>(inst.arcs.size()))
        fail(line, "arc ids must be sequential from 0");
      Arc a;
      a.tail = static_cast<NodeId>(p.integer("tail"));
      a.head = static_cast<NodeId>(p.integer("head"));
      a.capacity = static_cast<int>(p.integer("capacity"));
      a.cost = p.decimal("cost");
      p.done();
      inst.arcs.push_back(a);
    } else {
      fail(line, "unknown directive '" + kind + "'");
    }
  }
  if (!have_header) fail(line, "empty input, expected header RCSN 1");
  if (!have_root) fail(line, "missing root directive");
  std::sort(inst.terminals.begin(), inst.terminals.end());
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in);
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_instance(inst, out);
  if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

void write_solution(const SolutionFile& sol, std::ostream& out) {
  out << "solution 1\n";
  out << "objective " << cost_text(sol.objective) << '\n';
  for (ArcId a : sol.selected) out << "select " << a << '\n';
  for (ArcId a : sol.protected_arcs) out << "protect " << a << '\n';
  for (const SolutionFlowEntry& f : sol.flows)
    out << "flow " << f.scenario_tag << ' ' << f.arc << ' ' << f.flow << '\n';
}

SolutionFile read_solution(std::istream& in) {
  SolutionFile sol;
  bool have_header = false, have_objective = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = clean(raw);
    if (text.empty()) continue;
    if (!have_header) {
      LineParser p(text, line);
      if (p.word("header") != "solution") fail(line, "expected header: solution 1");
      if (p.integer("format version") != 1) fail(line, "unsupported format version");
      p.done();
      have_header = true;
      continue;
    }
    LineParser p(text, line);
    std::string kind = p.word("directive");
    if (kind == "objective") {
      if (have_objective) fail(line, "duplicate objective");
      sol.objective = p.decimal("objective value");
      p.done();
      have_objective = true;
    } else if (kind == "select") {
      sol.selected.push_back(static_cast<ArcId>(p.integer("arc id")));
      p.done();
    } else if (kind == "protect") {
      sol.protected_arcs.push_back(static_cast<ArcId>(p.integer("arc id")));
      p.done();
    } else if (kind == "flow") {
      SolutionFlowEntry f;
      f.scenario_tag = p.word("scenario tag");
      f.arc = static_cast<ArcId>(p.integer("arc id"));
      f.flow = p.integer("flow units");
      p.done();
      sol.flows.push_back(f);
    } else {
      fail(line, "unknown directive '" + kind + "'");
    }
  }
  if (!have_header) fail(line, "empty input, expected header: solution 1");
  if (!have_objective) fail(line, "missing objective");
  return sol;
}

SolutionFile read_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_solution(in);
}

void write_solution_file(const SolutionFile& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_solution(sol, out);
  if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

} // namespace rcsn
