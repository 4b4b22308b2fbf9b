#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "rcsn/arborescence.hpp"
#include "rcsn/feasibility.hpp"
#include "rcsn/instance.hpp"
#include "rcsn/instance_gen.hpp"
#include "rcsn/instance_io.hpp"
#include "rcsn/max_flow.hpp"
#include "rcsn/survivable.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    stream = &file;
  }
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

rcsn::ThreePartitionInstance parse_three_partition(const std::string& text) {
  // "m,B:d1,d2,...,d3m"
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("expected m,B:d1,d2,... got " + text);
  std::vector<int> head = parse_int_list(text.substr(0, colon));
  if (head.size() != 2) throw std::invalid_argument("expected exactly m,B before ':'");
  rcsn::ThreePartitionInstance tp;
  tp.m = head[0];
  tp.bound = head[1];
  tp.demand = parse_int_list(text.substr(colon + 1));
  return tp;
}

struct SolveFlags {
  std::string instance_path;
  std::string model;
  std::string formulation = "cutset";
  std::string separation = "auto";
  std::string out_path;
  std::string trace_path;
  int k = 1;
  int kprot = 0;
  bool vi = true;
  bool enhance = true;
  bool uniform = false;
  bool full_resolve = false;
  double budget = 3000.0;
  std::optional<int> bound_worst;
  std::optional<double> bound_cost;
  std::optional<int> bound_balanced;
};

rcsn::SeparationMode parse_separation(const std::string& s) {
  if (s == "auto") return rcsn::SeparationMode::Auto;
  if (s == "enumerate") return rcsn::SeparationMode::Enumerate;
  if (s == "mip") return rcsn::SeparationMode::Mip;
  throw std::invalid_argument("unknown separation mode " + s);
}

void print_record(const std::string& status, const std::string& objective, double wall,
                  long long iterations, long long nodes, long long lps) {
  std::cout << "status " << status << '\n';
  if (!objective.empty()) std::cout << "objective " << objective << '\n';
  std::cout << "wall_s " << fmt6(wall) << '\n';
  std::cout << "iterations " << iterations << '\n';
  std::cout << "nodes " << nodes << '\n';
  std::cout << "lps " << lps << '\n';
}

int run_generate(const std::string& three_partition, const rcsn::GenConfig& cfg,
                 const std::string& out_path) {
  rcsn::Instance inst;
  std::string comment;
  if (!three_partition.empty()) {
    rcsn::ThreePartitionInstance tp = parse_three_partition(three_partition);
    inst = rcsn::generate_3partition_graph(tp);
    comment = "# 3-partition reduction m=" + std::to_string(tp.m) +
              " B=" + std::to_string(tp.bound) + "\n";
  } else {
    inst = rcsn::generate_random(cfg);
    comment = "# seed " + std::to_string(cfg.seed) + "\n";
    std::cerr << "seed " << cfg.seed << '\n';
  }
  OutputTarget out(out_path);
  *out.stream << comment;
  rcsn::write_instance(inst, *out.stream);
  return kExitOk;
}

int arb_exit(rcsn::milp::SolveStatus status) {
  switch (status) {
  case rcsn::milp::SolveStatus::Optimal: return kExitOk;
  case rcsn::milp::SolveStatus::Infeasible: return kExitInfeasible;
  case rcsn::milp::SolveStatus::BudgetExceeded: return kExitBudget;
  case rcsn::milp::SolveStatus::Unbounded: return kExitInternal;
  }
  return kExitInternal;
}

const char* status_text(rcsn::milp::SolveStatus status) {
  switch (status) {
  case rcsn::milp::SolveStatus::Optimal: return "optimal";
  case rcsn::milp::SolveStatus::Infeasible: return "infeasible";
  case rcsn::milp::SolveStatus::BudgetExceeded: return "budget_exceeded";
  case rcsn::milp::SolveStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

int run_solve_arborescence(const SolveFlags& flags, const rcsn::Instance& inst) {
  rcsn::ArbModelSpec spec;
  if (flags.model == "csta") spec.objective = rcsn::ArbObjective::Cost;
  else if (flags.model == "rcsta") spec.objective = rcsn::ArbObjective::WorstRobustness;
  else spec.objective = rcsn::ArbObjective::BalancedRobustness;
  spec.bound_worst = flags.bound_worst;
  spec.bound_cost = flags.bound_cost;
  spec.bound_balanced = flags.bound_balanced;

  rcsn::milp::SolveConfig cfg;
  cfg.time_budget_sec = flags.budget;
  auto t0 = std::chrono::steady_clock::now();
  rcsn::ArbSolveResult res = rcsn::solve_model(inst, spec, cfg);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool have_tree = !res.arb.arcs.empty() || res.status == rcsn::milp::SolveStatus::Optimal;
  double objective = 0.0;
  if (have_tree) {
    // independent recheck of the reported metrics
    if (rcsn::evaluate_worst_case(inst, res.arb) != res.arb.worst_robustness) {
      std::cerr << "internal error: simulated worst case disagrees with the model\n";
      return kExitInternal;
    }
    double cost = 0.0;
    for (rcsn::ArcId a : res.arb.arcs) cost += inst.arcs[a].cost;
    if (std::abs(cost - res.arb.cost) > 1e-6 * (1.0 + std::abs(cost))) {
      std::cerr << "internal error: recomputed cost disagrees\n";
      return kExitInternal;
    }
    switch (spec.objective) {
    case rcsn::ArbObjective::Cost: objective = res.arb.cost; break;
    case rcsn::ArbObjective::WorstRobustness: objective = res.arb.worst_robustness; break;
    case rcsn::ArbObjective::BalancedRobustness:
      objective = res.arb.balanced_robustness;
      break;
    }
  }
  print_record(status_text(res.status), have_tree ? fmt6(objective) : "", wall, 0,
               res.node_count, res.lp_count);
  if (have_tree) {
    rcsn::SolutionFile sol;
    sol.objective = objective;
    sol.selected = res.arb.arcs;
    for (rcsn::ArcId a : res.arb.arcs)
      sol.flows.push_back({"base", a, res.arb.x[a]});
    OutputTarget out(flags.out_path);
    rcsn::write_solution(sol, *out.stream);
  }
  return arb_exit(res.status);
}

int run_solve_survivable(const SolveFlags& flags, const rcsn::Instance& inst) {
  rcsn::AugmentedInstance aug = rcsn::augment_with_sink(inst);
  rcsn::SurvivableProblem prob{&aug, flags.k, flags.kprot};
  rcsn::SurvivableOptions opts;
  opts.use_valid_inequalities = flags.vi;
  opts.uniform_capacity_mode = flags.uniform;
  opts.separation = parse_separation(flags.separation);
  opts.use_enhancement = flags.enhance;
  opts.full_resolve = flags.full_resolve;
  opts.milp.time_budget_sec = flags.budget;

  std::ofstream trace_file;
  if (!flags.trace_path.empty()) {
    if (flags.trace_path == "-") {
      opts.trace = &std::cerr;
    } else {
      trace_file.open(flags.trace_path);
      if (!trace_file) throw std::runtime_error("cannot write " + flags.trace_path);
      opts.trace = &trace_file;
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  rcsn::SurvivableResult res;
  if (flags.formulation == "cutset") res = rcsn::solve_cutset(prob, opts);
  else if (flags.formulation == "flow") res = rcsn::solve_flow(prob, opts);
  else if (flags.formulation == "bilevel") res = rcsn::solve_bilevel(prob, opts);
  else throw std::invalid_argument("unknown formulation " + flags.formulation);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool have_design = !res.design.selected.empty();
  print_record(status_text(res.status), have_design ? fmt6(res.design.cost) : "", wall,
               res.iterations, res.node_count, res.lp_count);
  if (!have_design) return arb_exit(res.status);

  // re-verify exactly the way `check` would, on the file-level arc sets
  std::vector<char> sel(aug.arc_count(), 0), prot(aug.arc_count(), 0);
  for (rcsn::ArcId a : res.design.selected) sel[a] = 1;
  for (int a = aug.initial_arc_count; a < aug.arc_count(); ++a) sel[a] = 1;
  for (rcsn::ArcId a : res.design.protected_arcs) prot[a] = 1;
  rcsn::FeasibilityResult verdict = rcsn::check_feasibility(aug, sel, prot, prob.k);
  if (res.status == rcsn::milp::SolveStatus::Optimal && !verdict.feasible) {
    std::cerr << "internal error: returned design fails re-verification\n";
    return kExitInternal;
  }

  rcsn::SolutionFile sol;
  sol.objective = res.design.cost;
  for (rcsn::ArcId a : res.design.selected)
    if (a < aug.initial_arc_count) sol.selected.push_back(a);
  sol.protected_arcs = res.design.protected_arcs;
  rcsn::FlowAssignment base = rcsn::max_flow(aug, rcsn::selection_capacities(aug, sel));
  for (int a = 0; a < aug.initial_arc_count; ++a)
    if (base.flow[a] > 0) sol.flows.push_back({"base", a, base.flow[a]});
  OutputTarget out(flags.out_path);
  rcsn::write_solution(sol, *out.stream);
  return arb_exit(res.status);
}

int run_solve(const SolveFlags& flags) {
  rcsn::Instance inst = rcsn::read_instance_file(flags.instance_path);
  if (flags.model == "crkecsn") return run_solve_survivable(flags, inst);
  if (flags.model == "csta" || flags.model == "rcsta" || flags.model == "brcsta")
    return run_solve_arborescence(flags, inst);
  throw std::invalid_argument("unknown model " + flags.model);
}

int run_check(const std::string& instance_path, const std::string& solution_path, int k,
              int kprot) {
  rcsn::Instance inst = rcsn::read_instance_file(instance_path);
  rcsn::SolutionFile sol = rcsn::read_solution_file(solution_path);
  rcsn::AugmentedInstance aug = rcsn::augment_with_sink(inst);

  std::vector<char> sel(aug.arc_count(), 0), prot(aug.arc_count(), 0);
  for (rcsn::ArcId a : sol.selected) {
    if (a < 0 || a >= aug.initial_arc_count)
      throw std::runtime_error("solution selects unknown arc " + std::to_string(a));
    sel[a] = 1;
  }
  for (int a = aug.initial_arc_count; a < aug.arc_count(); ++a) sel[a] = 1;
  for (rcsn::ArcId a : sol.protected_arcs) {
    if (a < 0 || a >= aug.initial_arc_count)
      throw std::runtime_error("solution protects unknown arc " + std::to_string(a));
    if (!sel[a]) {
      std::cout << "FAIL protected arc " << a << " is not selected\n";
      return kExitUsage;
    }
    prot[a] = 1;
  }
  if (kprot >= 0 && static_cast<int>(sol.protected_arcs.size()) > kprot) {
    std::cout << "FAIL protection budget exceeded: " << sol.protected_arcs.size() << " > "
              << kprot << '\n';
    return kExitUsage;
  }
  rcsn::FeasibilityResult res = rcsn::check_feasibility(aug, sel, prot, k);
  if (res.feasible) {
    std::cout << "PASS residual " << res.residual << '\n';
    return kExitOk;
  }
  std::cout << "FAIL residual " << res.residual << " after failures:";
  for (rcsn::ArcId a : res.witness.failed)
    std::cout << ' ' << a << " (" << aug.arcs[a].tail << "->" << aug.arcs[a].head << ")";
  std::cout << '\n';
  return kExitUsage;
}

struct BenchCell {
  std::string instance;
  std::string formulation;
  int k = 0;
  int kprot = 0;
};

struct BenchRow {
  std::string status = "error";
  bool have_objective = false;
  double objective = 0.0;
  double wall = 0.0;
  long long iterations = 0, nodes = 0, lps = 0;
  std::string note;
};

int run_bench(const std::vector<std::string>& paths, const std::string& k_list,
              const std::string& kprot_list, const std::string& formulation_list,
              double budget, int jobs, bool vi, const std::string& out_path) {
  std::vector<int> ks = parse_int_list(k_list);
  std::vector<int> kps = parse_int_list(kprot_list);
  std::vector<std::string> forms;
  {
    std::stringstream ss(formulation_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) if (!tok.empty()) forms.push_back(tok);
    if (forms.empty()) throw std::invalid_argument("no formulations given");
  }

  std::vector<rcsn::AugmentedInstance> graphs;
  graphs.reserve(paths.size());
  for (const std::string& p : paths)
    graphs.push_back(rcsn::augment_with_sink(rcsn::read_instance_file(p)));

  std::vector<BenchCell> cells;
  std::vector<int> cell_graph;
  for (std::size_t g = 0; g < paths.size(); ++g)
    for (int k : ks)
      for (int kp : kps)
        for (const std::string& f : forms) {
          cells.push_back(BenchCell{paths[g], f, k, kp});
          cell_graph.push_back(static_cast<int>(g));
        }

  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const BenchCell& cell = cells[i];
      BenchRow& row = rows[i];
      try {
        rcsn::SurvivableProblem prob{&graphs[cell_graph[i]], cell.k, cell.kprot};
        rcsn::SurvivableOptions opts;
        opts.use_valid_inequalities = vi;
        opts.milp.time_budget_sec = budget;
        auto t0 = std::chrono::steady_clock::now();
        rcsn::SurvivableResult res;
        if (cell.formulation == "cutset") res = rcsn::solve_cutset(prob, opts);
        else if (cell.formulation == "flow") res = rcsn::solve_flow(prob, opts);
        else if (cell.formulation == "bilevel") res = rcsn::solve_bilevel(prob, opts);
        else throw std::invalid_argument("unknown formulation " + cell.formulation);
        row.wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.status = status_text(res.status);
        row.have_objective = !res.design.selected.empty();
        row.objective = res.design.cost;
        row.iterations = res.iterations;
        row.nodes = res.node_count;
        row.lps = res.lp_count;
      } catch (const std::exception& e) {
        row.status = "error";
        row.note = e.what();
      }
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  OutputTarget out(out_path);
  *out.stream << "instance,formulation,k,kprot,vi,status,objective,wall_s,iterations,"
                 "nodes,lps\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const BenchCell& c = cells[i];
    const BenchRow& r = rows[i];
    *out.stream << c.instance << ',' << c.formulation << ',' << c.k << ',' << c.kprot
                << ',' << (vi ? 1 : 0) << ',' << r.status << ','
                << (r.have_objective ? fmt6(r.objective) : "") << ',' << fmt6(r.wall)
                << ',' << r.iterations << ',' << r.nodes << ',' << r.lps << '\n';
    if (!r.note.empty()) std::cerr << c.instance << " " << c.formulation << ": " << r.note
                                   << '\n';
  }

  // optimal objectives must agree across formulations of the same cell family
  bool disagreement = false;
  std::map<std::string, std::pair<double, std::string>> seen;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (rows[i].status != "optimal") continue;
    std::string key = cells[i].instance + "|" + std::to_string(cells[i].k) + "|" +
                      std::to_string(cells[i].kprot);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, std::make_pair(rows[i].objective, cells[i].formulation));
    } else if (std::abs(it->second.first - rows[i].objective) >
               1e-6 * (1.0 + std::abs(it->second.first))) {
      std::cerr << "objective disagreement on " << key << ": " << it->second.second << "="
                << fmt6(it->second.first) << " vs " << cells[i].formulation << "="
                << fmt6(rows[i].objective) << '\n';
      disagreement = true;
    }
  }
  return disagreement ? kExitInternal : kExitOk;
}

int run_export_dot(const std::string& instance_path, const std::string& solution_path,
                   const std::string& out_path) {
  rcsn::Instance inst = rcsn::read_instance_file(instance_path);
  rcsn::SolutionFile sol = rcsn::read_solution_file(solution_path);
  std::map<rcsn::ArcId, long long> flow;
  for (const rcsn::SolutionFlowEntry& f : sol.flows)
    if (f.scenario_tag == "base") flow[f.arc] = f.flow;
  std::vector<char> is_protected(inst.arcs.size(), 0);
  for (rcsn::ArcId a : sol.protected_arcs)
    if (a >= 0 && a < static_cast<rcsn::ArcId>(inst.arcs.size())) is_protected[a] = 1;

  OutputTarget out(out_path);
  std::ostream& os = *out.stream;
  os << "digraph design {\n";
  os << "  rankdir=LR;\n";
  for (rcsn::NodeId v : inst.nodes) {
    os << "  n" << v << " [label=\"" << v << "\"";
    if (v == inst.root) os << ", shape=doublecircle";
    else if (inst.is_terminal(v)) os << ", shape=circle, style=filled, fillcolor=lightgray";
    else os << ", shape=circle";
    os << "];\n";
  }
  for (rcsn::ArcId a : sol.selected) {
    if (a < 0 || a >= static_cast<rcsn::ArcId>(inst.arcs.size()))
      throw std::runtime_error("solution selects unknown arc " + std::to_string(a));
    const rcsn::Arc& arc = inst.arcs[a];
    os << "  n" << arc.tail << " -> n" << arc.head << " [";
    auto it = flow.find(a);
    if (it != flow.end()) os << "label=\"" << it->second << "\", ";
    if (is_protected[a]) os << "style=bold, penwidth=2.5, ";
    os << "color=black];\n";
  }
  os << "}\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rooted survivable network design toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "produce a random or reduction instance");
  rcsn::GenConfig gen_cfg;
  std::string gen_3p, gen_out;
  gen->add_option("--nodes", gen_cfg.n_nodes, "node count");
  gen->add_option("--terminals", gen_cfg.n_terminals, "terminal count");
  gen->add_option("--arcs", gen_cfg.target_arc_count, "arc target");
  gen->add_option("--seed", gen_cfg.seed, "generator seed");
  gen->add_option("--plane", gen_cfg.plane_size, "coordinate range");
  gen->add_option("--max-k", gen_cfg.max_k, "failures the full selection must survive");
  gen->add_option("--3partition", gen_3p, "reduction spec m,B:d1,d2,...");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "run one model on one instance");
  SolveFlags flags;
  solve->add_option("instance", flags.instance_path, "instance file")->required();
  solve->add_option("--model", flags.model, "csta | rcsta | brcsta | crkecsn")->required();
  solve->add_option("--formulation", flags.formulation, "cutset | flow | bilevel");
  auto* opt_k = solve->add_option("--k", flags.k, "failure budget");
  auto* opt_kp = solve->add_option("--kprot", flags.kprot, "protection budget");
  solve->add_option("--separation", flags.separation, "auto | enumerate | mip");
  solve->add_flag("--vi,!--no-vi", flags.vi, "strengthening rows");
  solve->add_flag("--enhance,!--no-enhance", flags.enhance, "sparsify generated cuts");
  solve->add_flag("--uniform", flags.uniform, "uniform-capacity cut rows");
  solve->add_flag("--full-resolve", flags.full_resolve, "restart the MILP per cut");
  solve->add_option("--time-budget", flags.budget, "seconds before giving up");
  int bound_worst = -1, bound_balanced = -1;
  double bound_cost = -1.0;
  auto* opt_br = solve->add_option("--bound-R", bound_worst, "worst-case robustness cap");
  auto* opt_bc = solve->add_option("--bound-C", bound_cost, "cost cap");
  auto* opt_bb = solve->add_option("--bound-BR", bound_balanced, "balanced robustness cap");
  solve->add_option("--trace", flags.trace_path, "JSON-lines progress file ('-' = stderr)");
  solve->add_option("-o,--out", flags.out_path, "solution file (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "re-verify a solution file");
  std::string check_inst, check_sol;
  int check_k = 0, check_kprot = -1;
  check->add_option("instance", check_inst, "instance file")->required();
  check->add_option("solution", check_sol, "solution file")->required();
  check->add_option("--k", check_k, "failure budget")->required();
  check->add_option("--kprot", check_kprot, "protection budget (default: count in file)");

  // bench
  auto* bench = app.add_subcommand("bench", "sweep formulations over instances");
  std::vector<std::string> bench_paths;
  std::string bench_k = "0,1,2", bench_kprot = "0", bench_forms = "cutset,flow,bilevel";
  std::string bench_out;
  double bench_budget = 3000.0;
  int bench_jobs = 1;
  bool bench_vi = true;
  bench->add_option("instances", bench_paths, "instance files")->required();
  bench->add_option("--k-list", bench_k, "comma-separated failure budgets");
  bench->add_option("--kprot-list", bench_kprot, "comma-separated protection budgets");
  bench->add_option("--formulations", bench_forms, "comma-separated solver list");
  bench->add_option("--budget", bench_budget, "seconds per run");
  bench->add_option("--jobs", bench_jobs, "parallel cells");
  bench->add_flag("--vi,!--no-vi", bench_vi, "strengthening rows");
  bench->add_option("-o,--out", bench_out, "CSV file (default stdout)");

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "render a solution as DOT");
  std::string dot_inst, dot_sol, dot_out;
  dot->add_option("instance", dot_inst, "instance file")->required();
  dot->add_option("solution", dot_sol, "solution file")->required();
  dot->add_option("-o,--out", dot_out, "DOT file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return run_generate(gen_3p, gen_cfg, gen_out);
    if (solve->parsed()) {
      if (opt_br->count()) flags.bound_worst = bound_worst;
      if (opt_bc->count()) flags.bound_cost = bound_cost;
      if (opt_bb->count()) flags.bound_balanced = bound_balanced;
      bool survivable = flags.model == "crkecsn";
      if (!survivable && (opt_k->count() || opt_kp->count()))
        throw std::invalid_argument("--k/--kprot apply to --model crkecsn only");
      if (survivable && (flags.bound_worst || flags.bound_cost || flags.bound_balanced))
        throw std::invalid_argument("--bound-* apply to arborescence models only");
      return run_solve(flags);
    }
    if (check->parsed()) return run_check(check_inst, check_sol, check_k, check_kprot);
    if (bench->parsed())
      return run_bench(bench_paths, bench_k, bench_kprot, bench_forms, bench_budget,
                       bench_jobs, bench_vi, bench_out);
    if (dot->parsed()) return run_export_dot(dot_inst, dot_sol, dot_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
