#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "rcsn/instance.hpp"
#include "rcsn/instance_gen.hpp"
#include "rcsn/instance_io.hpp"
#include "test_util.hpp"

using namespace rcsn;

namespace {

Instance parse(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

SolutionFile parse_solution(const std::string& text) {
  std::istringstream in(text);
  return read_solution(in);
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string cli_path() {
  const char* env = std::getenv("RCSN_CLI");
  return env ? env : "./rcsn";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliResult run_cli(const std::string& args) {
  std::filesystem::create_directories("cli_tmp");
  std::string cmd = cli_path() + " " + args + " > cli_tmp/stdout.txt 2> cli_tmp/stderr.txt";
  int raw = std::system(cmd.c_str());
  CliResult r;
  if (WIFEXITED(raw)) r.exit_code = WEXITSTATUS(raw);
  r.out = slurp("cli_tmp/stdout.txt");
  r.err = slurp("cli_tmp/stderr.txt");
  return r;
}

}  // namespace

TEST_SUITE("io-cli") {

TEST_CASE("instance round trip is byte stable") {
  GenConfig cfg;
  cfg.n_nodes = 9;
  cfg.n_terminals = 3;
  cfg.target_arc_count = 22;
  cfg.seed = 11;
  cfg.max_k = 1;
  Instance inst = generate_random(cfg);

  std::string text = instance_to_string(inst);
  Instance back = parse(text);
  CHECK(back == inst);
  CHECK(instance_to_string(back) == text);

  ThreePartitionInstance tp{1, 11, {4, 4, 3}};
  Instance bare = generate_3partition_graph(tp);  // no coordinates
  std::string bare_text = instance_to_string(bare);
  Instance bare_back = parse(bare_text);
  CHECK(bare_back == bare);
  CHECK(instance_to_string(bare_back) == bare_text);
}

TEST_CASE("hand-written instance text parses") {
  Instance inst = parse(
      "# toy network\n"
      "RCSN 1\n"
      "\n"
      "node 0 0 0\n"
      "node 1 10 0\n"
      "node 2 5 8.5\n"
      "root 0\n"
      "terminal 2\n"
      "arc 0 0 1 2 1.500000\n"
      "arc 1 1 2 1 2.000000 # inline comment\n");
  CHECK(inst.nodes.size() == 3);
  CHECK(inst.root == 0);
  CHECK(inst.terminals == std::vector<NodeId>{2});
  REQUIRE(inst.arcs.size() == 2);
  CHECK(inst.arcs[1].tail == 1);
  CHECK(inst.arcs[1].capacity == 1);
  CHECK(inst.arcs[1].cost == doctest::Approx(2.0));
  CHECK(inst.coords.at(2)[1] == doctest::Approx(8.5));

  // coordinates are optional per node
  Instance no_coords = parse("RCSN 1\nnode 0\nnode 1\nroot 0\nterminal 1\narc 0 0 1 1 1\n");
  CHECK(no_coords.coords.empty());
}

TEST_CASE("malformed instance text carries line numbers") {
  auto reject = [](const std::string& text, const char* needle) {
    CAPTURE(text);
    CHECK_THROWS_WITH_AS(parse(text), doctest::Contains(needle), std::runtime_error);
  };
  reject("bogus 1\n", "line 1");
  reject("RCSN 2\n", "unsupported format version");
  reject("RCSN 1\nnode 0\nroot 0\nshrub 1\n", "unknown directive");
  reject("RCSN 1\nnode 0\nnode 1\nroot 0\narc 1 0 1 1 1\n", "sequential");
  reject("RCSN 1\nnode 0\nroot 0\nroot 0\n", "duplicate root");
  reject("RCSN 1\nnode 0\nroot 0 0\n", "trailing tokens");
  reject("RCSN 1\nnode 0\nnode 1 2\nroot 0\n", "y coordinate");
  reject("RCSN 1\nnode 0\nnode 1 x y\nroot 0\n", "expected coordinates");
  reject("RCSN 1\nnode 0\n", "missing root");
  reject("", "expected header");
  reject("RCSN 1\nnode 0\nnode 1\nroot 0\nterminal 1\narc 0 1 0 1 1\n",
         "invalid instance");  // enters the root
  reject("RCSN 1\nnode 0\nnode 1\nroot 0\nterminal 1\narc 0 0 1 0 1\n",
         "invalid instance");  // zero capacity
}

TEST_CASE("solution round trip and validation") {
  SolutionFile sol;
  sol.objective = 12.75;
  sol.selected = {0, 2, 5};
  sol.protected_arcs = {2};
  sol.flows = {{"base", 0, 2}, {"base", 2, 1}, {"s1", 5, 3}};

  std::ostringstream out;
  write_solution(sol, out);
  SolutionFile back = parse_solution(out.str());
  CHECK(back.objective == doctest::Approx(12.75));
  CHECK(back.selected == sol.selected);
  CHECK(back.protected_arcs == sol.protected_arcs);
  REQUIRE(back.flows.size() == 3);
  CHECK(back.flows[2].scenario_tag == "s1");
  CHECK(back.flows[2].arc == 5);
  CHECK(back.flows[2].flow == 3);

  std::ostringstream again;
  write_solution(back, again);
  CHECK(again.str() == out.str());

  auto reject = [](const std::string& text, const char* needle) {
    CHECK_THROWS_WITH_AS(parse_solution(text), doctest::Contains(needle),
                         std::runtime_error);
  };
  reject("solution 1\nselect 0\n", "missing objective");
  reject("solution 1\nobjective 1\nobjective 2\n", "duplicate objective");
  reject("solution 1\nobjective 1\nshrub 3\n", "unknown directive");
  reject("solution 2\n", "unsupported format version");
  reject("solution 1\nobjective 1\nflow base 0\n", "flow units");
}

TEST_CASE("missing files are reported by path") {
  CHECK_THROWS_WITH_AS(read_instance_file("cli_tmp/definitely_absent.rcsn"),
                       doctest::Contains("cannot open"), std::runtime_error);
  CHECK_THROWS_WITH_AS(read_solution_file("cli_tmp/definitely_absent.sol"),
                       doctest::Contains("cannot open"), std::runtime_error);
}

TEST_CASE("cli generates, solves, checks, and renders") {
  CliResult bare = run_cli("");
  CHECK(bare.exit_code == 1);

  // deterministic generation through the tool
  CliResult gen = run_cli(
      "generate --nodes 9 --terminals 3 --arcs 22 --seed 11 --max-k 1 -o cli_tmp/g.rcsn");
  REQUIRE(gen.exit_code == 0);
  Instance from_cli = read_instance_file("cli_tmp/g.rcsn");
  GenConfig cfg;
  cfg.n_nodes = 9;
  cfg.n_terminals = 3;
  cfg.target_arc_count = 22;
  cfg.seed = 11;
  cfg.max_k = 1;
  CHECK(from_cli == generate_random(cfg));
  CHECK(slurp("cli_tmp/g.rcsn").find("seed 11") != std::string::npos);

  CliResult gen3p = run_cli("generate --3partition 2,11:5,3,4,3,4,3 -o cli_tmp/tp.rcsn");
  REQUIRE(gen3p.exit_code == 0);
  CHECK(read_instance_file("cli_tmp/tp.rcsn").nodes.size() == 25);

  // survivable solve, then an honest re-check
  CliResult solved = run_cli(
      "solve cli_tmp/g.rcsn --model crkecsn --k 1 --formulation cutset -o cli_tmp/g.sol");
  REQUIRE(solved.exit_code == 0);
  SolutionFile sol = read_solution_file("cli_tmp/g.sol");
  CHECK(sol.objective > 0.0);
  CHECK(!sol.selected.empty());

  CliResult ok = run_cli("check cli_tmp/g.rcsn cli_tmp/g.sol --k 1");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("PASS") != std::string::npos);

  // an emptied selection cannot pass
  SolutionFile empty = sol;
  empty.selected.clear();
  write_solution_file(empty, "cli_tmp/bad.sol");
  CliResult fail = run_cli("check cli_tmp/g.rcsn cli_tmp/bad.sol --k 1");
  CHECK(fail.exit_code == 1);
  CHECK(fail.out.find("FAIL") != std::string::npos);

  // protecting an unselected arc is rejected outright
  SolutionFile rogue = sol;
  rogue.protected_arcs = {-1};
  for (int a = 0; a < 64; ++a)
    if (std::find(sol.selected.begin(), sol.selected.end(), a) == sol.selected.end()) {
      rogue.protected_arcs = {a};
      break;
    }
  write_solution_file(rogue, "cli_tmp/rogue.sol");
  CliResult rogue_check = run_cli("check cli_tmp/g.rcsn cli_tmp/rogue.sol --k 1");
  CHECK(rogue_check.exit_code == 1);

  CliResult dot = run_cli("export-dot cli_tmp/g.rcsn cli_tmp/g.sol -o cli_tmp/g.dot");
  REQUIRE(dot.exit_code == 0);
  std::string dot_text = slurp("cli_tmp/g.dot");
  CHECK(dot_text.find("digraph") != std::string::npos);
  CHECK(dot_text.find("doublecircle") != std::string::npos);
}

TEST_CASE("cli solves tree models and reduction instances") {
  CliResult gen = run_cli("generate --3partition 1,11:4,4,3 -o cli_tmp/tp1.rcsn");
  REQUIRE(gen.exit_code == 0);

  CliResult solved = run_cli("solve cli_tmp/tp1.rcsn --model rcsta -o cli_tmp/tp1.sol");
  REQUIRE(solved.exit_code == 0);
  SolutionFile sol = read_solution_file("cli_tmp/tp1.sol");
  CHECK(sol.objective == doctest::Approx(12.0));  // eleven plus one
  CHECK(!sol.flows.empty());

  CliResult cheap = run_cli(
      "generate --nodes 8 --terminals 3 --arcs 20 --seed 4 --max-k 0 -o cli_tmp/t.rcsn");
  REQUIRE(cheap.exit_code == 0);
  CliResult csta = run_cli("solve cli_tmp/t.rcsn --model csta -o cli_tmp/t.sol");
  REQUIRE(csta.exit_code == 0);
  SolutionFile tree = read_solution_file("cli_tmp/t.sol");
  CHECK(!tree.selected.empty());
  bool base_flow = false;
  for (const SolutionFlowEntry& f : tree.flows)
    if (f.scenario_tag == "base" && f.flow >= 1) base_flow = true;
  CHECK(base_flow);
}

TEST_CASE("cli exit codes for edge conditions") {
  // an uncoverable failure budget
  std::filesystem::create_directories("cli_tmp");
  Instance chain = testutil::make_instance(3, 0, {2}, {{0, 1, 1, 1.0}, {1, 2, 1, 1.0}});
  write_instance_file(chain, "cli_tmp/chain.rcsn");
  CliResult infeasible = run_cli("solve cli_tmp/chain.rcsn --model crkecsn --k 1");
  CHECK(infeasible.exit_code == 2);

  CliResult bad_model = run_cli("solve cli_tmp/chain.rcsn --model nonsense");
  CHECK(bad_model.exit_code == 1);

  // failure budgets only make sense for the survivable model
  CliResult misuse = run_cli("solve cli_tmp/chain.rcsn --model csta --k 1");
  CHECK(misuse.exit_code == 1);

  CliResult misuse2 = run_cli("solve cli_tmp/chain.rcsn --model crkecsn --k 0 --bound-R 2");
  CHECK(misuse2.exit_code == 1);

  CliResult no_file = run_cli("solve cli_tmp/not_there.rcsn --model csta");
  CHECK(no_file.exit_code == 1);
}

TEST_CASE("cli benchmark table") {
  CliResult gen = run_cli(
      "generate --nodes 8 --terminals 3 --arcs 20 --seed 9 --max-k 1 -o cli_tmp/b.rcsn");
  REQUIRE(gen.exit_code == 0);
  CliResult bench = run_cli(
      "bench cli_tmp/b.rcsn --k-list 0,1 --kprot-list 0 --formulations cutset,flow "
      "--budget 300 -o cli_tmp/bench.csv");
  REQUIRE(bench.exit_code == 0);

  std::istringstream csv(slurp("cli_tmp/bench.csv"));
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header ==
        "instance,formulation,k,kprot,vi,status,objective,wall_s,iterations,nodes,lps");
  int rows = 0;
  std::string line;
  std::map<std::string, std::vector<std::string>> objective_by_k;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    ++rows;
    std::vector<std::string> cells;
    std::istringstream split(line);
    std::string cell;
    while (std::getline(split, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() >= 11);
    CHECK(cells[5] == "optimal");
    objective_by_k[cells[2]].push_back(cells[6]);
  }
  CHECK(rows == 4);  // two budgets, two formulations
  for (auto& [k, objectives] : objective_by_k) {
    REQUIRE(objectives.size() == 2);
    CHECK(objectives[0] == objectives[1]);  // formulations agree cell by cell
  }
}

}  // TEST_SUITE
