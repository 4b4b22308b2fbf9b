#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rcsn/arborescence.hpp"
#include "rcsn/instance_gen.hpp"
#include "test_util.hpp"

using namespace rcsn;
using testutil::ArcSpec;
using testutil::make_instance;

namespace {

Instance tiny(unsigned seed) {
  GenConfig cfg;
  cfg.n_nodes = 6;
  cfg.n_terminals = 2 + static_cast<int>(seed % 2);
  cfg.target_arc_count = 12 + static_cast<int>(seed % 3);
  cfg.seed = seed;
  cfg.max_k = 0;
  return generate_random(cfg);
}

// fan of three terminals, either fed directly or through a shared chain
Instance fan_fixture() {
  return make_instance(5, 0, {2, 3, 4},
                       {{0, 1, 5, 1.0},
                        {1, 2, 5, 1.0},
                        {2, 3, 5, 1.0},
                        {3, 4, 5, 1.0},
                        {0, 2, 5, 2.0},
                        {0, 3, 5, 2.0},
                        {0, 4, 5, 2.0}});
}

// one terminal lost per removed arc, counted by plain reachability
int simulate_worst(const Instance& inst, const Arborescence& arb) {
  int worst = 0;
  for (ArcId removed : arb.arcs) {
    std::unordered_set<NodeId> seen{inst.root};
    bool grew = true;
    while (grew) {
      grew = false;
      for (ArcId a : arb.arcs) {
        if (a == removed) continue;
        if (seen.count(inst.arcs[a].tail) && !seen.count(inst.arcs[a].head)) {
          seen.insert(inst.arcs[a].head);
          grew = true;
        }
      }
    }
    int lost = 0;
    for (NodeId t : inst.terminals)
      if (!seen.count(t)) ++lost;
    worst = std::max(worst, lost);
  }
  return worst;
}

void check_tree_shape(const Instance& inst, const Arborescence& arb) {
  std::set<NodeId> heads;
  double cost = 0.0;
  for (ArcId a : arb.arcs) {
    CHECK(arb.x[a] >= 1);  // zero-flow arcs must be pruned
    CHECK(arb.x[a] <= inst.arcs[a].capacity);
    CHECK(heads.insert(inst.arcs[a].head).second);  // in-degree one
    cost += inst.arcs[a].cost;
  }
  CHECK(arb.cost == doctest::Approx(cost));
  for (std::size_t i = 0; i < arb.x.size(); ++i)
    if (std::find(arb.arcs.begin(), arb.arcs.end(), static_cast<ArcId>(i)) ==
        arb.arcs.end())
      CHECK(arb.x[i] == 0);

  long long worst = 0;
  std::unordered_map<NodeId, long long> node_max;
  for (ArcId a : arb.arcs) {
    worst = std::max(worst, arb.x[a]);
    auto& m = node_max[inst.arcs[a].tail];
    m = std::max(m, arb.x[a]);
  }
  long long balanced = 0;
  for (auto& [node, m] : node_max) balanced += m;
  CHECK(arb.worst_robustness == static_cast<int>(worst));
  CHECK(arb.balanced_robustness == static_cast<int>(balanced));
  CHECK(evaluate_worst_case(inst, arb) == arb.worst_robustness);
  CHECK(simulate_worst(inst, arb) == arb.worst_robustness);
}

}  // namespace

TEST_SUITE("arborescence") {

TEST_CASE("fan fixture optima") {
  Instance inst = fan_fixture();

  ArbSolveResult cost = solve_model(inst, {ArbObjective::Cost, {}, {}, {}});
  REQUIRE(cost.status == milp::SolveStatus::Optimal);
  CHECK(cost.arb.cost == doctest::Approx(4.0));  // the chain
  check_tree_shape(inst, cost.arb);

  ArbSolveResult worst = solve_model(inst, {ArbObjective::WorstRobustness, {}, {}, {}});
  REQUIRE(worst.status == milp::SolveStatus::Optimal);
  CHECK(worst.arb.worst_robustness == 1);  // the direct fan
  check_tree_shape(inst, worst.arb);

  ArbSolveResult bal = solve_model(inst, {ArbObjective::BalancedRobustness, {}, {}, {}});
  REQUIRE(bal.status == milp::SolveStatus::Optimal);
  CHECK(bal.arb.balanced_robustness == 1);
  check_tree_shape(inst, bal.arb);

  ArbSolveResult pick = solve_model(inst, {ArbObjective::Cost, 1, {}, {}});
  REQUIRE(pick.status == milp::SolveStatus::Optimal);
  CHECK(pick.arb.cost == doctest::Approx(6.0));
  CHECK(pick.arb.worst_robustness == 1);

  ArbSolveResult mid = solve_model(inst, {ArbObjective::Cost, 2, {}, {}});
  REQUIRE(mid.status == milp::SolveStatus::Optimal);
  CHECK(mid.arb.cost == doctest::Approx(5.0));
  CHECK(mid.arb.worst_robustness <= 2);
}

TEST_CASE("every model shape matches subset enumeration") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    Instance inst = tiny(seed);
    CAPTURE(seed);

    oracle::ArbBruteResult bc = oracle::brute_arb_cost(inst);
    oracle::ArbBruteResult bw = oracle::brute_arb_worst(inst);
    oracle::ArbBruteResult bb = oracle::brute_arb_balanced(inst);
    REQUIRE(bc.feasible);  // the generator certifies connectivity

    ArbSolveResult cost = solve_model(inst, {ArbObjective::Cost, {}, {}, {}});
    REQUIRE(cost.status == milp::SolveStatus::Optimal);
    CHECK(cost.arb.cost == doctest::Approx(bc.best).epsilon(1e-9));
    check_tree_shape(inst, cost.arb);

    ArbSolveResult worst = solve_model(inst, {ArbObjective::WorstRobustness, {}, {}, {}});
    REQUIRE(worst.status == milp::SolveStatus::Optimal);
    CHECK(worst.arb.worst_robustness == static_cast<int>(bw.best));
    check_tree_shape(inst, worst.arb);

    ArbSolveResult bal = solve_model(inst, {ArbObjective::BalancedRobustness, {}, {}, {}});
    REQUIRE(bal.status == milp::SolveStatus::Optimal);
    CHECK(bal.arb.balanced_robustness == static_cast<int>(bb.best));
    check_tree_shape(inst, bal.arb);

    const int w_min = static_cast<int>(bw.best);
    const int b_min = static_cast<int>(bb.best);
    const double c_min = bc.best;

    // cost under a worst-case cap, including the saturated cap
    for (int w : {w_min, w_min + 1}) {
      oracle::ArbBruteResult filt = oracle::brute_arborescence(
          inst, [](const oracle::ArbCandidate& c) { return c.cost; },
          [&](const oracle::ArbCandidate& c) { return c.worst <= w; });
      ArbSolveResult got = solve_model(inst, {ArbObjective::Cost, w, {}, {}});
      REQUIRE(got.status == milp::SolveStatus::Optimal);
      CHECK(got.arb.cost == doctest::Approx(filt.best).epsilon(1e-9));
      CHECK(got.arb.worst_robustness <= w);
    }

    // cost under a balanced cap
    {
      oracle::ArbBruteResult filt = oracle::brute_arborescence(
          inst, [](const oracle::ArbCandidate& c) { return c.cost; },
          [&](const oracle::ArbCandidate& c) { return c.balanced <= b_min; });
      ArbSolveResult got = solve_model(inst, {ArbObjective::Cost, {}, {}, b_min});
      REQUIRE(got.status == milp::SolveStatus::Optimal);
      CHECK(got.arb.cost == doctest::Approx(filt.best).epsilon(1e-9));
    }

    // robustness under a cost budget
    {
      double budget = 1.15 * c_min;
      oracle::ArbBruteResult filt = oracle::brute_arborescence(
          inst,
          [](const oracle::ArbCandidate& c) { return static_cast<double>(c.worst); },
          [&](const oracle::ArbCandidate& c) { return c.cost <= budget + 1e-9; });
      ArbSolveResult got = solve_model(inst, {ArbObjective::WorstRobustness, {}, budget, {}});
      REQUIRE(got.status == milp::SolveStatus::Optimal);
      CHECK(got.arb.worst_robustness == static_cast<int>(filt.best));
    }
    {
      double budget = 1.15 * c_min;
      oracle::ArbBruteResult filt = oracle::brute_arborescence(
          inst,
          [](const oracle::ArbCandidate& c) { return static_cast<double>(c.balanced); },
          [&](const oracle::ArbCandidate& c) { return c.cost <= budget + 1e-9; });
      ArbSolveResult got =
          solve_model(inst, {ArbObjective::BalancedRobustness, {}, budget, {}});
      REQUIRE(got.status == milp::SolveStatus::Optimal);
      CHECK(got.arb.balanced_robustness == static_cast<int>(filt.best));
    }

    // crossed robustness bounds
    {
      oracle::ArbBruteResult filt = oracle::brute_arborescence(
          inst,
          [](const oracle::ArbCandidate& c) { return static_cast<double>(c.worst); },
          [&](const oracle::ArbCandidate& c) { return c.balanced <= b_min + 1; });
      ArbSolveResult got =
          solve_model(inst, {ArbObjective::WorstRobustness, {}, {}, b_min + 1});
      REQUIRE(got.status == milp::SolveStatus::Optimal);
      CHECK(got.arb.worst_robustness == static_cast<int>(filt.best));
    }
    {
      oracle::ArbBruteResult filt = oracle::brute_arborescence(
          inst,
          [](const oracle::ArbCandidate& c) { return static_cast<double>(c.balanced); },
          [&](const oracle::ArbCandidate& c) { return c.worst <= w_min + 1; });
      ArbSolveResult got =
          solve_model(inst, {ArbObjective::BalancedRobustness, w_min + 1, {}, {}});
      REQUIRE(got.status == milp::SolveStatus::Optimal);
      CHECK(got.arb.balanced_robustness == static_cast<int>(filt.best));
    }
  }
}

TEST_CASE("infeasible bounds are detected") {
  Instance inst = fan_fixture();
  // no tree has a worst case of zero
  CHECK(solve_model(inst, {ArbObjective::Cost, 0, {}, {}}).status ==
        milp::SolveStatus::Infeasible);
  // cheapest tree costs four
  CHECK(solve_model(inst, {ArbObjective::WorstRobustness, {}, 3.5, {}}).status ==
        milp::SolveStatus::Infeasible);
  // disconnected terminal
  Instance cut = make_instance(3, 0, {1, 2}, {{0, 1, 5, 1.0}});
  CHECK(solve_model(cut, {ArbObjective::Cost, {}, {}, {}}).status ==
        milp::SolveStatus::Infeasible);
}

TEST_CASE("a bound restating the objective is rejected") {
  Instance inst = fan_fixture();
  CHECK_THROWS_AS(solve_model(inst, {ArbObjective::Cost, {}, 10.0, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_model(inst, {ArbObjective::WorstRobustness, 2, {}, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_model(inst, {ArbObjective::BalancedRobustness, {}, {}, 2}),
                  std::invalid_argument);
}

TEST_CASE("relaxation bounds the integer optimum from below") {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    Instance inst = tiny(seed);
    milp::Model model;
    ArbVars vars = build_flow_model(inst, model);
    for (std::size_t i = 0; i < inst.arcs.size(); ++i)
      model.set_obj(vars.y[i], inst.arcs[i].cost);
    milp::Solution lp = milp::solve_lp(model);
    REQUIRE(lp.status == milp::SolveStatus::Optimal);
    double integer_best = oracle::brute_arb_cost(inst).best;
    CAPTURE(seed);
    CHECK(lp.objective <= integer_best + 1e-6);
  }
}

TEST_CASE("root reattachment never hurts the worst case") {
  Instance inst = make_instance(3, 0, {1, 2},
                                {{0, 1, 5, 1.0}, {1, 2, 5, 1.0}, {0, 2, 5, 5.0}});
  ArbSolveResult cheap = solve_model(inst, {ArbObjective::Cost, {}, {}, {}});
  REQUIRE(cheap.status == milp::SolveStatus::Optimal);
  CHECK(cheap.arb.arcs == std::vector<ArcId>{0, 1});
  CHECK(cheap.arb.worst_robustness == 2);

  Arborescence fixed = normalize_root_attach(inst, cheap.arb);
  CHECK(fixed.arcs == std::vector<ArcId>{0, 2});
  CHECK(fixed.worst_robustness == 1);
  CHECK(evaluate_worst_case(inst, fixed) == 1);

  // every tree node fed by an existing direct arc must use it afterwards
  for (ArcId a : fixed.arcs) {
    NodeId head = inst.arcs[a].head;
    bool direct_exists = false;
    for (const Arc& arc : inst.arcs)
      if (arc.tail == inst.root && arc.head == head) direct_exists = true;
    if (direct_exists) CHECK(inst.arcs[a].tail == inst.root);
  }

  Instance capped = make_instance(3, 0, {1, 2},
                                  {{0, 1, 1, 1.0}, {1, 2, 1, 1.0}, {0, 2, 1, 5.0}});
  ArbSolveResult small = solve_model(capped, {ArbObjective::WorstRobustness, {}, {}, {}});
  REQUIRE(small.status == milp::SolveStatus::Optimal);
  CHECK_THROWS_AS(normalize_root_attach(capped, small.arb), std::invalid_argument);
}

TEST_CASE("robustness report on the fan fixture") {
  Instance inst = fan_fixture();
  std::vector<double> gaps = {0.25, 0.5};
  RobustnessReport rep = robustness_report(inst, gaps);

  CHECK(rep.min_cost == doctest::Approx(4.0));
  CHECK(rep.min_worst == 1);
  CHECK(rep.cost_at_min_worst == doctest::Approx(6.0));
  CHECK(rep.delta_cost_worst == doctest::Approx(0.5));
  CHECK(rep.min_balanced == 1);
  CHECK(rep.cost_at_min_balanced == doctest::Approx(6.0));
  CHECK(rep.worst_of_min_balanced == 1);
  REQUIRE(rep.worst_at_cost_gap.size() == 2);
  CHECK(rep.worst_at_cost_gap[0].first == doctest::Approx(0.25));
  CHECK(rep.worst_at_cost_gap[0].second == 2);  // budget five affords a split
  CHECK(rep.worst_at_cost_gap[1].second == 1);  // budget six affords the fan

  // a wider budget can only improve the achievable robustness
  CHECK(rep.worst_at_cost_gap[1].second <= rep.worst_at_cost_gap[0].second);
  CHECK(rep.delta_cost_balanced >= 0.0);
}

TEST_CASE("report refuses disconnected instances") {
  Instance cut = make_instance(3, 0, {1, 2}, {{0, 1, 5, 1.0}});
  std::vector<double> gaps = {0.1};
  CHECK_THROWS_AS(robustness_report(cut, gaps), std::runtime_error);
}

TEST_CASE("grouped reduction instance routes every demand chain") {
  ThreePartitionInstance tp;
  tp.m = 1;
  tp.bound = 11;
  tp.demand = {4, 4, 3};
  Instance inst = generate_3partition_graph(tp);
  CHECK(static_cast<int>(inst.nodes.size()) == 1 + 1 + 11);
  CHECK(inst.num_terminals() == 12);

  // a single group arc must carry every terminal, and the split exists
  ArbSolveResult got = solve_model(inst, {ArbObjective::WorstRobustness, {}, {}, {}});
  REQUIRE(got.status == milp::SolveStatus::Optimal);
  CHECK(got.arb.worst_robustness == tp.bound + 1);
  check_tree_shape(inst, got.arb);

  CHECK(solve_model(inst, {ArbObjective::Cost, tp.bound + 1, {}, {}}).status ==
        milp::SolveStatus::Optimal);
  CHECK(solve_model(inst, {ArbObjective::Cost, tp.bound, {}, {}}).status ==
        milp::SolveStatus::Infeasible);
}

}  // TEST_SUITE
