#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rcsn/feasibility.hpp"
#include "rcsn/instance_gen.hpp"
#include "rcsn/instance_io.hpp"

using namespace rcsn;

namespace {

std::vector<int> undirected_hops(const Instance& inst) {
  std::vector<std::vector<int>> adj(inst.nodes.size());
  for (const Arc& a : inst.arcs) {
    adj[a.tail].push_back(a.head);
    adj[a.head].push_back(a.tail);
  }
  std::vector<int> hop(inst.nodes.size(), 1 << 20);
  std::queue<int> bfs;
  hop[inst.root] = 0;
  bfs.push(inst.root);
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : adj[v])
      if (hop[w] > hop[v] + 1) {
        hop[w] = hop[v] + 1;
        bfs.push(w);
      }
  }
  return hop;
}

}  // namespace

TEST_SUITE("instance-gen") {

TEST_CASE("one seed, one instance") {
  GenConfig cfg;
  cfg.n_nodes = 9;
  cfg.n_terminals = 3;
  cfg.target_arc_count = 22;
  cfg.seed = 31337;
  cfg.max_k = 1;
  Instance a = generate_random(cfg);
  Instance b = generate_random(cfg);
  CHECK(a == b);
  CHECK(instance_to_string(a) == instance_to_string(b));

  cfg.seed = 31338;
  Instance c = generate_random(cfg);
  CHECK(instance_to_string(a) != instance_to_string(c));
}

TEST_CASE("generated structure obeys the recipe") {
  for (unsigned seed : {1u, 7u, 99u}) {
    GenConfig cfg;
    cfg.n_nodes = 10;
    cfg.n_terminals = 4;
    cfg.target_arc_count = 26;
    cfg.seed = seed;
    cfg.max_k = 1;
    Instance inst = generate_random(cfg);
    CAPTURE(seed);

    CHECK(static_cast<int>(inst.nodes.size()) == cfg.n_nodes);
    CHECK(inst.root == 0);
    CHECK(inst.num_terminals() == cfg.n_terminals);
    CHECK(static_cast<int>(inst.arcs.size()) >= cfg.target_arc_count);
    CHECK(static_cast<int>(inst.coords.size()) == cfg.n_nodes);

    const int t = cfg.n_terminals;
    auto ceil_frac = [t](int numer) { return (numer * t + 4) / 5; };
    const std::set<int> menu = {ceil_frac(4), ceil_frac(3), ceil_frac(2), ceil_frac(1)};
    const std::set<int> near_menu = {ceil_frac(4), ceil_frac(3)};

    std::vector<int> hop = undirected_hops(inst);
    std::set<std::pair<int, int>> seen_pairs;
    for (const Arc& a : inst.arcs) {
      CHECK(a.head != inst.root);  // the root only sends
      CHECK(menu.count(a.capacity) == 1);
      if (hop[a.tail] <= 2 && hop[a.head] <= 2) CHECK(near_menu.count(a.capacity) == 1);

      auto [x1, y1] = inst.coords.at(a.tail);
      auto [x2, y2] = inst.coords.at(a.head);
      double dx = x1 - x2, dy = y1 - y2;
      double length = std::sqrt(dx * dx + dy * dy);
      double v = length * (1.0 + static_cast<double>(a.capacity) / t);
      double want = std::round(v * 1e6) / 1e6;
      CHECK(std::abs(a.cost - want) <= 1e-9);

      seen_pairs.insert({std::min(a.tail, a.head), std::max(a.tail, a.head)});
    }
    // every non-root adjacency appears in both directions with equal data
    for (const Arc& a : inst.arcs) {
      if (a.tail == inst.root) continue;
      bool reverse_found = false;
      for (const Arc& b : inst.arcs)
        if (b.tail == a.head && b.head == a.tail && b.capacity == a.capacity &&
            b.cost == a.cost)
          reverse_found = true;
      CHECK(reverse_found);
    }
  }
}

TEST_CASE("full selection survives the requested failures") {
  for (int max_k : {0, 1, 2}) {
    GenConfig cfg;
    cfg.n_nodes = 8;
    cfg.n_terminals = 3;
    cfg.target_arc_count = 20;
    cfg.seed = 400 + static_cast<unsigned>(max_k);
    cfg.max_k = max_k;
    Instance inst = generate_random(cfg);
    AugmentedInstance aug = augment_with_sink(inst);
    std::vector<char> all = full_selection(aug);
    std::vector<char> none(aug.arc_count(), 0);
    CAPTURE(max_k);
    CHECK(check_feasibility(aug, all, none, max_k).feasible);
    CHECK(check_feasibility(aug, all, none, max_k).residual >= inst.num_terminals());
  }
}

TEST_CASE("invalid configurations are rejected") {
  GenConfig base;
  {
    GenConfig cfg = base;
    cfg.n_nodes = 1;
    CHECK_THROWS_AS(generate_random(cfg), std::invalid_argument);
  }
  {
    GenConfig cfg = base;
    cfg.n_terminals = 0;
    CHECK_THROWS_AS(generate_random(cfg), std::invalid_argument);
  }
  {
    GenConfig cfg = base;
    cfg.n_terminals = cfg.n_nodes;
    CHECK_THROWS_AS(generate_random(cfg), std::invalid_argument);
  }
  {
    GenConfig cfg = base;
    cfg.target_arc_count = 0;
    CHECK_THROWS_AS(generate_random(cfg), std::invalid_argument);
  }
  {
    GenConfig cfg = base;
    cfg.plane_size = 0.0;
    CHECK_THROWS_AS(generate_random(cfg), std::invalid_argument);
  }
  {
    GenConfig cfg = base;
    cfg.max_k = -1;
    CHECK_THROWS_AS(generate_random(cfg), std::invalid_argument);
  }
}

TEST_CASE("hopeless configurations exhaust their retries") {
  GenConfig cfg;
  cfg.n_nodes = 3;
  cfg.n_terminals = 1;
  cfg.target_arc_count = 3;
  cfg.seed = 5;
  cfg.max_k = 3;  // only two arcs can ever enter the terminal
  CHECK_THROWS_WITH_AS(generate_random(cfg),
                       doctest::Contains("raise the arc target"), std::runtime_error);
}

TEST_CASE("grouped reduction graph layout") {
  ThreePartitionInstance tp;
  tp.m = 2;
  tp.bound = 11;
  tp.demand = {5, 3, 4, 3, 4, 3};
  Instance inst = generate_3partition_graph(tp);
  CHECK_NOTHROW(inst.validate());

  const int expect_terminals = tp.m + tp.m * tp.bound;
  CHECK(static_cast<int>(inst.nodes.size()) == 1 + tp.m + tp.m * tp.bound);
  CHECK(static_cast<int>(inst.nodes.size()) == 25);
  CHECK(inst.num_terminals() == expect_terminals);
  CHECK(inst.root == 0);

  int root_arcs = 0;
  for (const Arc& a : inst.arcs) {
    CHECK(a.capacity == expect_terminals);
    CHECK(a.cost == 1.0);
    CHECK(a.head != inst.root);
    if (a.tail == inst.root) {
      ++root_arcs;
      CHECK(a.head >= 1);
      CHECK(a.head <= tp.m);
    }
  }
  CHECK(root_arcs == tp.m);

  // two directions between groups and items, one chain per extra demand unit
  int total_demand = 0;
  for (int d : tp.demand) total_demand += d;
  int expected_arcs = tp.m + 2 * tp.m * 3 * tp.m +
                      2 * (total_demand - 3 * tp.m);
  CHECK(static_cast<int>(inst.arcs.size()) == expected_arcs);
}

TEST_CASE("degenerate partition inputs are rejected") {
  {
    ThreePartitionInstance tp{2, 11, {5, 3, 4, 3, 4, 4}};  // sums to 23, not 22
    CHECK_THROWS_AS(generate_3partition_graph(tp), std::invalid_argument);
  }
  {
    ThreePartitionInstance tp{2, 11, {5, 3, 4, 3, 4}};  // five demands for six slots
    CHECK_THROWS_AS(generate_3partition_graph(tp), std::invalid_argument);
  }
  {
    ThreePartitionInstance tp{1, 12, {3, 4, 5}};  // 3 is not above 12/4
    CHECK_THROWS_AS(generate_3partition_graph(tp), std::invalid_argument);
  }
  {
    ThreePartitionInstance tp{1, 10, {5, 3, 2}};  // 5 is not below 10/2
    CHECK_THROWS_AS(generate_3partition_graph(tp), std::invalid_argument);
  }
  {
    ThreePartitionInstance tp{0, 11, {}};
    CHECK_THROWS_AS(generate_3partition_graph(tp), std::invalid_argument);
  }
}

TEST_CASE("triple split decision fixtures") {
  CHECK(oracle::brute_three_partition(2, 11, {5, 3, 4, 3, 4, 3}));
  CHECK(oracle::brute_three_partition(1, 11, {4, 4, 3}));
  CHECK(!oracle::brute_three_partition(2, 13, {6, 4, 4, 4, 4, 4}));
  CHECK(!oracle::brute_three_partition(2, 15, {6, 6, 6, 4, 4, 4}));
  CHECK(oracle::brute_three_partition(2, 15, {7, 7, 4, 4, 4, 4}));
}

}  // TEST_SUITE
