#include "rcsn/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rcsn/feasibility.hpp"

namespace rcsn {

namespace {

// Raw engine output only; the distribution helpers are hand-rolled so that a
// seed pins the instance bit for bit on every standard library.
double unit_double(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& eng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(eng()) * n) >> 64);
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

int ceil_frac(int numer, int value, int denom) {
  return (numer * value + denom - 1) / denom;
}

Instance attempt_instance(const GenConfig& cfg, std::uint64_t stream) {
  std::mt19937_64 eng(stream);
  const int n = cfg.n_nodes;

  std::vector<std::array<double, 2>> pos(n);
  for (int v = 0; v < n; ++v) {
    pos[v][0] = unit_double(eng) * cfg.plane_size;
    pos[v][1] = unit_double(eng) * cfg.plane_size;
  }

  std::vector<NodeId> pool(n - 1);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < cfg.n_terminals; ++i) {
    int j = i + static_cast<int>(below(eng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<NodeId> terminals(pool.begin(), pool.begin() + cfg.n_terminals);
  std::sort(terminals.begin(), terminals.end());

  // shortest pairs first until the arc budget is met
  std::vector<std::tuple<double, int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = pos[i][0] - pos[j][0], dy = pos[i][1] - pos[j][1];
      pairs.emplace_back(dx * dx + dy * dy, i, j);
    }
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::pair<int, int>> chosen;
  int arc_count = 0;
  for (const auto& [d2, i, j] : pairs) {
    (void)d2;
    if (arc_count >= cfg.target_arc_count) break;
    chosen.emplace_back(i, j);
    arc_count += i == 0 ? 1 : 2; // the root only sends
  }

  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : chosen) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<int> hop(n, n + 1);
  std::queue<int> bfs;
  hop[0] = 0;
  bfs.push(0);
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : adj[v])
      if (hop[w] > hop[v] + 1) {
        hop[w] = hop[v] + 1;
        bfs.push(w);
      }
  }

  const int t = cfg.n_terminals;
  const int caps[4] = {ceil_frac(4, t, 5), ceil_frac(3, t, 5), ceil_frac(2, t, 5),
                       ceil_frac(1, t, 5)};

  Instance inst;
  inst.nodes.resize(n);
  std::iota(inst.nodes.begin(), inst.nodes.end(), 0);
  inst.root = 0;
  inst.terminals = terminals;
  for (int v = 0; v < n; ++v) inst.coords[v] = pos[v];

  for (auto [i, j] : chosen) {
    bool near_root = hop[i] <= 2 && hop[j] <= 2;
    int cap = near_root ? caps[below(eng, 2)] : caps[below(eng, 4)];
    double dx = pos[i][0] - pos[j][0], dy = pos[i][1] - pos[j][1];
    double length = std::sqrt(dx * dx + dy * dy);
    double cost = round6(length * (1.0 + static_cast<double>(cap) / t));
    inst.arcs.push_back(Arc{i, j, cap, cost});
    if (i != 0) inst.arcs.push_back(Arc{j, i, cap, cost});
  }
  inst.validate();
  return inst;
}

} // namespace

Instance generate_random(const GenConfig& cfg) {
  if (cfg.n_nodes < 2) throw std::invalid_argument("need at least two nodes");
  if (cfg.n_terminals < 1 || cfg.n_terminals >= cfg.n_nodes)
    throw std::invalid_argument("terminal count must be in [1, n_nodes)");
  if (cfg.target_arc_count < 1) throw std::invalid_argument("need a positive arc target");
  if (!(cfg.plane_size > 0.0)) throw std::invalid_argument("plane size must be positive");
  if (cfg.max_k < 0) throw std::invalid_argument("negative failure count");

  const int retry_budget = 256;
  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    std::uint64_t stream = cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt);
    Instance inst = attempt_instance(cfg, stream);
    AugmentedInstance aug = augment_with_sink(inst);
    std::vector<char> all = full_selection(aug);
    std::vector<char> none(aug.arc_count(), 0);
    if (check_feasibility(aug, all, none, cfg.max_k).feasible) return inst;
  }
  throw std::runtime_error("no instance surviving " + std::to_string(cfg.max_k) +
                           " failures in " + std::to_string(retry_budget) +
                           " attempts; raise the arc target or lower max_k");
}

Instance generate_3partition_graph(const ThreePartitionInstance& tp) {
  if (tp.m < 1) throw std::invalid_argument("need at least one group");
  if (tp.bound < 1) throw std::invalid_argument("target sum must be positive");
  if (static_cast<int>(tp.demand.size()) != 3 * tp.m)
    throw std::invalid_argument("need exactly 3m demands");
  long long total = 0;
  for (int d : tp.demand) {
    if (4 * d <= tp.bound || 2 * d >= tp.bound)
      throw std::invalid_argument("demand " + std::to_string(d) +
                                  " outside (B/4, B/2)");
    total += d;
  }
  if (total != static_cast<long long>(tp.m) * tp.bound)
    throw std::invalid_argument("demands must sum to m*B");

  Instance inst;
  inst.root = 0;
  const int m = tp.m;
  const int items = 3 * m;
  const int n_terminals = m + m * tp.bound; // every non-root node
  const double cost = 1.0;

  inst.nodes.push_back(0);
  for (int j = 1; j <= m; ++j) {
    inst.nodes.push_back(j);
    inst.arcs.push_back(Arc{0, j, n_terminals, cost});
  }
  for (int i = 1; i <= items; ++i) inst.nodes.push_back(m + i);
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= items; ++i) {
      inst.arcs.push_back(Arc{j, m + i, n_terminals, cost});
      inst.arcs.push_back(Arc{m + i, j, n_terminals, cost});
    }
  NodeId next = m + items + 1;
  for (int i = 1; i <= items; ++i) {
    NodeId prev = m + i;
    for (int step = 1; step < tp.demand[i - 1]; ++step) {
      inst.nodes.push_back(next);
      inst.arcs.push_back(Arc{prev, next, n_terminals, cost});
      inst.arcs.push_back(Arc{next, prev, n_terminals, cost});
      prev = next;
      ++next;
    }
  }
  inst.terminals.assign(inst.nodes.begin() + 1, inst.nodes.end());
  std::sort(inst.terminals.begin(), inst.terminals.end());
  inst.validate();
  return inst;
}

} // namespace rcsn
