#include "rcsn/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace rcsn {

namespace {

// Shortest-augmenting-path max flow: BFS level graph, then DFS blocking flow.
struct Dinic {
  const AugmentedInstance &aug;
  std::vector<long long> residual; // forward residual per arc; flow = cap - residual
  std::vector<int> level, iter_out, iter_in;
  int source, target;

  Dinic(const AugmentedInstance &a, std::span<const int> cap, int s, int t)
      : aug(a), source(s), target(t) {
    if (static_cast<int>(cap.size()) != aug.arc_count())
      throw std::invalid_argument("capacity vector size mismatch");
    residual.assign(cap.begin(), cap.end());
    level.assign(aug.node_count(), -1);
    iter_out.assign(aug.node_count(), 0);
    iter_in.assign(aug.node_count(), 0);
  }

  long long flow_on(int a, std::span<const int> cap) const {
    return cap[a] - residual[a];
  }

  bool bfs(std::span<const int> cap) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[source] = 0;
    q.push(source);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : aug.out_arcs[v]) {
        int w = aug.head_index[a];
        if (residual[a] > 0 && level[w] < 0) {
          level[w] = level[v] + 1;
          q.push(w);
        }
      }
      for (int a : aug.in_arcs[v]) {
        int w = aug.tail_index[a];
        if (flow_on(a, cap) > 0 && level[w] < 0) {
          level[w] = level[v] + 1;
          q.push(w);
        }
      }
    }
    return level[target] >= 0;
  }

  long long dfs(int v, long long limit, std::span<const int> cap) {
    if (v == target) return limit;
    for (int &i = iter_out[v]; i < static_cast<int>(aug.out_arcs[v].size()); ++i) {
      int a = aug.out_arcs[v][i];
      int w = aug.head_index[a];
      if (residual[a] > 0 && level[w] == level[v] + 1) {
        long long d = dfs(w, std::min<long long>(limit, residual[a]), cap);
        if (d > 0) {
          residual[a] -= d;
          return d;
        }
      }
    }
    for (int &i = iter_in[v]; i < static_cast<int>(aug.in_arcs[v].size()); ++i) {
      int a = aug.in_arcs[v][i];
      int w = aug.tail_index[a];
      if (flow_on(a, cap) > 0 && level[w] == level[v] + 1) {
        long long d = dfs(w, std::min(limit, flow_on(a, cap)), cap);
        if (d > 0) {
          residual[a] += d;
          return d;
        }
      }
    }
    level[v] = -1;
    return 0;
  }

  long long run(std::span<const int> cap) {
    long long total = 0;
    while (bfs(cap)) {
      std::fill(iter_out.begin(), iter_out.end(), 0);
      std::fill(iter_in.begin(), iter_in.end(), 0);
      while (long long d = dfs(source, std::numeric_limits<long long>::max(), cap))
        total += d;
    }
    return total;
  }
};

FlowAssignment run_flow(const AugmentedInstance &aug, std::span<const int> cap,
                        int source_idx, int target_idx) {
  FlowAssignment out;
  out.flow.assign(aug.arc_count(), 0);
  if (source_idx == target_idx) return out;
  Dinic d(aug, cap, source_idx, target_idx);
  out.value = d.run(cap);
  for (int a = 0; a < aug.arc_count(); ++a) out.flow[a] = cap[a] - d.residual[a];
  return out;
}

} // namespace

FlowAssignment max_flow(const AugmentedInstance &aug, std::span<const int> cap) {
  return run_flow(aug, cap, aug.root_index, aug.sink_index);
}

FlowAssignment max_flow_to(const AugmentedInstance &aug, std::span<const int> cap,
                           NodeId target) {
  return run_flow(aug, cap, aug.root_index, aug.index_of(target));
}

CutCertificate min_cut(const AugmentedInstance &aug, std::span<const int> cap) {
  FlowAssignment f = max_flow(aug, cap);

  // Residual reachability from the root fixes the near side of the cut.
  std::vector<char> reach(aug.node_count(), 0);
  std::queue<int> q;
  reach[aug.root_index] = 1;
  q.push(aug.root_index);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int a : aug.out_arcs[v]) {
      int w = aug.head_index[a];
      if (!reach[w] && cap[a] - f.flow[a] > 0) {
        reach[w] = 1;
        q.push(w);
      }
    }
    for (int a : aug.in_arcs[v]) {
      int w = aug.tail_index[a];
      if (!reach[w] && f.flow[a] > 0) {
        reach[w] = 1;
        q.push(w);
      }
    }
  }
  if (reach[aug.sink_index]) throw std::logic_error("sink reachable after max flow");

  CutCertificate cert;
  for (int i = 0; i < aug.node_count(); ++i)
    if (reach[i]) cert.side_root.push_back(aug.node_ids[i]);
  for (int a = 0; a < aug.arc_count(); ++a) {
    if (reach[aug.tail_index[a]] && !reach[aug.head_index[a]]) {
      cert.cutset.push_back(a);
      cert.residual_capacity += cap[a];
    }
  }
  if (cert.residual_capacity != f.value)
    throw std::logic_error("max-flow / min-cut mismatch");
  return cert;
}

} // namespace rcsn
