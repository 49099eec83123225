// Max flow on a bipartite graph with node capacities. Node capacities become
// edge capacities through node splitting; augmentation is BFS shortest-path
// in deterministic adjacency order.
#pragma once

#include <queue>

#include "infoprice/common.hpp"

namespace infoprice {

struct BipartiteFlowResult {
  double total = 0.0;
  Mat flow;                         // left x right
  Vec left_out, right_in;           // realized throughput per node
  std::vector<bool> right_saturated;
};

class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1) {}

  void add_edge(int u, int v, double cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0.0});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }

  double run(int s, int t) {
    double total = 0.0;
    for (;;) {
      std::vector<int> pre(head_.size(), -1);
      std::queue<int> q;
      q.push(s);
      std::vector<bool> seen(head_.size(), false);
      seen[s] = true;
      while (!q.empty() && !seen[t]) {
        int u = q.front();
        q.pop();
        for (int e = head_[u]; e >= 0; e = edges_[e].next) {
          int v = edges_[e].to;
          if (!seen[v] && edges_[e].cap > kEps) {
            seen[v] = true;
            pre[v] = e;
            q.push(v);
          }
        }
      }
      if (!seen[t]) break;
      double push = kInf;
      for (int v = t; v != s; v = edges_[pre[v] ^ 1].to)
        push = std::min(push, edges_[pre[v]].cap);
      for (int v = t; v != s; v = edges_[pre[v] ^ 1].to) {
        edges_[pre[v]].cap -= push;
        edges_[pre[v] ^ 1].cap += push;
      }
      total += push;
    }
    return total;
  }

  double back_flow(int edge_id) const { return edges_[2 * edge_id + 1].cap; }

 private:
  static constexpr double kEps = 1e-12;
  struct Edge { int to, next; double cap; };
  std::vector<Edge> edges_;
  std::vector<int> head_;
};

// edges: (left, right) adjacency pairs. Capacities bound each node's total
// throughput.
inline BipartiteFlowResult bipartite_node_capacitated_flow(
    const Vec& left_cap, const Vec& right_cap,
    const std::vector<std::pair<int, int>>& edges) {
  const int nl = static_cast<int>(left_cap.size());
  const int nr = static_cast<int>(right_cap.size());
  // nodes: source, left-in/out pairs, right-in/out pairs, sink
  const int src = 0, snk = 1 + 2 * nl + 2 * nr;
  auto lin = [&](int i) { return 1 + 2 * i; };
  auto lout = [&](int i) { return 2 + 2 * i; };
  auto rin = [&](int j) { return 1 + 2 * nl + 2 * j; };
  auto rout = [&](int j) { return 2 + 2 * nl + 2 * j; };
  MaxFlow mf(snk + 1);
  int id = 0;
  std::vector<int> split_l(nl), split_r(nr), cross(edges.size());
  for (int i = 0; i < nl; ++i) {
    mf.add_edge(src, lin(i), kInf);
    ++id;
    split_l[i] = id;
    mf.add_edge(lin(i), lout(i), left_cap[i]);
    ++id;
  }
  for (int j = 0; j < nr; ++j) {
    split_r[j] = id;
    mf.add_edge(rin(j), rout(j), right_cap[j]);
    ++id;
    mf.add_edge(rout(j), snk, kInf);
    ++id;
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    cross[e] = id;
    mf.add_edge(lout(edges[e].first), rin(edges[e].second), kInf);
    ++id;
  }
  BipartiteFlowResult res;
  res.total = mf.run(src, snk);
  res.flow.assign(nl, Vec(nr, 0.0));
  res.left_out.assign(nl, 0.0);
  res.right_in.assign(nr, 0.0);
  for (size_t e = 0; e < edges.size(); ++e) {
    double f = mf.back_flow(cross[e]);
    res.flow[edges[e].first][edges[e].second] = f;
    res.left_out[edges[e].first] += f;
    res.right_in[edges[e].second] += f;
  }
  res.right_saturated.assign(nr, false);
  for (int j = 0; j < nr; ++j)
    res.right_saturated[j] =
        right_cap[j] > 0.0 && res.right_in[j] >= right_cap[j] - 1e-9 * (1 + right_cap[j]);
  return res;
}

}  // namespace infoprice
