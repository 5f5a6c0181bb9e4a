#pragma once

#include <algorithm>
#include <limits>
#include <vector>

namespace bramble_forge::detail {

// Dinic's algorithm on an integer-capacity directed network.
class MaxFlow {
 public:
  struct Arc {
    int to;
    int cap;
    int rev;
  };

  explicit MaxFlow(int nodes) : adj_(nodes), level_(nodes), it_(nodes) {}

  int add_arc(int from, int to, int cap) {
    adj_[from].push_back({to, cap, static_cast<int>(adj_[to].size())});
    adj_[to].push_back({from, 0, static_cast<int>(adj_[from].size()) - 1});
    return static_cast<int>(adj_[from].size()) - 1;
  }

  int run(int source, int sink, int limit = std::numeric_limits<int>::max()) {
    int flow = 0;
    while (flow < limit && bfs(source, sink)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (flow < limit) {
        const int pushed = dfs(source, sink, limit - flow);
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  std::vector<Arc>& arcs(int node) { return adj_[node]; }
  /// Flow currently on arc `index` out of `node` (original capacity minus residual).
  int flow_on(int node, int index) const {
    const Arc& a = adj_[node][index];
    return adj_[a.to][a.rev].cap;
  }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (const Arc& a : adj_[v]) {
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          queue.push_back(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int v, int t, int pushed) {
    if (v == t) return pushed;
    for (int& i = it_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      Arc& a = adj_[v][i];
      if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
      const int got = dfs(a.to, t, std::min(pushed, a.cap));
      if (got > 0) {
        a.cap -= got;
        adj_[a.to][a.rev].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<int> it_;
};

}  // namespace bramble_forge::detail
