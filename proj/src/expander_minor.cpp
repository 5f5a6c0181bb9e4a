#include "bramble_forge/expander_minor.hpp"

#include <algorithm>
#include <cmath>

#include "bramble_forge/random.hpp"

namespace bramble_forge {

Verdict verify_minor_model(const Graph& host, const MinorModel& m) {
  const int n = host.num_vertices();
  std::vector<int> owner(n, -1);
  for (int a = 0; a < m.size(); ++a) {
    const auto& s = m.branch_sets[a];
    for (int v : s) {
      if (v < 0 || v >= n) return Verdict::fail("branch set " + std::to_string(a) + " has a vertex out of range");
      if (owner[v] != -1) {
        return Verdict::fail("branch sets " + std::to_string(owner[v]) + " and " + std::to_string(a) + " share vertex " +
                             std::to_string(v));
      }
      owner[v] = a;
    }
    if (!is_connected_subset(host, s)) return Verdict::fail("branch set " + std::to_string(a) + " is not connected");
  }
  const int t = m.size();
  std::vector<char> adjacent(static_cast<std::size_t>(t) * t, 0);
  for (int v = 0; v < n; ++v) {
    if (owner[v] < 0) continue;
    for (int w : host.neighbors(v))
      if (owner[w] >= 0 && owner[w] != owner[v]) adjacent[owner[v] * t + owner[w]] = 1;
  }
  for (int a = 0; a < t; ++a)
    for (int b = a + 1; b < t; ++b)
      if (!adjacent[a * t + b]) {
        return Verdict::fail("branch sets " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
      }
  return Verdict::pass();
}

namespace {

class Attempt {
 public:
  Attempt(const Graph& g, const VertexSet& domain, Rng& rng) : g_(g), domain_(domain), rng_(rng) {}

  MinorModel run(int t, int repair_steps) {
    partition(t);
    repair(repair_steps);
    return contract();
  }

 private:
  void partition(int t) {
    t_ = t;
    part_.assign(g_.num_vertices(), -1);
    std::vector<int> pool = domain_;
    shuffle(pool, rng_);
    std::vector<std::vector<int>> frontier(t);
    for (int a = 0; a < t; ++a) {
      part_[pool[a]] = a;
      for (int w : g_.neighbors(pool[a])) frontier[a].push_back(w);
    }
    bool grew = true;
    while (grew) {
      grew = false;
      for (int a = 0; a < t; ++a) {
        auto& f = frontier[a];
        while (!f.empty()) {
          const std::size_t i = uniform_index(rng_, f.size());
          const int v = f[i];
          f[i] = f.back();
          f.pop_back();
          if (part_[v] != -1) continue;
          part_[v] = a;
          for (int w : g_.neighbors(v))
            if (part_[w] == -1) f.push_back(w);
          grew = true;
          break;
        }
      }
    }
  }

  std::vector<int> edge_counts() const {
    std::vector<int> cnt(static_cast<std::size_t>(t_) * t_, 0);
    for (int v : domain_) {
      if (part_[v] < 0) continue;
      for (int w : g_.neighbors(v))
        if (part_[w] >= 0 && part_[w] != part_[v]) ++cnt[part_[v] * t_ + part_[w]];
    }
    return cnt;
  }

  static int missing(const std::vector<int>& cnt, int t) {
    int m = 0;
    for (int a = 0; a < t; ++a)
      for (int b = a + 1; b < t; ++b) m += cnt[a * t + b] == 0;
    return m;
  }

  bool stays_connected_without(int c, int v) const {
    VertexSet rest;
    for (int u : domain_)
      if (part_[u] == c && u != v) rest.push_back(u);
    return is_connected_subset(g_, rest);
  }

  // Local search: move a boundary vertex into an adjacent part whenever it
  // strictly reduces the number of non-adjacent part pairs.
  void repair(int steps) {
    std::vector<int> cnt = edge_counts();
    std::vector<int> size(t_, 0);
    for (int v : domain_)
      if (part_[v] >= 0) ++size[part_[v]];
    int current = missing(cnt, t_);
    std::vector<int> order = domain_;
    for (int step = 0; step < steps && current > 0; ++step) {
      shuffle(order, rng_);
      int best_gain = 0, best_v = -1, best_to = -1;
      std::vector<int> best_cnt;
      for (int v : order) {
        const int c = part_[v];
        if (c < 0 || size[c] <= 1) continue;
        std::vector<int> toward(t_, 0);
        for (int w : g_.neighbors(v))
          if (part_[w] >= 0) ++toward[part_[w]];
        for (int a = 0; a < t_; ++a) {
          if (a == c || toward[a] == 0) continue;
          std::vector<int> next = cnt;
          for (int x = 0; x < t_; ++x) {
            if (toward[x] == 0) continue;
            if (x != c) {
              next[c * t_ + x] -= toward[x];
              next[x * t_ + c] -= toward[x];
            }
            if (x != a) {
              next[a * t_ + x] += toward[x];
              next[x * t_ + a] += toward[x];
            }
          }
          const int gain = current - missing(next, t_);
          if (gain > best_gain && stays_connected_without(c, v)) {
            best_gain = gain;
            best_v = v;
            best_to = a;
            best_cnt = std::move(next);
          }
        }
      }
      if (best_v < 0) break;
      --size[part_[best_v]];
      ++size[best_to];
      part_[best_v] = best_to;
      cnt = std::move(best_cnt);
      current -= best_gain;
    }
  }

  // Greedily contract or drop quotient nodes until the quotient is complete.
  MinorModel contract() {
    std::vector<VertexSet> sets(t_);
    for (int v : domain_)
      if (part_[v] >= 0) sets[part_[v]].push_back(v);
    std::vector<std::vector<char>> adj(t_, std::vector<char>(t_, 0));
    const std::vector<int> cnt = edge_counts();
    for (int a = 0; a < t_; ++a)
      for (int b = 0; b < t_; ++b) adj[a][b] = a != b && cnt[a * t_ + b] > 0;
    std::vector<char> alive(t_, 1);
    auto missing_of = [&](int x) {
      int m = 0;
      for (int y = 0; y < t_; ++y) m += alive[y] && y != x && !adj[x][y];
      return m;
    };
    for (;;) {
      int worst = -1, worst_missing = 0, total_missing = 0;
      for (int x = 0; x < t_; ++x) {
        if (!alive[x]) continue;
        const int m = missing_of(x);
        total_missing += m;
        if (m > worst_missing) {
          worst_missing = m;
          worst = x;
        }
      }
      total_missing /= 2;
      if (worst < 0) break;
      // Option 1: drop worst.
      int best_after = total_missing - worst_missing, best_y = -1;
      // Option 2: contract worst into a neighbour y.
      for (int y = 0; y < t_; ++y) {
        if (!alive[y] || y == worst || !adj[worst][y]) continue;
        int after = 0;
        for (int p = 0; p < t_; ++p) {
          if (!alive[p] || p == worst) continue;
          for (int q = p + 1; q < t_; ++q) {
            if (!alive[q] || q == worst) continue;
            bool linked = adj[p][q];
            if (p == y) linked = linked || adj[worst][q];
            if (q == y) linked = linked || adj[worst][p];
            after += !linked;
          }
        }
        if (after <= best_after) {
          best_after = after;
          best_y = y;
        }
      }
      alive[worst] = 0;
      if (best_y >= 0) {
        sets[best_y].insert(sets[best_y].end(), sets[worst].begin(), sets[worst].end());
        for (int q = 0; q < t_; ++q) {
          if (adj[worst][q] && q != best_y) {
            adj[best_y][q] = adj[q][best_y] = 1;
          }
        }
      }
    }
    MinorModel out;
    for (int x = 0; x < t_; ++x)
      if (alive[x]) out.branch_sets.push_back(normalize(sets[x]));
    return out;
  }

  const Graph& g_;
  const VertexSet& domain_;
  Rng& rng_;
  int t_ = 0;
  std::vector<int> part_;
};

}  // namespace

MinorModel find_clique_minor(const Graph& host, int target_t, const MinorSearchOptions& opts, std::uint64_t seed) {
  MinorModel best;
  if (host.num_vertices() == 0 || target_t < 1) return best;

  auto comps = connected_components(host);
  const VertexSet domain = *std::max_element(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    return x.size() < y.size();
  });
  std::size_t edges = 0;
  for (int v : domain) edges += host.degree(v);
  edges /= 2;

  best.branch_sets = {{domain.front()}};
  if (edges > 0) {
    const int u = domain.front();
    best.branch_sets = {{u}, {host.neighbors(u).front()}};
  }
  // K_t needs t(t-1)/2 edges.
  const int ub = std::min(static_cast<int>(domain.size()),
                          static_cast<int>(std::floor((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(edges))) / 2.0)));

  for (int attempt = 0; attempt < opts.attempts && best.size() < std::min(ub, target_t); ++attempt) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(attempt));
    for (int t = ub; t > best.size(); --t) {
      MinorModel candidate = Attempt(host, domain, rng).run(t, opts.repair_steps);
      if (candidate.size() > best.size()) best = std::move(candidate);
      if (best.size() >= t) break;
    }
  }
  if (best.size() > target_t) best.branch_sets.resize(target_t);
  if (auto v = verify_minor_model(host, best); !v) throw Error("internal: clique minor search produced an invalid model: " + v.violation);
  return best;
}

}  // namespace bramble_forge
