#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the Graph type, and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "bramble_forge/concurrent_flow.hpp"
#include "bramble_forge/graph.hpp"

namespace oracle {

using bramble_forge::Graph;
using bramble_forge::VertexSet;

inline bool adjacent(const Graph& g, int u, int v) {
  for (int w : g.neighbors(u))
    if (w == v) return true;
  return false;
}

// Union-find components, each sorted, ordered by smallest member.
inline std::vector<VertexSet> components(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (adjacent(g, u, v)) parent[find(u)] = find(v);
  std::vector<VertexSet> out;
  std::vector<int> slot(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(v);
  }
  return out;
}

inline bool connected_set(const Graph& g, const VertexSet& s) {
  if (s.empty()) return false;
  std::set<int> seen{s.front()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (int u : s)
      if (!seen.count(u))
        for (int v : seen)
          if (adjacent(g, u, v)) {
            seen.insert(u);
            grew = true;
            break;
          }
  }
  return seen.size() == std::set<int>(s.begin(), s.end()).size();
}

inline bool touching(const Graph& g, const VertexSet& a, const VertexSet& b) {
  for (int u : a)
    for (int v : b)
      if (u == v || adjacent(g, u, v)) return true;
  return false;
}

inline bool is_bramble(const Graph& g, const std::vector<VertexSet>& elements) {
  for (const auto& e : elements)
    if (!connected_set(g, e)) return false;
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j)
      if (!touching(g, elements[i], elements[j])) return false;
  return true;
}

// Minimum hitting set by enumerating vertex subsets in order of size.
inline int min_hitting_set(int n, const std::vector<VertexSet>& elements) {
  if (elements.empty()) return 0;
  std::vector<std::uint32_t> masks;
  for (const auto& e : elements) {
    std::uint32_t m = 0;
    for (int v : e) m |= 1u << v;
    masks.push_back(m);
  }
  int best = n + 1;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    const int size = __builtin_popcount(s);
    if (size >= best) continue;
    bool hits = true;
    for (auto m : masks)
      if (!(m & s)) {
        hits = false;
        break;
      }
    if (hits) best = size;
  }
  return best;
}

// Every simple path from `from` to a vertex in `targets`, avoiding `blocked`.
inline void simple_paths(const Graph& g, int from, const std::vector<char>& targets, const std::vector<char>& blocked,
                         std::vector<std::vector<int>>& out) {
  std::vector<int> stack{from};
  std::vector<char> on(g.num_vertices(), 0);
  on[from] = 1;
  std::function<void(int)> go = [&](int v) {
    if (targets[v]) {
      out.push_back(stack);
      return;
    }
    for (int w : g.neighbors(v)) {
      if (on[w] || blocked[w]) continue;
      on[w] = 1;
      stack.push_back(w);
      go(w);
      stack.pop_back();
      on[w] = 0;
    }
  };
  go(from);
}

// Does an A-B linkage exist in g - forbidden? Paths start in A, end in B and
// avoid A and B internally; vertex-disjoint.
inline bool linkage_exists(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& forbidden) {
  const int n = g.num_vertices();
  std::vector<char> in_b(n, 0), blocked(n, 0);
  for (int v : b) in_b[v] = 1;
  for (int v : forbidden) blocked[v] = 1;
  for (int v : a) blocked[v] = 1;
  std::vector<std::vector<std::vector<int>>> options(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<char> targets = in_b;
    std::vector<char> blk = blocked;
    for (int v : b) blk[v] = 0;
    // Interior vertices may not be in A or B; targets stop the search at B.
    simple_paths(g, a[i], targets, blk, options[i]);
  }
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t)> pick = [&](std::size_t i) {
    if (i == a.size()) return true;
    for (const auto& p : options[i]) {
      bool ok = true;
      for (int v : p)
        if (used[v]) ok = false;
      if (!ok) continue;
      for (int v : p) used[v] = 1;
      if (pick(i + 1)) return true;
      for (int v : p) used[v] = 0;
    }
    return false;
  };
  return pick(0);
}

// Exact expansion by plain subset enumeration.
inline double expansion(const Graph& g) {
  const int n = g.num_vertices();
  double best = 1e300;
  for (std::uint32_t s = 1; s + 1 < (1u << n); ++s) {
    int cut = 0;
    for (auto [u, v] : g.edges()) cut += ((s >> u) & 1) != ((s >> v) & 1);
    const int k = __builtin_popcount(s);
    best = std::min(best, static_cast<double>(cut) / std::min(k, n - k));
  }
  return best;
}

// Hadwiger number: largest t such that K_t is a minor, by enumerating
// restricted-growth labellings (label 0 = deleted vertex, 1..t = branch set).
inline int hadwiger(const Graph& g) {
  const int n = g.num_vertices();
  if (n == 0) return 0;
  int best = 1;
  std::vector<int> label(n, 0);
  std::function<void(int, int)> go = [&](int v, int used) {
    if (v == n) {
      if (used <= best) return;
      std::vector<VertexSet> sets(used);
      for (int x = 0; x < n; ++x)
        if (label[x] > 0) sets[label[x] - 1].push_back(x);
      for (const auto& s : sets)
        if (!connected_set(g, s)) return;
      for (int a = 0; a < used; ++a)
        for (int b = a + 1; b < used; ++b)
          if (!touching(g, sets[a], sets[b])) return;
      best = used;
      return;
    }
    for (int l = 0; l <= used + 1; ++l) {
      label[v] = l;
      go(v + 1, std::max(used, l));
    }
  };
  go(0, 0);
  return best;
}

// Exact hit probability by summing path weights containing x.
inline double hit_probability(const bramble_forge::ConcurrentFlow& cf, int x) {
  double total = 0.0;
  for (const auto& fam : cf.families)
    for (const auto& wp : fam)
      if (std::count(wp.path.vertices.begin(), wp.path.vertices.end(), x)) total += wp.weight;
  const double m = static_cast<double>(cf.hubs.size());
  return total / (m * m);
}

// Probability that a closed walk of ell segments avoids x, by summing over
// every hub sequence: trace(M^ell) / |W|^ell with M[i][j] the weight of the
// (i, j) family avoiding x.
inline double miss_probability(const bramble_forge::ConcurrentFlow& cf, int ell, const VertexSet& x) {
  const std::size_t m = cf.hubs.size();
  std::vector<double> avoid(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (const auto& wp : cf.family(i, j)) {
        bool hit = false;
        for (int v : wp.path.vertices) hit = hit || std::count(x.begin(), x.end(), v);
        if (!hit) avoid[i * m + j] += wp.weight;
      }
  double total = 0.0;
  std::vector<std::size_t> seq(ell, 0);
  std::function<void(int)> go = [&](int pos) {
    if (pos == ell) {
      double p = 1.0;
      for (int s = 0; s < ell; ++s) p *= avoid[seq[s] * m + seq[(s + 1) % ell]];
      total += p;
      return;
    }
    for (std::size_t i = 0; i < m; ++i) {
      seq[pos] = i;
      go(pos + 1);
    }
  };
  go(0);
  return total / std::pow(static_cast<double>(m), ell);
}

}  // namespace oracle
