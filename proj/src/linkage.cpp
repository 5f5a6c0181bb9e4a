#include "bramble_forge/linkage.hpp"

#include <algorithm>

#include "max_flow.hpp"

namespace bramble_forge {
namespace {

// Vertex-split network: v_in = 2v, v_out = 2v + 1, source 2n, sink 2n + 1.
struct SplitNetwork {
  detail::MaxFlow flow;
  int source;
  int sink;

  SplitNetwork(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& forbidden)
      : flow(2 * g.num_vertices() + 2), source(2 * g.num_vertices()), sink(2 * g.num_vertices() + 1) {
    const int n = g.num_vertices();
    std::vector<char> blocked(n, 0);
    for (int v : forbidden) blocked[v] = 1;
    for (int v = 0; v < n; ++v) {
      if (blocked[v]) continue;
      flow.add_arc(2 * v, 2 * v + 1, 1);
      for (int w : g.neighbors(v)) {
        if (!blocked[w]) flow.add_arc(2 * v + 1, 2 * w, 1);
      }
    }
    for (int v : a) flow.add_arc(source, 2 * v, 1);
    for (int v : b) flow.add_arc(2 * v + 1, sink, 1);
  }
};

void check_sets(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& forbidden) {
  std::vector<char> tag(g.num_vertices(), 0);
  auto mark = [&](const VertexSet& s, char t) {
    for (int v : s) {
      if (v < 0 || v >= g.num_vertices()) throw InvalidArgument("vertex out of range in linkage request");
      if (tag[v] != 0) throw InvalidArgument("linkage endpoint sets and forbidden set must be disjoint");
      tag[v] = t;
    }
  };
  mark(a, 1);
  mark(b, 2);
  mark(forbidden, 3);
}

}  // namespace

Verdict validate_linkage(const Graph& g, const Linkage& l, const VertexSet& a, const VertexSet& b,
                         const VertexSet& forbidden) {
  if (a.size() != b.size() || l.paths.size() != a.size()) {
    return Verdict::fail("linkage size " + std::to_string(l.paths.size()) + ", expected " + std::to_string(a.size()));
  }
  const int n = g.num_vertices();
  std::vector<char> in_a(n, 0), in_b(n, 0), blocked(n, 0), used(n, 0);
  for (int v : a) in_a[v] = 1;
  for (int v : b) in_b[v] = 1;
  for (int v : forbidden) blocked[v] = 1;
  for (const Path& p : l.paths) {
    if (auto v = validate_path(g, p); !v) return v;
    if (!in_a[p.front()] || !in_b[p.back()]) return Verdict::fail("linkage path does not run from A to B");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int x = p.vertices[i];
      if (used[x]) return Verdict::fail("linkage paths share vertex " + std::to_string(x));
      used[x] = 1;
      if (blocked[x]) return Verdict::fail("linkage uses forbidden vertex " + std::to_string(x));
      const bool interior = i > 0 && i + 1 < p.size();
      if (interior && (in_a[x] || in_b[x])) {
        return Verdict::fail("linkage path passes through endpoint set at " + std::to_string(x));
      }
    }
  }
  return Verdict::pass();
}

int max_disjoint_paths(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& forbidden) {
  SplitNetwork net(g, a, b, forbidden);
  return net.flow.run(net.source, net.sink);
}

std::optional<Linkage> find_linkage(const Graph& g, const VertexSet& a_in, const VertexSet& b_in,
                                    const VertexSet& forbidden_in) {
  const VertexSet a = normalize(a_in), b = normalize(b_in), forbidden = normalize(forbidden_in);
  if (a.size() != b.size()) throw InvalidArgument("find_linkage needs |A| = |B|");
  check_sets(g, a, b, forbidden);
  SplitNetwork net(g, a, b, forbidden);
  const int target = static_cast<int>(a.size());
  if (net.flow.run(net.source, net.sink, target) < target) return std::nullopt;

  Linkage out;
  // Each vertex carries at most one unit, so following positive-flow arcs
  // from a_out reaches the sink along a simple path.
  std::vector<std::vector<char>> consumed(2 * g.num_vertices() + 2);
  for (int node = 0; node < static_cast<int>(consumed.size()); ++node) consumed[node].assign(net.flow.arcs(node).size(), 0);
  for (int start : a) {
    Path p{{start}};
    int node = 2 * start + 1;
    for (;;) {
      auto& arcs = net.flow.arcs(node);
      int next = -1;
      for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
        const int to = arcs[i].to;
        const bool forward = to == net.sink || (to % 2 == 0 && to != 2 * (node / 2));
        if (!forward || consumed[node][i] || net.flow.flow_on(node, i) <= 0) continue;
        consumed[node][i] = 1;
        next = to;
        break;
      }
      if (next < 0) throw Error("internal: broken flow decomposition");
      if (next == net.sink) break;
      p.vertices.push_back(next / 2);
      node = next + 1;
    }
    out.paths.push_back(std::move(p));
  }
  if (auto v = validate_linkage(g, out, a, b, forbidden); !v) throw Error("internal: invalid linkage: " + v.violation);
  return out;
}

namespace {

// Enumerates assignments of `x` to {unused, A, B} with |A| = |B| >= 1, where
// the first used element goes to A (linkages are symmetric). Stops at the
// first assignment for which `fails` returns true.
template <typename Fails>
WellLinkedResult enumerate_pairs(const VertexSet& x, Fails&& fails) {
  const int m = static_cast<int>(x.size());
  std::vector<int> role(m, 0);
  VertexSet a, b;
  WellLinkedResult result;
  auto rec = [&](auto&& self, int i, bool any_used) -> bool {
    if (i == m) {
      if (a.empty() || a.size() != b.size()) return false;
      if (fails(a, b)) {
        result.well_linked = false;
        result.violating_a = a;
        result.violating_b = b;
        return true;
      }
      return false;
    }
    const int remaining = m - i;
    const int diff = std::abs(static_cast<int>(a.size()) - static_cast<int>(b.size()));
    if (diff > remaining) return false;
    if (self(self, i + 1, any_used)) return true;
    a.push_back(x[i]);
    if (self(self, i + 1, true)) return true;
    a.pop_back();
    if (any_used) {
      b.push_back(x[i]);
      if (self(self, i + 1, true)) return true;
      b.pop_back();
    }
    return false;
  };
  rec(rec, 0, false);
  return result;
}

}  // namespace

WellLinkedResult is_well_linked(const Graph& g, const VertexSet& x_in, int budget) {
  const VertexSet x = normalize(x_in);
  if (static_cast<int>(x.size()) > budget) {
    throw BudgetExceeded("well-linkedness check: |X| = " + std::to_string(x.size()) + " exceeds budget " +
                             std::to_string(budget),
                         0, 0);
  }
  return enumerate_pairs(x, [&](const VertexSet& a, const VertexSet& b) {
    VertexSet rest;
    std::set_difference(x.begin(), x.end(), a.begin(), a.end(), std::back_inserter(rest));
    VertexSet forbidden;
    const VertexSet bs = normalize(b);
    std::set_difference(rest.begin(), rest.end(), bs.begin(), bs.end(), std::back_inserter(forbidden));
    return max_disjoint_paths(g, a, bs, forbidden) < static_cast<int>(a.size());
  });
}

WellLinkedResult is_linked_between(const Graph& g, const VertexSet& a_side_in, const VertexSet& b_side_in,
                                   int budget) {
  const VertexSet a_side = normalize(a_side_in), b_side = normalize(b_side_in);
  if (static_cast<int>(std::max(a_side.size(), b_side.size())) > budget) {
    throw BudgetExceeded("linkage property check exceeds budget " + std::to_string(budget), 0, 0);
  }
  WellLinkedResult result;
  const int ma = static_cast<int>(a_side.size()), mb = static_cast<int>(b_side.size());
  for (unsigned sa = 1; sa < (1u << ma); ++sa) {
    VertexSet a;
    for (int i = 0; i < ma; ++i)
      if (sa >> i & 1u) a.push_back(a_side[i]);
    for (unsigned sb = 1; sb < (1u << mb); ++sb) {
      if (static_cast<std::size_t>(__builtin_popcount(sb)) != a.size()) continue;
      VertexSet b;
      for (int i = 0; i < mb; ++i)
        if (sb >> i & 1u) b.push_back(b_side[i]);
      // Shared vertices are served by zero-length paths.
      VertexSet shared, a_only, b_only;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
      std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(a_only));
      std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(b_only));
      if (max_disjoint_paths(g, a_only, b_only, shared) < static_cast<int>(a_only.size())) {
        result.well_linked = false;
        result.violating_a = a;
        result.violating_b = b;
        return result;
      }
    }
  }
  return result;
}

}  // namespace bramble_forge
