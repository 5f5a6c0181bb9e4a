#include "bramble_forge/concurrent_flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "bramble_forge/random.hpp"

namespace bramble_forge {
namespace {

// Single-source shortest paths where a path costs the sum of its vertex
// lengths. Returns predecessor array; ties keep the first settled route.
std::vector<int> vertex_dijkstra(const Graph& g, const std::vector<double>& length, int source) {
  const int n = g.num_vertices();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = length[source];
  queue.emplace(dist[source], source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (int w : g.neighbors(v)) {
      const double nd = d + length[w];
      if (nd < dist[w]) {
        dist[w] = nd;
        pred[w] = v;
        queue.emplace(nd, w);
      }
    }
  }
  return pred;
}

Path trace(const std::vector<int>& pred, int source, int target) {
  Path p;
  for (int v = target; v != source; v = pred[v]) p.vertices.push_back(v);
  p.vertices.push_back(source);
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

}  // namespace

double effective_beta(double gamma, int k) {
  constexpr double floor = 1.0 / 9.0;
  if (k < 2) return floor;
  return std::max(floor, gamma / (k * std::log2(static_cast<double>(k))));
}

ConcurrentFlow solve_concurrent_flow(const Graph& g, const VertexSet& hubs_in, int k, const FlowOptions& opts,
                                     std::uint64_t seed) {
  const VertexSet hubs = normalize(hubs_in);
  if (hubs.empty()) throw InvalidArgument("concurrent flow needs at least one hub");
  if (opts.iterations < 1) throw InvalidArgument("concurrent flow needs at least one iteration");
  const int n = g.num_vertices();
  for (int v : hubs)
    if (v < 0 || v >= n) throw InvalidArgument("hub out of range");
  {
    std::vector<int> comp(n, -1);
    const auto parts = connected_components(g);
    for (std::size_t c = 0; c < parts.size(); ++c)
      for (int v : parts[c]) comp[v] = static_cast<int>(c);
    for (int v : hubs)
      if (comp[v] != comp[hubs.front()]) throw DisconnectedPair(hubs.front(), v);
  }

  const double eta = opts.eta > 0 ? opts.eta : std::max(1.0, std::log2(static_cast<double>(std::max(n, 2))));
  const std::size_t m = hubs.size();
  std::vector<std::map<Path, int>> counts(m * m);
  std::vector<double> load(n, 0.0), length(n, 1.0);

  for (int it = 0; it < opts.iterations; ++it) {
    const double peak = *std::max_element(load.begin(), load.end());
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(it));
    for (int x = 0; x < n; ++x) {
      const double base = peak > 0 ? std::exp(eta * load[x] / peak) : 1.0;
      length[x] = base * (1.0 + 1e-6 * uniform_real(rng));
    }
    // Loads are read from the previous barrier only.
    std::vector<double> round_load(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto pred = vertex_dijkstra(g, length, hubs[i]);
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        Path p = trace(pred, hubs[i], hubs[j]);
        for (int v : p.vertices) round_load[v] += 1.0;
        ++counts[i * m + j][std::move(p)];
      }
    }
    for (int x = 0; x < n; ++x) load[x] += round_load[x];
  }

  ConcurrentFlow cf;
  cf.num_vertices = n;
  cf.hubs = hubs;
  cf.value = 1.0;
  cf.families.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      auto& fam = cf.families[i * m + j];
      if (i == j) {
        fam.push_back({Path{{hubs[i]}}, 1.0});
        continue;
      }
      for (const auto& [p, c] : counts[i * m + j]) {
        fam.push_back({p, static_cast<double>(c) / opts.iterations});
      }
    }
  }
  cf.beta_eff = effective_beta(flow_congestion(cf).gamma, k);
  return cf;
}

FlowCongestion flow_congestion(const ConcurrentFlow& cf) {
  std::vector<long double> acc(cf.num_vertices, 0.0L);
  for (const auto& fam : cf.families)
    for (const auto& wp : fam)
      for (int v : wp.path.vertices) acc[v] += wp.weight;
  FlowCongestion out;
  out.throughput.assign(acc.begin(), acc.end());
  for (int x = 0; x < cf.num_vertices; ++x) {
    if (out.argmax < 0 || out.throughput[x] > out.gamma) {
      out.gamma = out.throughput[x];
      out.argmax = x;
    }
  }
  return out;
}

Verdict validate_flow(const Graph& g, const ConcurrentFlow& cf, double tolerance) {
  const std::size_t m = cf.hubs.size();
  if (cf.num_vertices != g.num_vertices()) return Verdict::fail("flow vertex count does not match graph");
  if (cf.families.size() != m * m) return Verdict::fail("flow needs |W|^2 families");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& fam = cf.family(i, j);
      const int u = cf.hubs[i], v = cf.hubs[j];
      const std::string tag = "family (" + std::to_string(u) + "," + std::to_string(v) + ")";
      if (i == j) {
        if (fam.size() != 1 || fam[0].path.size() != 1 || fam[0].path.front() != u ||
            std::abs(fam[0].weight - cf.value) > tolerance) {
          return Verdict::fail(tag + " must be the single zero-length path");
        }
        continue;
      }
      double total = 0.0;
      std::vector<const Path*> seen;
      for (const auto& wp : fam) {
        if (!(wp.weight > 0)) return Verdict::fail(tag + " has a non-positive weight");
        if (auto ok = validate_path(g, wp.path); !ok) return Verdict::fail(tag + ": " + ok.violation);
        if (wp.path.front() != u || wp.path.back() != v) return Verdict::fail(tag + " has a path with wrong endpoints");
        for (const Path* q : seen)
          if (*q == wp.path) return Verdict::fail(tag + " repeats a path");
        seen.push_back(&wp.path);
        total += wp.weight;
      }
      if (std::abs(total - cf.value) > tolerance) return Verdict::fail(tag + " does not carry the flow value");
    }
  }
  return Verdict::pass();
}

}  // namespace bramble_forge
