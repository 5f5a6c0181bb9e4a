#include "bramble_forge/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "bramble_forge/random.hpp"

namespace bramble_forge {

VertexSet normalize(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

Graph::Graph(int n) {
  if (n < 0) throw InvalidArgument("negative vertex count");
  adjacency_.resize(n);
}

Graph::Graph(int n, std::span<const Edge> edges) : Graph(n) {
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range for n=" + std::to_string(n));
    }
    if (u == v) throw InvalidArgument("self-loop at " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& nb : adjacency_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw InvalidArgument("duplicate edge");
    }
  }
  num_edges_ = edges.size();
}

Graph Graph::simplified(int n, std::span<const Edge> edges) {
  std::set<Edge> unique;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    unique.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<Edge> list(unique.begin(), unique.end());
  return Graph(n, list);
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= num_vertices()) return false;
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (int u = 0; u < num_vertices(); ++u) {
    for (int v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<VertexSet> connected_components(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> label(n, -1);
  std::vector<VertexSet> parts;
  for (int s = 0; s < n; ++s) {
    if (label[s] != -1) continue;
    VertexSet part{s};
    label[s] = static_cast<int>(parts.size());
    for (std::size_t head = 0; head < part.size(); ++head) {
      for (int w : g.neighbors(part[head])) {
        if (label[w] == -1) {
          label[w] = label[s];
          part.push_back(w);
        }
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  InducedSubgraph out;
  out.to_host = normalize(s);
  out.to_local.assign(g.num_vertices(), -1);
  for (std::size_t i = 0; i < out.to_host.size(); ++i) out.to_local[out.to_host[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < out.to_host.size(); ++i) {
    for (int w : g.neighbors(out.to_host[i])) {
      const int j = out.to_local[w];
      if (j > static_cast<int>(i)) edges.emplace_back(static_cast<int>(i), j);
    }
  }
  out.graph = Graph(static_cast<int>(out.to_host.size()), edges);
  return out;
}

bool is_connected_subset(const Graph& g, const VertexSet& s) {
  if (s.empty()) return false;
  std::vector<char> inside(g.num_vertices(), 0), seen(g.num_vertices(), 0);
  for (int v : s) inside[v] = 1;
  std::vector<int> stack{s.front()};
  seen[s.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (inside[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  std::size_t distinct = 0;
  for (int v = 0; v < g.num_vertices(); ++v) distinct += inside[v];
  return reached == distinct;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

Verdict validate_path(const Graph& g, const Path& p) {
  if (p.vertices.empty()) return Verdict::fail("empty path");
  std::vector<char> seen(g.num_vertices(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int v = p.vertices[i];
    if (v < 0 || v >= g.num_vertices()) return Verdict::fail("path vertex out of range");
    if (seen[v]) return Verdict::fail("path repeats vertex " + std::to_string(v));
    seen[v] = 1;
    if (i > 0 && !g.has_edge(p.vertices[i - 1], v)) {
      return Verdict::fail("path step " + std::to_string(p.vertices[i - 1]) + "-" + std::to_string(v) +
                           " is not an edge");
    }
  }
  return Verdict::pass();
}

Verdict validate_walk(const Graph& g, const Walk& w) {
  if (w.vertices.empty()) return Verdict::fail("empty walk");
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    const int v = w.vertices[i];
    if (v < 0 || v >= g.num_vertices()) return Verdict::fail("walk vertex out of range");
    if (i > 0 && !g.has_edge(w.vertices[i - 1], v)) {
      return Verdict::fail("walk step " + std::to_string(w.vertices[i - 1]) + "-" + std::to_string(v) +
                           " is not an edge");
    }
  }
  if (w.closed) {
    const int a = w.vertices.front(), b = w.vertices.back();
    if (a != b && !g.has_edge(a, b)) return Verdict::fail("closed walk does not return to its start");
  }
  return Verdict::pass();
}

Verdict is_subdivision_model(const Graph& host, const Graph& branch, const SubdivisionModel& m) {
  const int nb = branch.num_vertices();
  if (static_cast<int>(m.vertex_map.size()) != nb) return Verdict::fail("vertex map has wrong size");
  // owner[x]: -2 free, -1 branch vertex image, >= 0 interior of edge path #owner
  std::vector<int> owner(host.num_vertices(), -2);
  for (int v = 0; v < nb; ++v) {
    const int x = m.vertex_map[v];
    if (x < 0 || x >= host.num_vertices()) return Verdict::fail("vertex image out of range");
    if (owner[x] != -2) return Verdict::fail("vertex map not injective at host vertex " + std::to_string(x));
    owner[x] = -1;
  }
  const auto branch_edges = branch.edges();
  if (m.edge_map.size() != branch_edges.size()) return Verdict::fail("edge map does not cover branch edges");
  int index = 0;
  for (const auto& e : branch_edges) {
    auto it = m.edge_map.find(e);
    if (it == m.edge_map.end()) {
      return Verdict::fail("branch edge " + std::to_string(e.first) + "-" + std::to_string(e.second) + " unmapped");
    }
    const Path& p = it->second;
    if (auto v = validate_path(host, p); !v) return v;
    const int s = m.vertex_map[e.first], t = m.vertex_map[e.second];
    if (!((p.front() == s && p.back() == t) || (p.front() == t && p.back() == s)) || p.size() < 2) {
      return Verdict::fail("path for branch edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
                           " has wrong endpoints");
    }
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      const int x = p.vertices[i];
      if (owner[x] != -2) {
        return Verdict::fail("edge paths not internally disjoint at host vertex " + std::to_string(x));
      }
      owner[x] = index;
    }
    ++index;
  }
  return Verdict::pass();
}

std::pair<Graph, SubdivisionModel> subdivide(const Graph& branch, int times) {
  if (times < 0) throw InvalidArgument("negative subdivision count");
  const int nb = branch.num_vertices();
  int next = nb;
  std::vector<Edge> edges;
  SubdivisionModel m;
  m.vertex_map.resize(nb);
  for (int v = 0; v < nb; ++v) m.vertex_map[v] = v;
  for (auto [u, v] : branch.edges()) {
    Path p{{u}};
    for (int i = 0; i < times; ++i) p.vertices.push_back(next++);
    p.vertices.push_back(v);
    for (std::size_t i = 1; i < p.size(); ++i) edges.emplace_back(p.vertices[i - 1], p.vertices[i]);
    m.edge_map.emplace(Edge{u, v}, std::move(p));
  }
  return {Graph(next, edges), std::move(m)};
}

Graph grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("grid dimensions must be positive");
  std::vector<Edge> edges;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int v = i * cols + j;
      if (j + 1 < cols) edges.emplace_back(v, v + 1);
      if (i + 1 < rows) edges.emplace_back(v, v + cols);
    }
  }
  return Graph(rows * cols, edges);
}

Graph clique(int n) {
  if (n < 1) throw InvalidArgument("clique needs n >= 1");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, edges);
}

Graph cycle(int n) {
  if (n < 3) throw InvalidArgument("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(std::min(v, (v + 1) % n), std::max(v, (v + 1) % n));
  return Graph(n, edges);
}

Graph path_graph(int n) {
  if (n < 1) throw InvalidArgument("path needs n >= 1");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

Graph star(int leaves) {
  if (leaves < 0) throw InvalidArgument("negative leaf count");
  std::vector<Edge> edges;
  for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, edges);
}

Graph random_regular(int n, int d, std::uint64_t seed, int max_retries) {
  if (n < 1 || d < 0 || d >= n || (static_cast<long>(n) * d) % 2 != 0) {
    throw InvalidArgument("random_regular needs 0 <= d < n and n*d even");
  }
  Rng rng(splitmix64(seed));
  std::vector<int> points;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    points.clear();
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) points.push_back(v);
    shuffle(points, rng);
    std::set<Edge> seen;
    bool ok = true;
    for (std::size_t i = 0; i < points.size(); i += 2) {
      const int u = std::min(points[i], points[i + 1]);
      const int v = std::max(points[i], points[i + 1]);
      if (u == v || !seen.insert({u, v}).second) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<Edge> edges(seen.begin(), seen.end());
      return Graph(n, edges);
    }
  }
  throw Error("random_regular: pairing model rejected " + std::to_string(max_retries) + " times");
}

Graph random_gnp(int n, double p, std::uint64_t seed) {
  if (n < 0 || p < 0.0 || p > 1.0) throw InvalidArgument("gnp needs n >= 0 and p in [0,1]");
  Rng rng(splitmix64(seed));
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform_real(rng) < p) edges.emplace_back(u, v);
  return Graph(n, edges);
}

Graph random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("tree needs n >= 1");
  Rng rng(splitmix64(seed));
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(static_cast<int>(uniform_index(rng, v)), v);
  return Graph(n, edges);
}

Graph generate(const std::string& kind, const GenerateParams& params, std::uint64_t seed) {
  if (kind == "grid") return grid(params.a, params.b);
  if (kind == "clique") return clique(params.n);
  if (kind == "cycle") return cycle(params.n);
  if (kind == "path") return path_graph(params.n);
  if (kind == "star") return star(params.n);
  if (kind == "random_regular") return random_regular(params.n, params.d, seed);
  if (kind == "gnp") return random_gnp(params.n, params.p, seed);
  if (kind == "tree") return random_tree(params.n, seed);
  throw InvalidArgument("unknown graph kind '" + kind + "'");
}

}  // namespace bramble_forge
