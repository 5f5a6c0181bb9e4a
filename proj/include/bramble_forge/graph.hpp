#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bramble_forge/errors.hpp"

namespace bramble_forge {

/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<int>;
using Edge = std::pair<int, int>;

/// Sorts and deduplicates in place; returns the argument for chaining.
VertexSet normalize(VertexSet s);

/// Undirected simple graph on vertices 0..n-1. Immutable once built.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  /// Throws InvalidArgument on self-loops, out-of-range endpoints or
  /// duplicate edges.
  Graph(int n, std::span<const Edge> edges);

  /// Like the constructor but drops loops and repeated edges instead of
  /// throwing (used to flatten multigraphs).
  static Graph simplified(int n, std::span<const Edge> edges);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  std::size_t num_edges() const { return num_edges_; }
  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool has_edge(int u, int v) const;
  /// Canonical edge list: u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;
  std::size_t num_edges_ = 0;
};

/// Vertex sequence; consecutive vertices adjacent, no repeats.
struct Path {
  std::vector<int> vertices;

  int front() const { return vertices.front(); }
  int back() const { return vertices.back(); }
  std::size_t size() const { return vertices.size(); }
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Vertex sequence with repeats allowed; a closed walk returns to (or next
/// to) its first vertex.
struct Walk {
  std::vector<int> vertices;
  bool closed = false;
  friend bool operator==(const Walk&, const Walk&) = default;
};

/// Model of a branch graph H as a subdivision inside a host graph.
struct SubdivisionModel {
  std::vector<int> vertex_map;           // branch vertex -> host vertex
  std::map<Edge, Path> edge_map;         // branch edge (u<v) -> host path from vertex_map[u] to vertex_map[v]
};

struct InducedSubgraph {
  Graph graph;
  std::vector<int> to_host;    // local -> host
  std::vector<int> to_local;   // host -> local, -1 when absent
};

std::vector<VertexSet> connected_components(const Graph& g);
InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s);
/// True iff s is nonempty and g[s] is connected.
bool is_connected_subset(const Graph& g, const VertexSet& s);
bool is_connected(const Graph& g);

Verdict validate_path(const Graph& g, const Path& p);
Verdict validate_walk(const Graph& g, const Walk& w);
Verdict is_subdivision_model(const Graph& host, const Graph& branch, const SubdivisionModel& m);

/// Host graph obtained by subdividing every edge of `branch` `times` times,
/// together with the corresponding model. Branch vertex v keeps index v.
std::pair<Graph, SubdivisionModel> subdivide(const Graph& branch, int times);

// Generators. grid(a, b) puts vertex (i, j) at index i*b + j.
Graph grid(int rows, int cols);
Graph clique(int n);
Graph cycle(int n);
Graph path_graph(int n);
Graph star(int leaves);
Graph random_regular(int n, int d, std::uint64_t seed, int max_retries = 1000);
Graph random_gnp(int n, double p, std::uint64_t seed);
Graph random_tree(int n, std::uint64_t seed);

struct GenerateParams {
  int a = 0;
  int b = 0;
  int n = 0;
  int d = 0;
  double p = 0.0;
};

/// Dispatch by kind: "grid"(a,b), "clique"(n), "cycle"(n), "path"(n),
/// "star"(n leaves), "random_regular"(n,d), "gnp"(n,p), "tree"(n).
Graph generate(const std::string& kind, const GenerateParams& params, std::uint64_t seed);

}  // namespace bramble_forge
