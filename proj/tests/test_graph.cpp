#include <algorithm>

#include "bramble_forge/graph.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bramble_forge;

TEST_CASE("graph constructor rejects loops, duplicates and bad endpoints") {
  const std::vector<Edge> loop{{1, 1}};
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  const std::vector<Edge> range{{0, 3}};
  CHECK_THROWS_AS(Graph(3, loop), InvalidArgument);
  CHECK_THROWS_AS(Graph(3, dup), InvalidArgument);
  CHECK_THROWS_AS(Graph(3, range), InvalidArgument);
  const Graph g = Graph::simplified(3, std::vector<Edge>{{0, 1}, {1, 0}, {2, 2}});
  CHECK(g.num_edges() == 1);
}

TEST_CASE("edges come out canonical") {
  const Graph g(4, std::vector<Edge>{{3, 2}, {1, 0}, {2, 0}});
  const std::vector<Edge> expected{{0, 1}, {0, 2}, {2, 3}};
  CHECK(g.edges() == expected);
}

TEST_CASE("connected components") {
  const Graph two(4, std::vector<Edge>{{0, 1}, {2, 3}});
  CHECK(connected_components(two) == std::vector<VertexSet>{{0, 1}, {2, 3}});
  CHECK(connected_components(clique(4)) == std::vector<VertexSet>{{0, 1, 2, 3}});

  // 3x3 grid with the centre's edges removed.
  std::vector<Edge> edges;
  for (auto e : grid(3, 3).edges())
    if (e.first != 4 && e.second != 4) edges.push_back(e);
  const Graph holed(9, edges);
  const auto comps = connected_components(holed);
  CHECK(comps == oracle::components(holed));
  CHECK(comps.size() == 2);
  CHECK(std::find(comps.begin(), comps.end(), VertexSet{4}) != comps.end());
}

TEST_CASE("components agree with the union-find oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Graph g = random_gnp(12, 0.12, seed);
    CHECK(connected_components(g) == oracle::components(g));
  }
}

TEST_CASE("induced subgraph") {
  const auto k3 = induced_subgraph(clique(4), {0, 1, 2});
  CHECK(k3.graph == clique(3));
  CHECK(k3.to_host == std::vector<int>{0, 1, 2});
  CHECK(k3.to_local[3] == -1);

  const auto row = induced_subgraph(grid(3, 3), {3, 4, 5});
  CHECK(row.graph == path_graph(3));

  const auto empty = induced_subgraph(grid(3, 3), {});
  CHECK(empty.graph.num_vertices() == 0);
}

TEST_CASE("induced subgraph on a union of components keeps those components") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = random_gnp(14, 0.1, seed);
    const auto comps = connected_components(g);
    VertexSet s;
    std::vector<VertexSet> chosen;
    for (std::size_t i = 0; i < comps.size(); i += 2) {
      s.insert(s.end(), comps[i].begin(), comps[i].end());
      chosen.push_back(comps[i]);
    }
    s = normalize(s);
    const auto sub = induced_subgraph(g, s);
    std::vector<VertexSet> mapped;
    for (const auto& c : connected_components(sub.graph)) {
      VertexSet host;
      for (int v : c) host.push_back(sub.to_host[v]);
      mapped.push_back(normalize(host));
    }
    std::sort(mapped.begin(), mapped.end());
    std::sort(chosen.begin(), chosen.end());
    CHECK(mapped == chosen);
  }
}

TEST_CASE("generators") {
  const Graph g = grid(3, 3);
  CHECK(g.num_vertices() == 9);
  CHECK(g.num_edges() == 12);
  CHECK(clique(5).num_edges() == 10);
  CHECK(cycle(6).num_edges() == 6);
  CHECK(star(4).degree(0) == 4);

  const Graph rect = grid(3, 5);
  CHECK(rect.num_edges() == static_cast<std::size_t>(2 * 15 - 3 - 5));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 5; ++b)
          CHECK(rect.has_edge(i * 5 + j, a * 5 + b) == (std::abs(i - a) + std::abs(j - b) == 1));

  const Graph r = random_regular(16, 3, 1);
  for (int v = 0; v < 16; ++v) CHECK(r.degree(v) == 3);
  CHECK(r == random_regular(16, 3, 1));
  CHECK_THROWS_AS(random_regular(5, 3, 1), InvalidArgument);

  const Graph t = random_tree(20, 4);
  CHECK(t.num_edges() == 19);
  CHECK(is_connected(t));
  CHECK(random_gnp(10, 0.3, 9) == random_gnp(10, 0.3, 9));
  CHECK(generate("grid", {.a = 2, .b = 3}, 0) == grid(2, 3));
  CHECK_THROWS_AS(generate("nonsense", {}, 0), InvalidArgument);
}

TEST_CASE("paths and walks") {
  const Graph g = cycle(5);
  CHECK(validate_path(g, Path{{0, 1, 2}}));
  CHECK(validate_path(g, Path{{3}}));
  CHECK_FALSE(validate_path(g, Path{{0, 2}}));
  CHECK_FALSE(validate_path(g, Path{{0, 1, 0}}));
  CHECK(validate_walk(g, Walk{{0, 1, 0, 4}, true}));
  CHECK_FALSE(validate_walk(g, Walk{{0, 1, 2}, true}));
  CHECK(validate_walk(g, Walk{{0, 1, 2}, false}));
}

TEST_CASE("subdivision models") {
  const auto [host, model] = subdivide(cycle(3), 1);
  CHECK(host.num_vertices() == 6);
  CHECK(is_subdivision_model(host, cycle(3), model));

  // Two edge paths sharing an internal vertex.
  SubdivisionModel bad = model;
  const int shared = bad.edge_map.at({0, 1}).vertices[1];
  bad.edge_map.at({1, 2}).vertices[1] = shared;
  CHECK_FALSE(is_subdivision_model(host, cycle(3), bad));

  // K_4 into the 4x4 grid with direct edges only: the grid has no triangle.
  SubdivisionModel direct;
  direct.vertex_map = {0, 1, 4, 5};
  for (auto [u, v] : clique(4).edges())
    direct.edge_map[{u, v}] = Path{{direct.vertex_map[u], direct.vertex_map[v]}};
  CHECK_FALSE(is_subdivision_model(grid(4, 4), clique(4), direct));

  // Identity model.
  SubdivisionModel id;
  id.vertex_map = {0, 1, 2};
  for (auto [u, v] : cycle(3).edges()) id.edge_map[{u, v}] = Path{{u, v}};
  CHECK(is_subdivision_model(cycle(3), cycle(3), id));
}
