#include "bramble_forge/bramble.hpp"
#include "bramble_forge/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bramble_forge;

namespace {

Bramble k4_singletons() { return Bramble{{{0}, {1}, {2}, {3}}}; }

bool hits_all(const Bramble& b, const VertexSet& h) {
  for (const auto& e : b.elements) {
    bool hit = false;
    for (int v : e) hit = hit || std::binary_search(h.begin(), h.end(), v);
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("verify_bramble basics") {
  CHECK(verify_bramble(clique(3), Bramble{{{0}, {1}, {2}}}));
  const auto v = verify_bramble(path_graph(3), Bramble{{{0}, {2}}});
  CHECK_FALSE(v);
  CHECK(v.violation.find("0") != std::string::npos);
  CHECK_FALSE(verify_bramble(path_graph(3), Bramble{{{0, 2}}}));
  CHECK_FALSE(verify_bramble(path_graph(3), Bramble{{{}}}));
  CHECK(verify_bramble(grid(3, 3), grid_cross_bramble(3)));
}

TEST_CASE("the 3x3 cross bramble from its explicit description") {
  // Crosses row i + column j for i, j in {0, 1}, restricted to the top-left
  // 2x2 block, plus the bottom row and the right column minus its corner.
  Bramble b;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      VertexSet cross;
      for (int c = 0; c < 2; ++c) cross.push_back(i * 3 + c);
      for (int r = 0; r < 2; ++r) cross.push_back(r * 3 + j);
      b.elements.push_back(normalize(cross));
    }
  b.elements.push_back({6, 7, 8});
  b.elements.push_back({2, 5});
  CHECK(verify_bramble(grid(3, 3), b));
  CHECK(oracle::is_bramble(grid(3, 3), b.elements));
  CHECK(order_exact(grid(3, 3), b).order == 4);
  CHECK(oracle::min_hitting_set(9, b.elements) == 4);
  auto sorted = grid_cross_bramble(3).elements;
  auto mine = b.elements;
  std::sort(sorted.begin(), sorted.end());
  std::sort(mine.begin(), mine.end());
  CHECK(sorted == mine);
}

TEST_CASE("verify_bramble agrees with the quadratic oracle on random instances") {
  int agree = 0, positives = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng = stream_rng(5, seed);
    const int n = 2 + static_cast<int>(uniform_index(rng, 7));
    const Graph g = random_gnp(n, 0.5, seed);
    const int s = 1 + static_cast<int>(uniform_index(rng, 5));
    Bramble b;
    for (int i = 0; i < s; ++i) {
      VertexSet e;
      for (int v = 0; v < n; ++v)
        if (uniform_index(rng, 3) == 0) e.push_back(v);
      if (e.empty()) e.push_back(static_cast<int>(uniform_index(rng, n)));
      b.elements.push_back(e);
    }
    const bool expected = oracle::is_bramble(g, b.elements);
    agree += static_cast<bool>(verify_bramble(g, b)) == expected;
    positives += expected;
  }
  CHECK(agree == 400);
  CHECK(positives > 20);
}

TEST_CASE("congestion") {
  CHECK(congestion(clique(4), k4_singletons()).congestion == 1);
  const auto c = congestion(path_graph(3), Bramble{{{0, 1}, {0, 1}}});
  CHECK(c.congestion == 2);
  CHECK((c.witness == 0 || c.witness == 1));
  CHECK(congestion(path_graph(3), Bramble{}).congestion == 0);
}

TEST_CASE("order_exact examples") {
  auto r = order_exact(clique(4), k4_singletons());
  CHECK(r.order == 4);
  CHECK(r.hitting_set == VertexSet{0, 1, 2, 3});
  CHECK(order_exact(clique(4), Bramble{}).order == 0);
  const auto cross = grid_cross_bramble(3);
  r = order_exact(grid(3, 3), cross);
  CHECK(r.order == 4);
  CHECK(hits_all(cross, r.hitting_set));
}

TEST_CASE("order_exact matches subset enumeration on random families") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng = stream_rng(17, seed);
    const int n = 4 + static_cast<int>(uniform_index(rng, 9));
    const int s = 1 + static_cast<int>(uniform_index(rng, 10));
    Bramble b;
    for (int i = 0; i < s; ++i) {
      VertexSet e;
      for (int v = 0; v < n; ++v)
        if (uniform_index(rng, 4) == 0) e.push_back(v);
      if (e.empty()) e.push_back(static_cast<int>(uniform_index(rng, n)));
      b.elements.push_back(e);
    }
    const Graph g = clique(n);
    const auto r = order_exact(g, b);
    CHECK(r.order == oracle::min_hitting_set(n, b.elements));
    CHECK(static_cast<int>(r.hitting_set.size()) == r.order);
    CHECK(hits_all(b, r.hitting_set));
  }
}

TEST_CASE("order_exact reports bounds when out of budget") {
  const auto b = grid_cross_bramble(5);
  try {
    order_exact(grid(5, 5), b, 2);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.lower_bound() <= 6);
    CHECK(e.upper_bound() >= 6);
  }
}

TEST_CASE("order_fractional") {
  CHECK(order_fractional(clique(4), k4_singletons()).value == doctest::Approx(4.0).epsilon(0.02));
  Bramble copies{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
  CHECK(order_fractional(path_graph(3), copies).value == doctest::Approx(1.0).epsilon(0.02));
  const auto cross = grid_cross_bramble(3);
  const auto f = order_fractional(grid(3, 3), cross);
  CHECK(f.value >= 3.0);
  CHECK(f.value <= 4.0);
}

TEST_CASE("order chain: exact >= fractional >= greedy disjoint, and order >= s / congestion") {
  for (int n = 2; n <= 6; ++n) {
    const Graph g = grid(n, n);
    const auto b = grid_cross_bramble(n);
    const int exact = order_exact(g, b).order;
    const auto frac = order_fractional(g, b);
    CHECK(exact == n + 1);
    CHECK(exact >= frac.value - 1e-9);
    CHECK(frac.value >= greedy_disjoint_elements(b) - 1e-6);
    CHECK(exact <= static_cast<int>(b.size()));
    const int c = congestion(g, b).congestion;
    CHECK(exact * c >= static_cast<int>(b.size()));
    // The packing is feasible: no vertex covered more than once.
    std::vector<double> load(g.num_vertices(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (int v : b.elements[i]) load[v] += frac.packing[i];
    for (double l : load) CHECK(l <= 1.0 + 1e-9);
  }
}

TEST_CASE("lifting through subdivisions") {
  // Identity model.
  SubdivisionModel id;
  id.vertex_map = {0, 1, 2};
  for (auto [u, v] : cycle(3).edges()) id.edge_map[{u, v}] = Path{{u, v}};
  const Bramble tri{{{0}, {1}, {2}}};
  CHECK(lift_bramble(cycle(3), cycle(3), id, tri) == tri);

  // C3 singletons through the C6 subdivision.
  const auto [host, model] = subdivide(cycle(3), 1);
  const Bramble lifted = lift_bramble(host, cycle(3), model, tri);
  CHECK(verify_bramble(host, lifted));
  CHECK(order_exact(host, lifted).order == order_exact(cycle(3), tri).order);

  for (int n : {2, 3}) {
    const Graph branch = grid(n, n);
    const auto b = grid_cross_bramble(n);
    const auto [h2, m2] = subdivide(branch, 1);
    const Bramble l2 = lift_bramble(h2, branch, m2, b);
    CHECK(verify_bramble(h2, l2));
    CHECK(order_exact(h2, l2).order == order_exact(branch, b).order);
  }

  SubdivisionModel broken = model;
  broken.vertex_map[0] = broken.vertex_map[1];
  CHECK_THROWS_AS(lift_bramble(host, cycle(3), broken, tri), InvalidArgument);
}
