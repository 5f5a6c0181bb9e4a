#include "bramble_forge/linkage.hpp"
#include "bramble_forge/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bramble_forge;

TEST_CASE("find_linkage across the 3x3 grid") {
  const Graph g = grid(3, 3);
  const VertexSet left{0, 3, 6}, right{2, 5, 8};
  const auto l = find_linkage(g, left, right);
  REQUIRE(l);
  CHECK(l->paths.size() == 3);
  CHECK(validate_linkage(g, *l, left, right));
  CHECK(max_disjoint_paths(g, left, right) == 3);
  for (const Path& p : l->paths) CHECK(p.size() == 3);
}

TEST_CASE("a shared cut vertex blocks two paths") {
  // a=0, a'=1, x=2, b=3, b'=4: paths 0-2-3 and 1-2-4.
  const Graph g(5, std::vector<Edge>{{0, 2}, {1, 2}, {2, 3}, {2, 4}});
  CHECK_FALSE(find_linkage(g, {0, 1}, {3, 4}));
  CHECK(max_disjoint_paths(g, {0, 1}, {3, 4}) == 1);
}

TEST_CASE("single edge linkage and trivial cases") {
  const Graph g = path_graph(2);
  const auto l = find_linkage(g, {0}, {1});
  REQUIRE(l);
  CHECK(l->paths.front().vertices == std::vector<int>{0, 1});
  const auto empty = find_linkage(g, {}, {});
  REQUIRE(empty);
  CHECK(empty->paths.empty());
}

TEST_CASE("find_linkage preconditions") {
  const Graph g = grid(2, 2);
  CHECK_THROWS_AS(find_linkage(g, {0, 1}, {2}), InvalidArgument);
  CHECK_THROWS_AS(find_linkage(g, {0}, {0}), InvalidArgument);
  CHECK_THROWS_AS(find_linkage(g, {0}, {3}, {0}), InvalidArgument);
}

TEST_CASE("forbidden vertices are avoided") {
  const Graph g = grid(3, 3);
  const auto l = find_linkage(g, {0}, {8}, {4, 5, 7});
  CHECK_FALSE(l);
  const auto m = find_linkage(g, {0}, {8}, {4});
  REQUIRE(m);
  for (int v : m->paths.front().vertices) CHECK(v != 4);
}

TEST_CASE("validate_linkage diagnostics") {
  const Graph g = grid(3, 3);
  Linkage l{{Path{{0, 1, 2}}, Path{{3, 4, 5}}}};
  const auto v = validate_linkage(g, l, {0, 3, 6}, {2, 5, 8});
  CHECK_FALSE(v);
  CHECK(v.violation == "linkage size 2, expected 3");
  Linkage crossing{{Path{{0, 1, 4}}, Path{{3, 4, 5}}}};
  CHECK_FALSE(validate_linkage(g, crossing, {0, 3}, {4, 5}));
}

TEST_CASE("Menger agreement with brute-force enumeration on small graphs") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng = stream_rng(99, seed);
    const int n = 3 + static_cast<int>(uniform_index(rng, 5));
    const Graph g = random_gnp(n, 0.25 + 0.5 * uniform_real(rng), seed);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    shuffle(perm, rng);
    const int size = 1 + static_cast<int>(uniform_index(rng, std::min(2, n / 2)));
    const VertexSet a = normalize({perm.begin(), perm.begin() + size});
    const VertexSet b = normalize({perm.begin() + size, perm.begin() + 2 * size});
    VertexSet forbidden;
    if (n > 2 * size && uniform_index(rng, 2)) forbidden.push_back(perm[2 * size]);
    const auto l = find_linkage(g, a, b, forbidden);
    CHECK(l.has_value() == oracle::linkage_exists(g, a, b, forbidden));
    if (l) CHECK(validate_linkage(g, *l, a, b, forbidden));
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("well-linkedness") {
  CHECK(is_well_linked(grid(3, 3), {0, 3, 6}));
  CHECK(is_well_linked(grid(4, 4), {0, 4, 8, 12}));
  const auto star_result = is_well_linked(star(4), {1, 2, 3, 4});
  CHECK_FALSE(star_result);
  CHECK(star_result.violating_a.size() == 2);
  CHECK(star_result.violating_b.size() == 2);
  CHECK(is_well_linked(grid(3, 3), {4}));
  CHECK(is_well_linked(grid(3, 3), {}));
  VertexSet big;
  for (int v = 0; v < 13; ++v) big.push_back(v);
  CHECK_THROWS_AS(is_well_linked(grid(4, 4), big), BudgetExceeded);
  CHECK_NOTHROW(is_well_linked(grid(4, 4), big, 13));
}

TEST_CASE("well-linkedness agrees with brute force on small sets") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = random_gnp(7, 0.45, seed);
    const VertexSet x{0, 2, 4, 6};
    bool expected = true;
    // Disjoint equal-size pairs, rest of x forbidden.
    for (int ma = 1; ma < 16; ++ma)
      for (int mb = 1; mb < 16; ++mb) {
        if (ma & mb || __builtin_popcount(ma) != __builtin_popcount(mb)) continue;
        VertexSet a, b, f;
        for (int i = 0; i < 4; ++i) {
          if (ma >> i & 1) a.push_back(x[i]);
          else if (mb >> i & 1) b.push_back(x[i]);
          else f.push_back(x[i]);
        }
        expected = expected && oracle::linkage_exists(g, a, b, f);
      }
    CHECK(static_cast<bool>(is_well_linked(g, x)) == expected);
  }
}
