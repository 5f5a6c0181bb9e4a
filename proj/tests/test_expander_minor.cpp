#include "bramble_forge/cut_matching.hpp"
#include "bramble_forge/expander_minor.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bramble_forge;

TEST_CASE("verify_minor_model") {
  CHECK(verify_minor_model(clique(4), MinorModel{{{0}, {1}, {2}, {3}}}));
  const auto c4 = verify_minor_model(grid(2, 2), MinorModel{{{0}, {1}, {2}, {3}}});
  CHECK_FALSE(c4);
  CHECK(c4.violation.find("not adjacent") != std::string::npos);
  // Three L-shapes in the 4x4 grid meeting pairwise.
  const MinorModel ls{{{0, 1, 4}, {2, 3, 6, 7}, {8, 9, 5, 12}}};
  CHECK(verify_minor_model(grid(4, 4), MinorModel{{normalize(ls.branch_sets[0]), normalize(ls.branch_sets[1]),
                                                   normalize(ls.branch_sets[2])}}));
  CHECK_FALSE(verify_minor_model(grid(4, 4), MinorModel{{{0, 2}, {1}}}));
  CHECK_FALSE(verify_minor_model(grid(4, 4), MinorModel{{{0, 1}, {1, 2}}}));
}

TEST_CASE("find_clique_minor on cliques and trees") {
  const auto k5 = find_clique_minor(clique(5), 5, {}, 1);
  CHECK(k5.size() == 5);
  for (const auto& s : k5.branch_sets) CHECK(s.size() == 1);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph t = random_tree(15, seed);
    const auto m = find_clique_minor(t, 10, {}, seed);
    CHECK(m.size() <= 2);
    CHECK(verify_minor_model(t, m));
  }
  CHECK(find_clique_minor(Graph(1), 3, {}, 0).size() == 1);
}

TEST_CASE("find_clique_minor against the Hadwiger oracle") {
  int matches = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Graph g = random_gnp(7, 0.55, seed);
    if (!is_connected(g)) continue;
    const int exact = oracle::hadwiger(g);
    const auto m = find_clique_minor(g, 7, {}, seed);
    CHECK(verify_minor_model(g, m));
    CHECK(m.size() <= exact);
    matches += m.size() == exact;
    ++total;
  }
  CHECK(total >= 20);
  CHECK(matches >= 0.95 * total);
}

TEST_CASE("smaller targets never do worse") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_regular(30, 4, seed);
    const auto big = find_clique_minor(g, 8, {}, seed);
    for (int t = 2; t < 8; ++t) {
      const auto small = find_clique_minor(g, t, {}, seed);
      CHECK(small.size() >= std::min(t, big.size()));
    }
  }
}

TEST_CASE("clique minors in cut-matching expanders on 64 vertices") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomMatchingPlayer player(seed);
    const auto game = run_game(64, player, {}, seed);
    const Graph h = game.state.graph.flatten();
    const auto m = find_clique_minor(h, 64, {}, seed);
    CHECK(verify_minor_model(h, m));
    good += m.size() >= 4;
  }
  CHECK(good >= 8);
}
