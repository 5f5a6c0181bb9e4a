#include "bramble_forge/path_of_sets.hpp"

#include <algorithm>
#include <cmath>

namespace bramble_forge {
namespace {

std::string idx(int i) { return std::to_string(i + 1); }

}  // namespace

Verdict verify_system(const PathOfSetsSystem& sys, bool strong, int budget) {
  const Graph& g = sys.host;
  const int n = g.num_vertices();
  const int r = sys.length();
  const int h = sys.h;
  if (r < 1) return Verdict::fail("system has no clusters");
  if (static_cast<int>(sys.entries.size()) != r || static_cast<int>(sys.exits.size()) != r) {
    return Verdict::fail("need one A_i and one B_i per cluster");
  }
  if (static_cast<int>(sys.connectors.size()) != r - 1) return Verdict::fail("need r-1 connecting linkages");
  if (h > budget) {
    throw BudgetExceeded("path-of-sets verification: width " + std::to_string(h) + " exceeds budget " +
                             std::to_string(budget),
                         0, 0);
  }

  std::vector<int> cluster_of(n, -1);
  for (int i = 0; i < r; ++i) {
    for (int v : sys.clusters[i]) {
      if (v < 0 || v >= n) return Verdict::fail("S_" + idx(i) + " has a vertex out of range");
      if (cluster_of[v] != -1) return Verdict::fail("S_" + idx(cluster_of[v]) + " and S_" + idx(i) + " overlap");
      cluster_of[v] = i;
    }
    if (!is_connected_subset(g, sys.clusters[i])) return Verdict::fail("G[S_" + idx(i) + "] is not connected");
  }

  for (int i = 0; i < r; ++i) {
    const VertexSet& a = sys.entries[i];
    const VertexSet& b = sys.exits[i];
    if (static_cast<int>(a.size()) != h || static_cast<int>(b.size()) != h) {
      return Verdict::fail("A_" + idx(i) + " / B_" + idx(i) + " must have size h");
    }
    for (int v : a)
      if (v < 0 || v >= n || cluster_of[v] != i) return Verdict::fail("A_" + idx(i) + " is not inside S_" + idx(i));
    for (int v : b)
      if (v < 0 || v >= n || cluster_of[v] != i) return Verdict::fail("B_" + idx(i) + " is not inside S_" + idx(i));
    VertexSet common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (!common.empty()) return Verdict::fail("A_" + idx(i) + " and B_" + idx(i) + " intersect");
  }

  // Connecting linkages: B_i -> A_{i+1}, interiors outside every cluster,
  // all paths pairwise disjoint.
  std::vector<char> used(n, 0);
  for (int i = 0; i + 1 < r; ++i) {
    const Linkage& l = sys.connectors[i];
    if (static_cast<int>(l.paths.size()) != h) {
      return Verdict::fail("P_" + idx(i) + ": linkage size " + std::to_string(l.paths.size()) + ", expected " +
                           std::to_string(h));
    }
    if (auto v = validate_linkage(g, l, sys.exits[i], sys.entries[i + 1]); !v) {
      return Verdict::fail("P_" + idx(i) + ": " + v.violation);
    }
    for (const Path& p : l.paths) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        const int x = p.vertices[k];
        if (used[x]) return Verdict::fail("connecting paths share vertex " + std::to_string(x));
        used[x] = 1;
        if (k > 0 && k + 1 < p.size() && cluster_of[x] != -1) {
          return Verdict::fail("P_" + idx(i) + " passes through S_" + idx(cluster_of[x]));
        }
      }
    }
  }

  for (int i = 0; i < r; ++i) {
    const InducedSubgraph sub = induced_subgraph(g, sys.clusters[i]);
    auto local = [&](const VertexSet& s) {
      VertexSet out;
      for (int v : s) out.push_back(sub.to_local[v]);
      return normalize(out);
    };
    const VertexSet a = local(sys.entries[i]), b = local(sys.exits[i]);
    if (auto res = is_linked_between(sub.graph, a, b, budget); !res) {
      return Verdict::fail("S_" + idx(i) + ": no linkage between subsets of A_" + idx(i) + " and B_" + idx(i));
    }
    if (strong) {
      if (!is_well_linked(sub.graph, a, budget)) return Verdict::fail("A_" + idx(i) + " is not well-linked in G[S_" + idx(i) + "]");
      if (!is_well_linked(sub.graph, b, budget)) return Verdict::fail("B_" + idx(i) + " is not well-linked in G[S_" + idx(i) + "]");
    }
  }
  return Verdict::pass();
}

PathOfSetsSystem grid_system(int h, int r) {
  if (h < 1 || r < 1) throw InvalidArgument("grid_system needs h >= 1 and r >= 1");
  const int width = r * h + (r - 1);
  PathOfSetsSystem sys;
  sys.host = grid(h, width);
  sys.h = h;
  auto at = [width](int row, int col) { return row * width + col; };
  for (int i = 0; i < r; ++i) {
    const int left = i * (h + 1), right = left + h - 1;
    VertexSet s, a, b;
    for (int row = 0; row < h; ++row) {
      for (int col = left; col <= right; ++col) s.push_back(at(row, col));
      a.push_back(at(row, left));
      b.push_back(at(row, right));
    }
    sys.clusters.push_back(normalize(s));
    sys.entries.push_back(normalize(a));
    sys.exits.push_back(normalize(b));
    if (i + 1 < r) {
      Linkage l;
      for (int row = 0; row < h; ++row) l.paths.push_back(Path{{at(row, right), at(row, right + 1), at(row, right + 2)}});
      sys.connectors.push_back(std::move(l));
    }
  }
  return sys;
}

double evaluate(const std::vector<PolynomialTerm>& q, double x, double y) {
  double total = 0.0;
  for (const auto& t : q) total += t.coef * std::pow(x, t.x_power) * std::pow(y, t.y_power);
  return total;
}

SystemParameters compute_parameters(long long k, const ParameterConstants& constants) {
  if (k < 2) throw InvalidArgument("compute_parameters needs k >= 2");
  if (!(constants.c > 0)) throw InvalidArgument("compute_parameters needs c > 0");
  const long double lk = std::log2(static_cast<long double>(k));
  const long double rounds = constants.c * lk * lk + 1.0L;
  const long double denom = evaluate(constants.q, static_cast<double>(lk), static_cast<double>(rounds)) *
                            std::pow(rounds, 48.0L);
  if (!(denom > 0)) throw InvalidArgument("q must be positive at (log k, c log^2 k + 1)");
  SystemParameters p;
  p.h = static_cast<long long>(std::floor(static_cast<long double>(k) / denom));
  if (p.h >= 1) {
    const long double lh = std::log2(static_cast<long double>(p.h));
    p.r = static_cast<long long>(std::floor(constants.c * lh * lh + 1.0L));
    const long double lr = std::log2(static_cast<long double>(p.r));
    p.f = static_cast<double>(p.h * std::pow(static_cast<long double>(p.r), 48.0L) *
                              evaluate(constants.q, static_cast<double>(lh), static_cast<double>(lr)));
  }
  p.f_at_most_k = p.h >= 1 && p.f <= static_cast<double>(k);
  p.degenerate = p.h < 2;
  return p;
}

EmbedResult embed_and_assemble(const PathOfSetsSystem& sys, const EmbedOptions& opts, std::uint64_t seed) {
  if (opts.verify_input) {
    if (auto v = verify_system(sys, true, opts.verify_budget); !v) {
      throw InvalidArgument("embed_and_assemble needs a strong path-of-sets system: " + v.violation);
    }
  }
  const Graph& g = sys.host;
  const int h = sys.h, r = sys.length();
  // The game needs an even vertex count; an odd width leaves the last spine out of the game.
  const int game_h = h - h % 2;
  if (game_h < 2) throw InvalidArgument("embed_and_assemble needs width h >= 2");

  EmbeddingArtifacts art;
  std::vector<InducedSubgraph> blocks;
  for (int i = 0; i < r; ++i) blocks.push_back(induced_subgraph(g, sys.clusters[i]));

  // Cluster linkages L_i, translated back to host indices.
  for (int i = 0; i < r; ++i) {
    const auto& sub = blocks[i];
    VertexSet a, b;
    for (int v : sys.entries[i]) a.push_back(sub.to_local[v]);
    for (int v : sys.exits[i]) b.push_back(sub.to_local[v]);
    auto l = find_linkage(sub.graph, a, b);
    if (!l) throw InvalidArgument("no A_" + idx(i) + "-B_" + idx(i) + " linkage inside S_" + idx(i));
    for (Path& p : l->paths)
      for (int& v : p.vertices) v = sub.to_host[v];
    art.cluster_linkages.push_back(std::move(*l));
  }

  // Splice L_1, P_1, L_2, ... into spines; spine j starts at the j-th vertex of A_1.
  std::vector<std::map<int, const Path*>> by_start_l(r), by_start_p(std::max(0, r - 1));
  for (int i = 0; i < r; ++i)
    for (const Path& p : art.cluster_linkages[i].paths) by_start_l[i][p.front()] = &p;
  for (int i = 0; i + 1 < r; ++i)
    for (const Path& p : sys.connectors[i].paths) by_start_p[i][p.front()] = &p;
  std::vector<std::vector<int>> entry_on_spine(r, std::vector<int>(h, -1));  // [i][j] = vertex of A_i on spine j
  for (int j = 0; j < h; ++j) {
    Path spine;
    int at = sys.entries[0][j];
    for (int i = 0; i < r; ++i) {
      entry_on_spine[i][j] = at;
      const Path* l = by_start_l[i].at(at);
      spine.vertices.insert(spine.vertices.end(), l->vertices.begin(), l->vertices.end());
      if (i + 1 < r) {
        const Path* p = by_start_p[i].at(l->back());
        spine.vertices.insert(spine.vertices.end(), p->vertices.begin() + 1, p->vertices.end() - 1);
        at = p->back();
      }
    }
    art.spines.push_back(std::move(spine));
  }
  std::vector<int> spine_of(g.num_vertices(), -1);
  for (int j = 0; j < h; ++j) {
    if (auto v = validate_path(g, art.spines[j]); !v) throw Error("internal: spine is not a path: " + v.violation);
    for (int v : art.spines[j].vertices) {
      if (spine_of[v] != -1) throw Error("internal: spines intersect");
      spine_of[v] = j;
    }
  }
  for (int i = 0; i < r; ++i) {
    for (const VertexSet* s : {&sys.entries[i], &sys.exits[i]}) {
      std::vector<int> hits(h, 0);
      for (int v : *s)
        if (spine_of[v] >= 0) ++hits[spine_of[v]];
      for (int j = 0; j < h; ++j)
        if (hits[j] != 1) throw Error("internal: spine does not meet an interface exactly once");
    }
  }

  // Round i's matching player links A_i^1 to A_i^2 inside S_i.
  class ClusterPlayer : public MatchingPlayer {
   public:
    ClusterPlayer(const std::vector<InducedSubgraph>& blocks, const std::vector<std::vector<int>>& entry_on_spine,
                  EmbeddingArtifacts& art)
        : blocks_(blocks), entry_on_spine_(entry_on_spine), art_(art) {}
    Matching respond(const Bipartition& cut, int round) override {
      const auto& sub = blocks_[round];
      std::vector<int> reps;
      for (int j = 0; j < static_cast<int>(cut.side_a.size() + cut.side_b.size()); ++j) {
        reps.push_back(sub.to_local[entry_on_spine_[round][j]]);
      }
      FlowMatching fm = matching_player_flow(sub.graph, reps, cut);
      for (Path& p : fm.linkage.paths)
        for (int& v : p.vertices) v = sub.to_host[v];
      art_.round_linkages.push_back(fm.linkage);
      for (const Path& p : fm.linkage.paths) {
        const auto pos = [&](int v) {
          const auto& e = entry_on_spine_[round];
          return static_cast<int>(std::find(e.begin(), e.end(), v) - e.begin());
        };
        const int x = pos(p.front()), y = pos(p.back());
        art_.edge_paths.emplace(MatchedEdge{round, std::min(x, y), std::max(x, y)}, p);
      }
      return fm.matching;
    }

   private:
    const std::vector<InducedSubgraph>& blocks_;
    const std::vector<std::vector<int>>& entry_on_spine_;
    EmbeddingArtifacts& art_;
  };

  ClusterPlayer player(blocks, entry_on_spine, art);
  GameOptions game;
  game.target_alpha = opts.target_alpha;
  game.max_rounds = r;
  game.strategy = opts.strategy;
  try {
    GameResult res = run_game(game_h, player, game, seed);
    art.game_graph = res.state.graph;
    art.certificate = res.certificate;
    art.cuts = res.state.cuts;
    art.matchings = res.state.matchings;
    art.rounds = res.rounds;
  } catch (const MaxRoundsExceeded& e) {
    art.game_graph = e.partial().state.graph;
    art.certificate = e.partial().certificate;
    art.cuts = e.partial().state.cuts;
    art.matchings = e.partial().state.matchings;
    art.rounds = e.partial().rounds;
    throw GameNotConverged(std::move(art));
  }

  const Graph flat = art.game_graph.flatten();
  const int target = opts.clique_target > 0 ? opts.clique_target : game_h;
  art.clique = find_clique_minor(flat, target, opts.minor, derive_seed(seed, 1));
  const int t = art.clique.size();
  if (t < 2) throw CliqueTooSmall("clique minor of the game graph has " + std::to_string(t) + " branch sets");

  // Earliest-round copy of each game edge.
  auto copy_of = [&](int x, int y) {
    for (int i = 0; i < art.rounds; ++i) {
      MatchedEdge e{i, std::min(x, y), std::max(x, y)};
      if (art.edge_paths.count(e)) return e;
    }
    throw Error("internal: game edge without a path");
  };

  std::vector<int> branch_of(game_h, -1);
  for (int a = 0; a < t; ++a)
    for (int j : art.clique.branch_sets[a]) branch_of[j] = a;

  Bramble bramble;
  for (int a = 0; a < t; ++a) {
    const VertexSet& k_a = art.clique.branch_sets[a];
    VertexSet element;
    for (int j : k_a) element.insert(element.end(), art.spines[j].vertices.begin(), art.spines[j].vertices.end());
    // BFS spanning tree T_a from the minimum game vertex of K_a.
    std::vector<MatchedEdge> tree;
    std::vector<char> seen(game_h, 0);
    std::vector<int> queue{k_a.front()};
    seen[k_a.front()] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int x = queue[head];
      for (int y : flat.neighbors(x)) {
        if (branch_of[y] != a || seen[y]) continue;
        seen[y] = 1;
        queue.push_back(y);
        tree.push_back(copy_of(x, y));
      }
    }
    for (const MatchedEdge& e : tree) {
      const Path& q = art.edge_paths.at(e);
      element.insert(element.end(), q.vertices.begin(), q.vertices.end());
    }
    art.trees.push_back(std::move(tree));
    // Links to later branch sets, without the endpoint on the far spine.
    for (int b = a + 1; b < t; ++b) {
      bool done = false;
      for (int x : k_a) {
        for (int y : flat.neighbors(x)) {
          if (branch_of[y] != b) continue;
          const Path& q = art.edge_paths.at(copy_of(x, y));
          for (int v : q.vertices)
            if (spine_of[v] != y || (v != q.front() && v != q.back())) element.push_back(v);
          done = true;
          break;
        }
        if (done) break;
      }
      if (!done) throw Error("internal: clique model misses an adjacency");
    }
    bramble.elements.push_back(normalize(std::move(element)));
  }

  if (auto v = verify_bramble(g, bramble); !v) throw Error("internal: assembled family is not a bramble: " + v.violation);
  if (congestion(g, bramble).congestion > 2) throw Error("internal: assembled bramble has congestion above 2");
  return {std::move(bramble), std::move(art)};
}

}  // namespace bramble_forge
