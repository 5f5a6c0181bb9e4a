#include "bramble_forge/cut_matching.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace bramble_forge {

Multigraph Multigraph::from_graph(const Graph& g) {
  Multigraph m(g.num_vertices());
  for (auto [u, v] : g.edges()) m.add_edge(u, v);
  return m;
}

void Multigraph::add_edge(int u, int v, int count) {
  if (u == v) throw InvalidArgument("multigraph: self-loop");
  adjacency_.at(u)[v] += count;
  adjacency_.at(v)[u] += count;
}

int Multigraph::multiplicity(int u, int v) const {
  auto it = adjacency_.at(u).find(v);
  return it == adjacency_[u].end() ? 0 : it->second;
}

int Multigraph::degree(int v) const {
  int d = 0;
  for (auto [w, c] : adjacency_.at(v)) d += c;
  return d;
}

int Multigraph::max_degree() const {
  int d = 0;
  for (int v = 0; v < num_vertices(); ++v) d = std::max(d, degree(v));
  return d;
}

std::vector<std::tuple<int, int, int>> Multigraph::edges() const {
  std::vector<std::tuple<int, int, int>> out;
  for (int u = 0; u < num_vertices(); ++u)
    for (auto [v, c] : adjacency_[u])
      if (u < v) out.emplace_back(u, v, c);
  return out;
}

Graph Multigraph::flatten() const {
  std::vector<Edge> e;
  for (auto [u, v, c] : edges()) e.emplace_back(u, v);
  return Graph(num_vertices(), e);
}

Eigen::MatrixXd Multigraph::laplacian() const {
  const int n = num_vertices();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (auto [v, c] : adjacency_[u]) {
      lap(u, v) -= c;
      lap(u, u) += c;
    }
  }
  return lap;
}

ExpansionCertificate exact_expansion(const Multigraph& g) {
  const int n = g.num_vertices();
  if (n < 2) throw InvalidArgument("expansion needs at least two vertices");
  if (n > 30) throw BudgetExceeded("exact expansion limited to 30 vertices", 0, 0);
  // Vertex n-1 stays in S'; a Gray code over the others flips one vertex per step.
  std::vector<char> in_s(n, 0);
  long cut = 0;
  int size = 0;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_code = 0, code = 0;
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t step = 1; step < total; ++step) {
    const int v = std::countr_zero(step);
    long toward_s = 0;
    for (auto [w, c] : g.neighbors(v))
      if (in_s[w]) toward_s += c;
    const long deg = g.degree(v);
    if (in_s[v]) {
      cut -= deg - 2 * toward_s;
      in_s[v] = 0;
      --size;
    } else {
      cut += deg - 2 * toward_s;
      in_s[v] = 1;
      ++size;
    }
    code ^= std::uint64_t{1} << v;
    const double ratio = static_cast<double>(cut) / std::min(size, n - size);
    if (ratio < best) {
      best = ratio;
      best_code = code;
    }
  }
  ExpansionCertificate cert;
  cert.alpha = best;
  cert.method = ExpansionCertificate::Method::exact;
  VertexSet s, rest;
  for (int v = 0; v < n; ++v) ((best_code >> v) & 1u ? s : rest).push_back(v);
  cert.witness_cut = s.size() <= rest.size() ? s : rest;
  return cert;
}

ExpansionCertificate spectral_expansion(const Multigraph& g) {
  const int n = g.num_vertices();
  if (n < 2) throw InvalidArgument("expansion needs at least two vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double lambda2 = ev(1);
  // Shave a relative margin so rounding never certifies more than lambda_2 / 2.
  const double margin = 1e-9 * std::max(1.0, ev(n - 1));
  ExpansionCertificate cert;
  cert.alpha = std::max(0.0, lambda2 / 2.0 - margin);
  cert.method = ExpansionCertificate::Method::spectral;
  return cert;
}

ExpansionCertificate expansion(const Multigraph& g, int exact_budget) {
  return g.num_vertices() <= exact_budget ? exact_expansion(g) : spectral_expansion(g);
}

ExpansionCertificate expansion(const Graph& g, int exact_budget) {
  return expansion(Multigraph::from_graph(g), exact_budget);
}

Verdict validate_matching(const Bipartition& cut, const Matching& m) {
  const int h = static_cast<int>(m.size());
  if (cut.side_a.size() != cut.side_b.size() || static_cast<int>(cut.side_a.size() * 2) != h) {
    return Verdict::fail("cut is not a balanced bipartition of the matching's vertex set");
  }
  std::vector<int> side(h, -1);
  for (int v : cut.side_a) side.at(v) = 0;
  for (int v : cut.side_b) {
    if (side.at(v) != -1) return Verdict::fail("cut sides overlap");
    side[v] = 1;
  }
  for (int v = 0; v < h; ++v) {
    const int w = m[v];
    if (w < 0 || w >= h || m[w] != v || w == v) return Verdict::fail("matching is not perfect at " + std::to_string(v));
    if (side[v] == side[w]) return Verdict::fail("matching edge " + std::to_string(v) + "-" + std::to_string(w) + " does not cross the cut");
  }
  return Verdict::pass();
}

GameState GameState::initial(int h) {
  if (h < 2 || h % 2 != 0) throw InvalidArgument("cut-matching game needs an even h >= 2");
  GameState s;
  s.h = h;
  s.graph = Multigraph(h);
  s.embedding = Eigen::MatrixXd::Identity(h, h).array() - 1.0 / h;
  return s;
}

Bipartition cut_player_step(const GameState& state, Rng& rng, CutStrategy strategy) {
  const int h = state.h;
  if (h < 2 || h % 2 != 0) throw InvalidArgument("cut player needs an even h >= 2");
  std::vector<int> order(h);
  std::iota(order.begin(), order.end(), 0);
  if (strategy == CutStrategy::random) {
    shuffle(order, rng);
  } else {
    Eigen::VectorXd direction(state.embedding.cols());
    for (Eigen::Index i = 0; i < direction.size(); ++i) direction(i) = standard_normal(rng);
    direction.normalize();
    const Eigen::VectorXd projection = state.embedding * direction;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return projection(a) < projection(b); });
  }
  Bipartition cut;
  cut.side_a = normalize({order.begin(), order.begin() + h / 2});
  cut.side_b = normalize({order.begin() + h / 2, order.end()});
  return cut;
}

void apply_matching(GameState& state, const Bipartition& cut, const Matching& m) {
  if (static_cast<int>(m.size()) != state.h) throw InvalidArgument("matching has wrong size");
  if (auto v = validate_matching(cut, m); !v) throw InvalidArgument("invalid matching: " + v.violation);
  for (int v : cut.side_a) {
    const int w = m[v];
    state.graph.add_edge(v, w);
    const Eigen::RowVectorXd mean = 0.5 * (state.embedding.row(v) + state.embedding.row(w));
    state.embedding.row(v) = mean;
    state.embedding.row(w) = mean;
  }
  state.cuts.push_back(cut);
  state.matchings.push_back(m);
  ++state.round;
}

Matching RandomMatchingPlayer::respond(const Bipartition& cut, int) {
  std::vector<int> b = cut.side_b;
  shuffle(b, rng_);
  Matching m(cut.side_a.size() * 2, -1);
  for (std::size_t i = 0; i < cut.side_a.size(); ++i) {
    m[cut.side_a[i]] = b[i];
    m[b[i]] = cut.side_a[i];
  }
  return m;
}

Matching FixedHalvesMatchingPlayer::respond(const Bipartition& cut, int) {
  Matching m(h_, -1);
  std::vector<int> left_a, left_b;
  for (int half = 0; half < 2; ++half) {
    auto in_half = [&](int v) { return (v < h_ / 2) == (half == 0); };
    std::vector<int> a, b;
    for (int v : cut.side_a)
      if (in_half(v)) a.push_back(v);
    for (int v : cut.side_b)
      if (in_half(v)) b.push_back(v);
    const std::size_t k = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < k; ++i) {
      m[a[i]] = b[i];
      m[b[i]] = a[i];
    }
    left_a.insert(left_a.end(), a.begin() + k, a.end());
    left_b.insert(left_b.end(), b.begin() + k, b.end());
  }
  for (std::size_t i = 0; i < left_a.size(); ++i) {
    m[left_a[i]] = left_b[i];
    m[left_b[i]] = left_a[i];
  }
  return m;
}

FlowMatching matching_player_flow(const Graph& g, const std::vector<int>& representatives, const Bipartition& cut) {
  const int h = static_cast<int>(representatives.size());
  VertexSet a, b;
  std::vector<int> owner(g.num_vertices(), -1);
  for (int j = 0; j < h; ++j) owner.at(representatives[j]) = j;
  for (int j : cut.side_a) a.push_back(representatives.at(j));
  for (int j : cut.side_b) b.push_back(representatives.at(j));
  auto linkage = find_linkage(g, a, b);
  if (!linkage) {
    throw InfeasibleLinkage("matching player: no linkage between the cut sides; the representative set is not well-linked");
  }
  FlowMatching out;
  out.matching.assign(h, -1);
  for (const Path& p : linkage->paths) {
    const int x = owner[p.front()], y = owner[p.back()];
    out.matching[x] = y;
    out.matching[y] = x;
  }
  out.linkage = std::move(*linkage);
  return out;
}

Matching FlowMatchingPlayer::respond(const Bipartition& cut, int) {
  FlowMatching fm = matching_player_flow(g_, representatives_, cut);
  linkages_.push_back(std::move(fm.linkage));
  return fm.matching;
}

int default_max_rounds(int h) {
  const double l = std::log2(static_cast<double>(h));
  return std::max(1, static_cast<int>(std::ceil(4.0 * l * l)));
}

GameResult run_game(int h, MatchingPlayer& player, const GameOptions& opts, std::uint64_t seed) {
  GameResult result;
  result.state = GameState::initial(h);
  const int max_rounds = opts.max_rounds > 0 ? opts.max_rounds : default_max_rounds(h);
  Rng rng(splitmix64(seed));
  for (int round = 0; round < max_rounds; ++round) {
    const Bipartition cut = cut_player_step(result.state, rng, opts.strategy);
    const Matching m = player.respond(cut, round);
    apply_matching(result.state, cut, m);
    result.rounds = round + 1;
    result.certificate = expansion(result.state.graph, opts.exact_budget);
    if (result.certificate.alpha >= opts.target_alpha) return result;
  }
  throw MaxRoundsExceeded(std::move(result));
}

}  // namespace bramble_forge
