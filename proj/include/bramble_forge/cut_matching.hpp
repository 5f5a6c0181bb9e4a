#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "bramble_forge/graph.hpp"
#include "bramble_forge/linkage.hpp"
#include "bramble_forge/random.hpp"

namespace bramble_forge {

/// Undirected multigraph stored as edge multiplicities.
class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(int n) : adjacency_(n) {}
  static Multigraph from_graph(const Graph& g);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  void add_edge(int u, int v, int count = 1);
  int multiplicity(int u, int v) const;
  int degree(int v) const;
  int max_degree() const;
  const std::map<int, int>& neighbors(int v) const { return adjacency_[v]; }
  /// (u, v, multiplicity) with u < v, sorted.
  std::vector<std::tuple<int, int, int>> edges() const;
  Graph flatten() const;
  Eigen::MatrixXd laplacian() const;

 private:
  std::vector<std::map<int, int>> adjacency_;
};

struct ExpansionCertificate {
  enum class Method { exact, spectral };
  double alpha = 0.0;
  Method method = Method::exact;
  std::optional<VertexSet> witness_cut;  // smaller side of a worst bipartition (exact only)
};

inline constexpr int kDefaultExactExpansionBudget = 22;

/// min over bipartitions (S, S') of |E(S, S')| / min(|S|, |S'|), counting
/// multiplicities, by enumerating all 2^{n-1} - 1 bipartitions.
ExpansionCertificate exact_expansion(const Multigraph& g);
/// lambda_2(L) / 2, a lower bound on the exact value.
ExpansionCertificate spectral_expansion(const Multigraph& g);
/// Exact up to `exact_budget` vertices, spectral beyond.
ExpansionCertificate expansion(const Multigraph& g, int exact_budget = kDefaultExactExpansionBudget);
ExpansionCertificate expansion(const Graph& g, int exact_budget = kDefaultExactExpansionBudget);

struct Bipartition {
  VertexSet side_a;
  VertexSet side_b;
};

/// partner[v] for every v in [h].
using Matching = std::vector<int>;

/// True iff m is a perfect matching on [h] all of whose edges cross the cut.
Verdict validate_matching(const Bipartition& cut, const Matching& m);

enum class CutStrategy { projection, random };

struct GameState {
  int h = 0;
  int round = 0;
  std::vector<Bipartition> cuts;
  std::vector<Matching> matchings;
  Multigraph graph;
  Eigen::MatrixXd embedding;  // row v: vector of vertex v

  static GameState initial(int h);
};

/// Balanced bipartition chosen by the cut player. The projection strategy
/// projects the per-vertex vectors on a random unit direction and splits at
/// the median (ties to side A by ascending index). Throws on odd h.
Bipartition cut_player_step(const GameState& state, Rng& rng, CutStrategy strategy = CutStrategy::projection);

/// Adds the matching (after validation) and averages the vectors of matched
/// pairs.
void apply_matching(GameState& state, const Bipartition& cut, const Matching& m);

class MatchingPlayer {
 public:
  virtual ~MatchingPlayer() = default;
  virtual Matching respond(const Bipartition& cut, int round) = 0;
};

/// Uniformly random perfect matching across the cut.
class RandomMatchingPlayer : public MatchingPlayer {
 public:
  explicit RandomMatchingPlayer(std::uint64_t seed) : rng_(splitmix64(seed)) {}
  Matching respond(const Bipartition& cut, int round) override;

 private:
  Rng rng_;
};

/// Matches within the fixed halves [0, h/2) and [h/2, h) whenever the cut
/// allows it.
class FixedHalvesMatchingPlayer : public MatchingPlayer {
 public:
  explicit FixedHalvesMatchingPlayer(int h) : h_(h) {}
  Matching respond(const Bipartition& cut, int round) override;

 private:
  int h_;
};

/// Thrown when the linkage a flow-based matching player needs does not exist.
class InfeasibleLinkage : public Error {
 public:
  using Error::Error;
};

struct FlowMatching {
  Matching matching;
  Linkage linkage;
};

/// Matching player simulated by a flow: representatives[j] is the host vertex
/// standing for game vertex j; links side A's representatives to side B's.
FlowMatching matching_player_flow(const Graph& g, const std::vector<int>& representatives, const Bipartition& cut);

/// Game vertex j <-> x[j] of a well-linked set x.
class FlowMatchingPlayer : public MatchingPlayer {
 public:
  FlowMatchingPlayer(Graph g, std::vector<int> representatives)
      : g_(std::move(g)), representatives_(std::move(representatives)) {}
  Matching respond(const Bipartition& cut, int round) override;
  const std::vector<Linkage>& linkages() const { return linkages_; }

 private:
  Graph g_;
  std::vector<int> representatives_;
  std::vector<Linkage> linkages_;
};

struct GameOptions {
  double target_alpha = 0.25;
  int max_rounds = 0;  // <= 0 selects ceil(4 (log2 h)^2)
  int exact_budget = kDefaultExactExpansionBudget;
  CutStrategy strategy = CutStrategy::projection;
};

int default_max_rounds(int h);

struct GameResult {
  GameState state;
  ExpansionCertificate certificate;
  int rounds = 0;
};

class MaxRoundsExceeded : public Error {
 public:
  explicit MaxRoundsExceeded(GameResult partial)
      : Error("cut-matching game did not reach the target expansion within " + std::to_string(partial.rounds) +
              " rounds"),
        partial_(std::make_shared<GameResult>(std::move(partial))) {}
  const GameResult& partial() const { return *partial_; }

 private:
  std::shared_ptr<GameResult> partial_;
};

/// Plays rounds until the accumulated multigraph certifies target_alpha.
GameResult run_game(int h, MatchingPlayer& player, const GameOptions& opts, std::uint64_t seed);

}  // namespace bramble_forge
