#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "bramble_forge/bramble.hpp"
#include "bramble_forge/cut_matching.hpp"
#include "bramble_forge/expander_minor.hpp"
#include "bramble_forge/graph.hpp"
#include "bramble_forge/linkage.hpp"

namespace bramble_forge {

/// Width-h, length-r path-of-sets system: clusters S_i with interfaces
/// A_i, B_i and connecting linkages P_i from B_i to A_{i+1}.
struct PathOfSetsSystem {
  Graph host;
  int h = 0;
  std::vector<VertexSet> clusters;   // S_1..S_r
  std::vector<VertexSet> entries;    // A_1..A_r
  std::vector<VertexSet> exits;      // B_1..B_r
  std::vector<Linkage> connectors;   // P_1..P_{r-1}

  int length() const { return static_cast<int>(clusters.size()); }
};

/// Checks every structural property; with strong = true also that each A_i
/// and B_i is well-linked in host[S_i]. Throws BudgetExceeded when h exceeds
/// the exact-check budget.
Verdict verify_system(const PathOfSetsSystem& sys, bool strong, int budget = kDefaultWellLinkedBudget);

/// Explicit strong system on grid(h, r*h + r - 1): h x h blocks separated by
/// single columns, A_i / B_i the block's left / right column, P_i the
/// horizontal length-2 paths through each separating column.
PathOfSetsSystem grid_system(int h, int r);

/// Monomial terms coef * x^i * y^j of the polynomial q(x, y).
struct PolynomialTerm {
  double coef = 1.0;
  int x_power = 0;
  int y_power = 0;
};

struct ParameterConstants {
  double c = 1.0;
  std::vector<PolynomialTerm> q{{1.0, 0, 0}};
};

double evaluate(const std::vector<PolynomialTerm>& q, double x, double y);

struct SystemParameters {
  long long h = 0;
  long long r = 0;
  double f = 0.0;            // f(h, r) = h r^48 q(log h, log r)
  bool f_at_most_k = false;
  bool degenerate = false;   // h < 2
};

/// h = floor(k / (q(log k, c log^2 k + 1) (c log^2 k + 1)^48)),
/// r = floor(c log^2 h + 1), logs base 2. h < 2 is flagged degenerate.
SystemParameters compute_parameters(long long k, const ParameterConstants& constants);

struct MatchedEdge {
  int round = 0;
  int u = 0;  // game vertices, u < v
  int v = 0;
  friend auto operator<=>(const MatchedEdge&, const MatchedEdge&) = default;
};

struct EmbeddingArtifacts {
  std::vector<Path> spines;                 // P_1..P_h, spine j starts at the j-th vertex of A_1
  std::vector<Linkage> cluster_linkages;    // L_i: A_i-B_i linkage inside S_i
  std::vector<Linkage> round_linkages;      // Q_i inside S_i, one per played round
  std::vector<Bipartition> cuts;
  std::vector<Matching> matchings;
  Multigraph game_graph;
  ExpansionCertificate certificate;
  std::map<MatchedEdge, Path> edge_paths;   // Q(e)
  MinorModel clique;                        // branch sets over game vertices
  std::vector<std::vector<MatchedEdge>> trees;  // T_a as chosen edge copies
  int rounds = 0;
};

struct EmbedOptions {
  double target_alpha = 0.25;
  int clique_target = 0;  // <= 0: no cap
  MinorSearchOptions minor;
  CutStrategy strategy = CutStrategy::projection;
  bool verify_input = true;
  int verify_budget = kDefaultWellLinkedBudget;
};

class GameNotConverged : public Error {
 public:
  explicit GameNotConverged(EmbeddingArtifacts partial)
      : Error("cut-matching game did not converge within the system length"),
        partial_(std::make_shared<EmbeddingArtifacts>(std::move(partial))) {}
  const EmbeddingArtifacts& partial() const { return *partial_; }

 private:
  std::shared_ptr<EmbeddingArtifacts> partial_;
};

class CliqueTooSmall : public Error {
 public:
  using Error::Error;
};

struct EmbedResult {
  Bramble bramble;
  EmbeddingArtifacts artifacts;
};

/// Builds spines from the cluster linkages and connectors, plays the
/// cut-matching game with round i's matching player linking A_i inside S_i,
/// finds a clique minor of the game graph and assembles one connected
/// subgraph per branch set. The result is verified: a bramble of
/// congestion at most 2.
EmbedResult embed_and_assemble(const PathOfSetsSystem& sys, const EmbedOptions& opts, std::uint64_t seed);

}  // namespace bramble_forge
