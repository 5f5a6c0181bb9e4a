#pragma once

#include <cstdint>
#include <vector>

#include "bramble_forge/graph.hpp"

namespace bramble_forge {

struct WeightedPath {
  Path path;
  double weight = 0.0;
};

/// Concurrent flow over hub set W: for every ordered pair (W[i], W[j]) a
/// weighted family of distinct paths from W[i] to W[j], each family carrying
/// exactly `value` units.
struct ConcurrentFlow {
  int num_vertices = 0;  // host vertex count
  VertexSet hubs;
  std::vector<std::vector<WeightedPath>> families;  // index i * |W| + j
  double value = 1.0;
  double beta_eff = 1.0 / 9.0;

  std::size_t hub_count() const { return hubs.size(); }
  const std::vector<WeightedPath>& family(std::size_t i, std::size_t j) const { return families[i * hubs.size() + j]; }
};

struct FlowOptions {
  int iterations = 20;
  double eta = -1.0;  // <= 0 selects log2(n)
};

/// Multiplicative-weights concurrent flow of value 1 between all ordered hub
/// pairs. Each iteration routes every pair on a shortest path under vertex
/// lengths exp(eta * load / max load); families are the averaged routings.
/// Throws DisconnectedPair when two hubs lie in different components.
ConcurrentFlow solve_concurrent_flow(const Graph& g, const VertexSet& hubs, int k, const FlowOptions& opts,
                                     std::uint64_t seed);

struct FlowCongestion {
  double gamma = 0.0;
  int argmax = -1;
  std::vector<double> throughput;  // per host vertex
};

FlowCongestion flow_congestion(const ConcurrentFlow& cf);

/// max(1/9, gamma / (k log2 k)); k < 2 falls back to the floor.
double effective_beta(double gamma, int k);

/// Checks the ConcurrentFlow invariants against the host graph.
Verdict validate_flow(const Graph& g, const ConcurrentFlow& cf, double tolerance = 1e-9);

}  // namespace bramble_forge
