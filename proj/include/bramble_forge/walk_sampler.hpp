#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bramble_forge/bramble.hpp"
#include "bramble_forge/concurrent_flow.hpp"
#include "bramble_forge/random.hpp"

namespace bramble_forge {

struct SamplerConfig {
  int k = 2;
  double delta = 0.5;
  std::optional<int> ell;          // derived from k, delta and beta_eff when unset
  double lambda = 0.1;
  int family_cap = 10'000;
  std::optional<int> family;       // overrides the exp(lambda k^{2 delta}) size
  std::uint64_t seed = 0;
};

/// floor(k^{0.5+delta} / (72 beta_eff)), at least 1.
int derived_ell(int k, double delta, double beta_eff);
/// min(cap, floor(exp(lambda k^{2 delta}))), at least 1.
int derived_family_size(int k, double delta, double lambda, int cap);

int resolve_ell(const SamplerConfig& cfg, double beta_eff);
int resolve_family_size(const SamplerConfig& cfg);

struct WalkSample {
  Walk walk;
  std::vector<int> hubs;        // s_1 .. s_ell
  std::vector<Path> segments;   // P_i from s_i to s_{i+1}, cyclic
};

/// Draws a path from the (u, v) family with probability equal to its weight.
const Path& sample_family_path(const ConcurrentFlow& cf, std::size_t i, std::size_t j, Rng& rng);

/// One flow-path experiment: hubs u, v independent uniform, then a path.
Path sample_segment(const ConcurrentFlow& cf, Rng& rng);

/// Closed walk: ell i.i.d. uniform hubs, a weighted path between cyclically
/// consecutive hubs, concatenated (junction vertices not repeated).
WalkSample sample_walk_detailed(const ConcurrentFlow& cf, int ell, Rng& rng);
Walk sample_walk(const ConcurrentFlow& cf, int ell, Rng& rng);

/// Probability that x lies on a sampled segment: throughput(x) / |W|^2.
double hit_probability(const ConcurrentFlow& cf, int x);
std::vector<double> hit_probabilities(const ConcurrentFlow& cf);

struct FamilyReport {
  int family_size = 0;
  int ell = 0;
  bool is_bramble = false;
  std::string violation;
  std::size_t intersecting_pairs = 0;
  std::size_t total_pairs = 0;
  double intersection_fraction = 1.0;
  int congestion = 0;
  double order_lb = 0.0;
  int greedy_disjoint = 0;
  std::optional<int> order_exact;
  std::optional<std::pair<double, double>> order_bounds;  // when the exact search ran out of budget
  VertexSet hitting_set;
};

struct SampledFamily {
  std::vector<Walk> walks;
  Bramble bramble;  // walks projected to vertex sets
  FamilyReport report;
};

struct CertifyOptions {
  std::uint64_t order_budget = 200'000;
  int fractional_iterations = 2000;
  bool exact = true;
};

/// Samples resolve_family_size(cfg) walks, walk w using stream (seed, w),
/// and certifies the family. A non-bramble outcome is reported, not thrown.
SampledFamily sample_bramble(const Graph& g, const ConcurrentFlow& cf, const SamplerConfig& cfg,
                             const CertifyOptions& certify = {});

struct ProportionEstimate {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
};

/// Wilson score interval at 95%.
ProportionEstimate wilson_interval(std::size_t successes, std::size_t trials);

/// Fraction of sampled walks avoiding every vertex of x.
ProportionEstimate estimate_miss_probability(const ConcurrentFlow& cf, int ell, const VertexSet& x,
                                             std::size_t trials, std::uint64_t seed);

}  // namespace bramble_forge
