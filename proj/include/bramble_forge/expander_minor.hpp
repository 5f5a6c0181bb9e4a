#pragma once

#include <cstdint>
#include <vector>

#include "bramble_forge/graph.hpp"

namespace bramble_forge {

/// Clique-minor model: pairwise disjoint connected branch sets, every pair
/// joined by a host edge.
struct MinorModel {
  std::vector<VertexSet> branch_sets;

  int size() const { return static_cast<int>(branch_sets.size()); }
};

Verdict verify_minor_model(const Graph& host, const MinorModel& m);

struct MinorSearchOptions {
  int attempts = 32;
  int repair_steps = 200;
};

/// Randomized multi-start search for a large clique minor. Each attempt
/// partitions the host into t connected parts by seeded multi-source BFS,
/// repairs missing part adjacencies by moving boundary vertices, and then
/// contracts or drops parts until the quotient is complete. The result is
/// truncated to target_t branch sets and always passes verify_minor_model.
/// Selection is deterministic: largest t, then lowest attempt index.
MinorModel find_clique_minor(const Graph& host, int target_t, const MinorSearchOptions& opts, std::uint64_t seed);

}  // namespace bramble_forge
