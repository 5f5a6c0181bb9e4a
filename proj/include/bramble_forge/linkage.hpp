#pragma once

#include <optional>
#include <vector>

#include "bramble_forge/graph.hpp"

namespace bramble_forge {

/// Pairwise vertex-disjoint paths.
struct Linkage {
  std::vector<Path> paths;
};

/// Checks that `l` is an A-B-linkage in g - forbidden: |paths| = |A| = |B|,
/// pairwise disjoint, each path from A to B, internally avoiding A, B and
/// forbidden.
Verdict validate_linkage(const Graph& g, const Linkage& l, const VertexSet& a, const VertexSet& b,
                         const VertexSet& forbidden = {});

/// Maximum number of vertex-disjoint A-B paths in g - forbidden (unit vertex
/// capacities, endpoints included).
int max_disjoint_paths(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& forbidden = {});

/// An A-B-linkage in g - forbidden, or nullopt when none exists (Menger-exact).
/// Throws InvalidArgument when |a| != |b| or the three sets overlap.
std::optional<Linkage> find_linkage(const Graph& g, const VertexSet& a, const VertexSet& b,
                                    const VertexSet& forbidden = {});

struct WellLinkedResult {
  bool well_linked = true;
  VertexSet violating_a;  // set when well_linked is false
  VertexSet violating_b;
  explicit operator bool() const { return well_linked; }
};

inline constexpr int kDefaultWellLinkedBudget = 12;

/// Exhaustive well-linkedness test over all disjoint equal-size A, B within x.
/// Throws BudgetExceeded when |x| > budget.
WellLinkedResult is_well_linked(const Graph& g, const VertexSet& x, int budget = kDefaultWellLinkedBudget);

/// For every A within `a_side` and B within `b_side` of equal size, an A-B
/// linkage exists in g (no vertices forbidden). Used for the interface
/// property of path-of-sets clusters. Throws BudgetExceeded past the budget.
WellLinkedResult is_linked_between(const Graph& g, const VertexSet& a_side, const VertexSet& b_side,
                                   int budget = kDefaultWellLinkedBudget);

}  // namespace bramble_forge
