#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bramble_forge/graph.hpp"

namespace bramble_forge {

/// Family of connected vertex sets over a host graph, pairwise touching.
struct Bramble {
  std::vector<VertexSet> elements;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
  friend bool operator==(const Bramble&, const Bramble&) = default;
};

/// Connectivity of every element and pairwise touching (intersecting or
/// joined by a host edge). The violation names the element or pair.
Verdict verify_bramble(const Graph& g, const Bramble& b);

struct CongestionResult {
  int congestion = 0;
  int witness = -1;  // a vertex attaining the maximum; -1 for an empty bramble
};

/// Maximum number of elements containing a single vertex.
CongestionResult congestion(const Graph& g, const Bramble& b);

struct OrderResult {
  int order = 0;
  VertexSet hitting_set;
  std::uint64_t nodes = 0;  // branch nodes explored
};

inline constexpr std::uint64_t kDefaultOrderBudget = 10'000'000;

/// Minimum hitting set by branch and bound. Throws BudgetExceeded carrying
/// the best (lower, upper) bounds when the node budget runs out.
OrderResult order_exact(const Graph& g, const Bramble& b, std::uint64_t budget = kDefaultOrderBudget);

struct FractionalOrder {
  double value = 0.0;              // certified lower bound: a feasible fractional packing
  std::vector<double> packing;     // dual weight per element
};

/// Lower bound from the fractional hitting-set LP, certified by a feasible
/// fractional packing of the elements (no vertex covered more than once).
FractionalOrder order_fractional(const Graph& g, const Bramble& b, int iterations = 2000);

/// Size of a greedily chosen family of pairwise disjoint elements.
int greedy_disjoint_elements(const Bramble& b);

/// Lifts a bramble of `branch` through a subdivision model into `host`.
/// The interior of the path for branch edge {u, v}, u < v, joins every
/// element containing u. Throws InvalidArgument on an invalid model.
Bramble lift_bramble(const Graph& host, const Graph& branch, const SubdivisionModel& m, const Bramble& b);

/// Cross bramble of the n x n grid: the crosses of the top-left
/// (n-1) x (n-1) subgrid, the bottom row and the right column minus its
/// bottom corner. Order n + 1 for n >= 2.
Bramble grid_cross_bramble(int n);

}  // namespace bramble_forge
