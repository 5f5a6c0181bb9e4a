#include "bramble_forge/bramble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bitset.hpp"

namespace bramble_forge {

using detail::DynamicBitset;

Verdict verify_bramble(const Graph& g, const Bramble& b) {
  const int n = g.num_vertices();
  std::vector<DynamicBitset> members, closed;
  members.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& e = b.elements[i];
    for (int v : e)
      if (v < 0 || v >= n) return Verdict::fail("element " + std::to_string(i) + " has a vertex out of range");
    if (!is_connected_subset(g, e)) {
      return Verdict::fail("element " + std::to_string(i) + (e.empty() ? " is empty" : " is not connected"));
    }
    DynamicBitset m(n), c(n);
    for (int v : e) {
      m.set(v);
      c.set(v);
      for (int w : g.neighbors(v)) c.set(w);
    }
    members.push_back(std::move(m));
    closed.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      if (!members[i].intersects(closed[j])) {
        return Verdict::fail("elements " + std::to_string(i) + " and " + std::to_string(j) + " do not touch");
      }
    }
  }
  return Verdict::pass();
}

CongestionResult congestion(const Graph& g, const Bramble& b) {
  std::vector<int> count(g.num_vertices(), 0);
  for (const auto& e : b.elements)
    for (int v : normalize(e)) ++count[v];
  CongestionResult out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (count[v] > out.congestion) {
      out.congestion = count[v];
      out.witness = v;
    }
  }
  return out;
}

int greedy_disjoint_elements(const Bramble& b) {
  std::vector<VertexSet> sets;
  for (const auto& e : b.elements) sets.push_back(normalize(e));
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sets[x].size() < sets[y].size(); });
  std::vector<int> taken;
  int count = 0;
  for (auto i : order) {
    if (sets[i].empty()) continue;
    bool clash = false;
    for (int v : sets[i])
      if (std::binary_search(taken.begin(), taken.end(), v)) clash = true;
    if (clash) continue;
    ++count;
    taken.insert(taken.end(), sets[i].begin(), sets[i].end());
    std::sort(taken.begin(), taken.end());
  }
  return count;
}

namespace {

class HittingSetSearch {
 public:
  HittingSetSearch(int n, std::vector<DynamicBitset> sets, std::uint64_t budget)
      : n_(n), sets_(std::move(sets)), budget_(budget), excluded_(n) {}

  OrderResult run() {
    std::vector<int> unhit(sets_.size());
    std::iota(unhit.begin(), unhit.end(), 0);
    greedy_upper_bound(unhit);
    root_lower_ = packing_bound(unhit);
    std::vector<int> chosen;
    search(unhit, chosen);
    OrderResult out;
    out.order = static_cast<int>(best_.size());
    out.hitting_set = normalize(best_);
    out.nodes = nodes_;
    return out;
  }

 private:
  void greedy_upper_bound(std::vector<int> unhit) {
    best_.clear();
    while (!unhit.empty()) {
      std::vector<int> cover(n_, 0);
      for (int i : unhit) sets_[i].for_each([&](int v) { ++cover[v]; });
      const int v = static_cast<int>(std::max_element(cover.begin(), cover.end()) - cover.begin());
      best_.push_back(v);
      std::erase_if(unhit, [&](int i) { return sets_[i].test(v); });
    }
  }

  // Pairwise disjoint (on allowed vertices) unhit elements, smallest first.
  int packing_bound(const std::vector<int>& unhit) const {
    std::vector<std::pair<int, int>> sized;
    for (int i : unhit) sized.emplace_back(sets_[i].count_excluding(excluded_), i);
    std::sort(sized.begin(), sized.end());
    DynamicBitset used(n_);
    int count = 0;
    for (auto [sz, i] : sized) {
      if (sets_[i].intersects_excluding(used, excluded_)) continue;
      used |= sets_[i];
      ++count;
    }
    return count;
  }

  void search(const std::vector<int>& unhit, std::vector<int>& chosen) {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("order_exact: branch budget of " + std::to_string(budget_) + " nodes exhausted",
                           root_lower_, static_cast<double>(best_.size()));
    }
    if (unhit.empty()) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    if (chosen.size() + static_cast<std::size_t>(packing_bound(unhit)) >= best_.size()) return;

    int pick = -1, pick_size = n_ + 1;
    for (int i : unhit) {
      const int sz = sets_[i].count_excluding(excluded_);
      if (sz < pick_size) {
        pick_size = sz;
        pick = i;
      }
    }
    if (pick_size == 0) return;

    std::vector<std::pair<int, int>> candidates;  // (-coverage, vertex)
    sets_[pick].for_each([&](int v) {
      if (excluded_.test(v)) return;
      int cov = 0;
      for (int i : unhit) cov += sets_[i].test(v);
      candidates.emplace_back(-cov, v);
    });
    std::sort(candidates.begin(), candidates.end());

    std::vector<int> newly_excluded;
    for (auto [negcov, v] : candidates) {
      std::vector<int> rest;
      rest.reserve(unhit.size());
      for (int i : unhit)
        if (!sets_[i].test(v)) rest.push_back(i);
      chosen.push_back(v);
      search(rest, chosen);
      chosen.pop_back();
      // Later siblings assume v is not in the hitting set.
      excluded_.set(v);
      newly_excluded.push_back(v);
      if (chosen.size() + 1 >= best_.size()) break;
    }
    for (int v : newly_excluded) excluded_.reset(v);
  }

  int n_;
  std::vector<DynamicBitset> sets_;
  std::uint64_t budget_;
  DynamicBitset excluded_;
  std::vector<int> best_;
  std::uint64_t nodes_ = 0;
  int root_lower_ = 0;
};

}  // namespace

OrderResult order_exact(const Graph& g, const Bramble& b, std::uint64_t budget) {
  const int n = g.num_vertices();
  std::vector<DynamicBitset> sets;
  for (const auto& e : b.elements) {
    if (e.empty()) throw InvalidArgument("order_exact: empty element has no hitting set");
    DynamicBitset s(n);
    for (int v : e) {
      if (v < 0 || v >= n) throw InvalidArgument("order_exact: vertex out of range");
      s.set(v);
    }
    sets.push_back(std::move(s));
  }
  // A superset is hit whenever its subset is; keep only minimal distinct sets.
  std::vector<DynamicBitset> minimal;
  std::vector<std::size_t> idx(sets.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return sets[x].count() < sets[y].count(); });
  for (auto i : idx) {
    bool dominated = false;
    for (const auto& m : minimal)
      if (m.is_subset_of(sets[i])) {
        dominated = true;
        break;
      }
    if (!dominated) minimal.push_back(sets[i]);
  }
  OrderResult out = HittingSetSearch(n, std::move(minimal), budget).run();
  for (const auto& e : b.elements) {
    bool hit = false;
    for (int v : e) hit = hit || std::binary_search(out.hitting_set.begin(), out.hitting_set.end(), v);
    if (!hit) throw Error("internal: hitting set certificate misses an element");
  }
  return out;
}

FractionalOrder order_fractional(const Graph& g, const Bramble& b, int iterations) {
  const int n = g.num_vertices();
  const std::size_t s = b.size();
  FractionalOrder out;
  out.packing.assign(s, 0.0);
  if (s == 0) return out;
  std::vector<VertexSet> sets;
  for (const auto& e : b.elements) sets.push_back(normalize(e));

  // Multiplicative weights on vertex lengths: repeatedly pack the element of
  // minimum current length, then scale to feasibility.
  constexpr double eps = 0.1;
  std::vector<double> length(n, 1.0);
  std::vector<double> y(s, 0.0);
  for (int t = 0; t < iterations; ++t) {
    std::size_t best = s;
    double best_len = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s; ++i) {
      if (sets[i].empty()) continue;
      double len = 0.0;
      for (int v : sets[i]) len += length[v];
      if (len < best_len) {
        best_len = len;
        best = i;
      }
    }
    if (best == s) break;
    y[best] += 1.0;
    double peak = 0.0;
    for (int v : sets[best]) {
      length[v] *= std::exp(eps);
      peak = std::max(peak, length[v]);
    }
    if (peak > 1e100) {
      for (double& l : length) l /= peak;
    }
  }
  std::vector<double> load(n, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (int v : sets[i]) load[v] += y[i];
  const double peak = *std::max_element(load.begin(), load.end());
  if (peak > 0) {
    for (double& yi : y) yi /= peak;
    for (double& l : load) l /= peak;
  }
  // Raise each element by its remaining slack; keeps the packing feasible.
  for (std::size_t i = 0; i < s; ++i) {
    if (sets[i].empty()) continue;
    double slack = std::numeric_limits<double>::infinity();
    for (int v : sets[i]) slack = std::min(slack, 1.0 - load[v]);
    if (slack > 0) {
      y[i] += slack;
      for (int v : sets[i]) load[v] += slack;
    }
  }
  out.packing = y;
  long double total = 0.0L;
  for (double yi : y) total += yi;
  out.value = static_cast<double>(total);
  return out;
}

Bramble lift_bramble(const Graph& host, const Graph& branch, const SubdivisionModel& m, const Bramble& b) {
  if (auto v = is_subdivision_model(host, branch, m); !v) {
    throw InvalidArgument("lift_bramble: invalid subdivision model: " + v.violation);
  }
  Bramble out;
  for (const auto& element : b.elements) {
    std::vector<char> inside(branch.num_vertices(), 0);
    VertexSet lifted;
    for (int v : element) {
      inside[v] = 1;
      lifted.push_back(m.vertex_map[v]);
    }
    for (const auto& [e, p] : m.edge_map) {
      if (!inside[e.first]) continue;
      for (std::size_t i = 1; i + 1 < p.size(); ++i) lifted.push_back(p.vertices[i]);
    }
    out.elements.push_back(normalize(std::move(lifted)));
  }
  return out;
}

Bramble grid_cross_bramble(int n) {
  if (n < 1) throw InvalidArgument("grid_cross_bramble needs n >= 1");
  Bramble b;
  if (n == 1) {
    b.elements.push_back({0});
    return b;
  }
  auto at = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      VertexSet cross;
      for (int c = 0; c + 1 < n; ++c) cross.push_back(at(i, c));
      for (int r = 0; r + 1 < n; ++r) cross.push_back(at(r, j));
      b.elements.push_back(normalize(std::move(cross)));
    }
  }
  VertexSet bottom, right;
  for (int c = 0; c < n; ++c) bottom.push_back(at(n - 1, c));
  for (int r = 0; r + 1 < n; ++r) right.push_back(at(r, n - 1));
  b.elements.push_back(bottom);
  b.elements.push_back(right);
  return b;
}

}  // namespace bramble_forge
