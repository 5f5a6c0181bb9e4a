#include "bramble_forge/walk_sampler.hpp"

#include <algorithm>
#include <cmath>

namespace bramble_forge {

int derived_ell(int k, double delta, double beta_eff) {
  if (k < 1 || !(beta_eff > 0)) throw InvalidArgument("derived_ell needs k >= 1 and beta_eff > 0");
  const double raw = std::pow(static_cast<double>(k), 0.5 + delta) / (72.0 * beta_eff);
  return std::max(1, static_cast<int>(std::floor(raw)));
}

int derived_family_size(int k, double delta, double lambda, int cap) {
  const double raw = std::exp(lambda * std::pow(static_cast<double>(k), 2.0 * delta));
  const double capped = std::min(static_cast<double>(cap), std::floor(raw));
  return std::max(1, static_cast<int>(capped));
}

int resolve_ell(const SamplerConfig& cfg, double beta_eff) {
  if (cfg.ell) {
    if (*cfg.ell < 1) throw InvalidArgument("ell must be at least 1");
    return *cfg.ell;
  }
  return derived_ell(cfg.k, cfg.delta, beta_eff);
}

int resolve_family_size(const SamplerConfig& cfg) {
  if (cfg.family) {
    if (*cfg.family < 1) throw InvalidArgument("family size must be at least 1");
    return *cfg.family;
  }
  return derived_family_size(cfg.k, cfg.delta, cfg.lambda, cfg.family_cap);
}

const Path& sample_family_path(const ConcurrentFlow& cf, std::size_t i, std::size_t j, Rng& rng) {
  const auto& fam = cf.family(i, j);
  double total = 0.0;
  for (const auto& wp : fam) total += wp.weight;
  const double target = uniform_real(rng) * total;
  double acc = 0.0;
  for (const auto& wp : fam) {
    acc += wp.weight;
    if (target < acc) return wp.path;
  }
  return fam.back().path;
}

Path sample_segment(const ConcurrentFlow& cf, Rng& rng) {
  const std::size_t m = cf.hub_count();
  const std::size_t i = uniform_index(rng, m);
  const std::size_t j = uniform_index(rng, m);
  return sample_family_path(cf, i, j, rng);
}

WalkSample sample_walk_detailed(const ConcurrentFlow& cf, int ell, Rng& rng) {
  if (ell < 1) throw InvalidArgument("walk needs ell >= 1");
  const std::size_t m = cf.hub_count();
  if (m == 0) throw InvalidArgument("walk needs a nonempty hub set");
  std::vector<std::size_t> idx(ell);
  for (auto& i : idx) i = uniform_index(rng, m);
  WalkSample out;
  out.walk.closed = true;
  for (int s = 0; s < ell; ++s) {
    out.hubs.push_back(cf.hubs[idx[s]]);
    const Path& p = sample_family_path(cf, idx[s], idx[(s + 1) % ell], rng);
    const auto skip = out.walk.vertices.empty() ? 0 : 1;
    out.walk.vertices.insert(out.walk.vertices.end(), p.vertices.begin() + skip, p.vertices.end());
    out.segments.push_back(p);
  }
  return out;
}

Walk sample_walk(const ConcurrentFlow& cf, int ell, Rng& rng) { return sample_walk_detailed(cf, ell, rng).walk; }

std::vector<double> hit_probabilities(const ConcurrentFlow& cf) {
  auto t = flow_congestion(cf).throughput;
  const double pairs = static_cast<double>(cf.hub_count() * cf.hub_count());
  for (double& v : t) v /= pairs;
  return t;
}

double hit_probability(const ConcurrentFlow& cf, int x) {
  if (x < 0 || x >= cf.num_vertices) throw InvalidArgument("vertex out of range");
  long double acc = 0.0L;
  for (const auto& fam : cf.families)
    for (const auto& wp : fam)
      if (std::find(wp.path.vertices.begin(), wp.path.vertices.end(), x) != wp.path.vertices.end()) acc += wp.weight;
  return static_cast<double>(acc / (static_cast<long double>(cf.hub_count()) * cf.hub_count()));
}

SampledFamily sample_bramble(const Graph& g, const ConcurrentFlow& cf, const SamplerConfig& cfg,
                             const CertifyOptions& certify) {
  const int ell = resolve_ell(cfg, cf.beta_eff);
  const int size = resolve_family_size(cfg);
  SampledFamily out;
  out.walks.reserve(size);
  for (int w = 0; w < size; ++w) {
    Rng rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(w));
    out.walks.push_back(sample_walk(cf, ell, rng));
    out.bramble.elements.push_back(normalize(out.walks.back().vertices));
  }

  FamilyReport& r = out.report;
  r.family_size = size;
  r.ell = ell;
  const Verdict v = verify_bramble(g, out.bramble);
  r.is_bramble = v.ok;
  r.violation = v.violation;
  const auto& el = out.bramble.elements;
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      ++r.total_pairs;
      std::vector<int> common;
      std::set_intersection(el[i].begin(), el[i].end(), el[j].begin(), el[j].end(), std::back_inserter(common));
      if (!common.empty()) ++r.intersecting_pairs;
    }
  }
  r.intersection_fraction =
      r.total_pairs == 0 ? 1.0 : static_cast<double>(r.intersecting_pairs) / static_cast<double>(r.total_pairs);
  r.congestion = congestion(g, out.bramble).congestion;
  r.order_lb = order_fractional(g, out.bramble, certify.fractional_iterations).value;
  r.greedy_disjoint = greedy_disjoint_elements(out.bramble);
  if (certify.exact) {
    try {
      const OrderResult o = order_exact(g, out.bramble, certify.order_budget);
      r.order_exact = o.order;
      r.hitting_set = o.hitting_set;
    } catch (const BudgetExceeded& e) {
      r.order_bounds = std::make_pair(std::max(e.lower_bound(), std::ceil(r.order_lb - 1e-9)), e.upper_bound());
    }
  }
  return out;
}

ProportionEstimate wilson_interval(std::size_t successes, std::size_t trials) {
  ProportionEstimate e;
  e.trials = trials;
  e.successes = successes;
  if (trials == 0) {
    e.hi = 1.0;
    return e;
  }
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  e.p = p;
  e.lo = std::max(0.0, centre - half);
  e.hi = std::min(1.0, centre + half);
  return e;
}

ProportionEstimate estimate_miss_probability(const ConcurrentFlow& cf, int ell, const VertexSet& x,
                                             std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("estimate needs at least one trial");
  std::vector<char> in_x(cf.num_vertices, 0);
  for (int v : x) in_x.at(v) = 1;
  std::size_t misses = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = stream_rng(seed, t);
    const Walk w = sample_walk(cf, ell, rng);
    bool hit = false;
    for (int v : w.vertices) hit = hit || in_x[v];
    misses += hit ? 0 : 1;
  }
  return wilson_interval(misses, trials);
}

}  // namespace bramble_forge
