// bramble-forge: command-line front end for the bramble construction library.
//
// Exit codes: 0 success, 1 certificate failure, 2 usage or parse error,
// 3 exact-search budget exceeded.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bramble_forge/bramble.hpp"
#include "bramble_forge/concurrent_flow.hpp"
#include "bramble_forge/cut_matching.hpp"
#include "bramble_forge/expander_minor.hpp"
#include "bramble_forge/io.hpp"
#include "bramble_forge/path_of_sets.hpp"
#include "bramble_forge/version.hpp"
#include "bramble_forge/walk_sampler.hpp"

namespace bf = bramble_forge;
using bf::Json;

namespace {

enum ExitCode { kOk = 0, kCertificateFailure = 1, kUsage = 2, kBudget = 3 };

// Label of the pipeline stage currently running, used in error messages.
thread_local std::string g_stage;

void stage(const char* name) { g_stage = name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bf::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// JSON when the first non-blank character is '{', DIMACS otherwise. A JSON
// document with a "graph" key (a system file) yields that graph.
bf::Graph load_graph(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const Json j = Json::parse(text);
      return bf::graph_from_json(j.contains("graph") ? j.at("graph") : j);
    } catch (const nlohmann::json::exception& e) {
      throw bf::ParseError(path + ": " + e.what());
    }
  }
  std::istringstream in(text);
  return bf::read_dimacs(in);
}

bf::VertexSet load_vertices(const std::string& path, const bf::Graph& g) {
  bf::VertexSet s = bf::vertex_set_from_json(bf::read_json_file(path));
  for (int v : s)
    if (v < 0 || v >= g.num_vertices()) throw bf::ParseError(path + ": vertex " + std::to_string(v) + " out of range");
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    bf::write_text_file(path, text);
  }
}

std::string join_path(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

Json envelope(const std::string& command, Json config) {
  return Json{{"version", bf::kVersion}, {"command", command}, {"config", std::move(config)}};
}

// q is "coef:i:j" terms separated by commas, e.g. "1" or "2:1:0,1:0:2".
std::vector<bf::PolynomialTerm> parse_q(const std::string& text) {
  std::vector<bf::PolynomialTerm> q;
  std::stringstream terms(text);
  std::string term;
  while (std::getline(terms, term, ',')) {
    bf::PolynomialTerm t;
    std::stringstream parts(term);
    std::string piece;
    std::vector<std::string> fields;
    while (std::getline(parts, piece, ':')) fields.push_back(piece);
    try {
      if (fields.empty() || fields.size() > 3) throw std::invalid_argument(term);
      t.coef = std::stod(fields[0]);
      if (fields.size() > 1) t.x_power = std::stoi(fields[1]);
      if (fields.size() > 2) t.y_power = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw bf::ParseError("bad polynomial term '" + term + "' (expected coef[:i[:j]])");
    }
    q.push_back(t);
  }
  if (q.empty()) throw bf::ParseError("empty polynomial q");
  return q;
}

Json q_json(const std::vector<bf::PolynomialTerm>& q) {
  Json out = Json::array();
  for (const auto& t : q) out.push_back(Json{{"coef", t.coef}, {"x_power", t.x_power}, {"y_power", t.y_power}});
  return out;
}

Json path_list(const std::vector<bf::Path>& paths) {
  Json out = Json::array();
  for (const auto& p : paths) out.push_back(p.vertices);
  return out;
}

Json matching_pairs(const bf::Matching& m) {
  Json out = Json::array();
  for (int v = 0; v < static_cast<int>(m.size()); ++v)
    if (v < m[v]) out.push_back({v, m[v]});
  return out;
}

bf::CutStrategy parse_strategy(const std::string& s) {
  if (s == "projection") return bf::CutStrategy::projection;
  if (s == "random") return bf::CutStrategy::random;
  throw bf::InvalidArgument("unknown cut strategy '" + s + "'");
}

// Validity, congestion and order certificates of a bramble.
struct Certificate {
  Json report;
  bool valid = false;
};

Certificate certify_bramble(const bf::Graph& g, const bf::Bramble& b, std::uint64_t budget, int fractional_iterations) {
  Certificate c;
  const bf::Verdict v = bf::verify_bramble(g, b);
  c.valid = v.ok;
  Json& r = c.report;
  r["valid"] = v.ok;
  if (!v.ok) r["violation"] = v.violation;
  r["size"] = b.size();
  const auto cong = bf::congestion(g, b);
  r["congestion"] = cong.congestion;
  r["congestion_witness"] = cong.witness;
  const auto frac = bf::order_fractional(g, b, fractional_iterations);
  try {
    const auto o = bf::order_exact(g, b, budget);
    r["order"] = o.order;
    r["order_lb"] = frac.value;
    r["hitting_set"] = o.hitting_set;
  } catch (const bf::BudgetExceeded& e) {
    r["order"] = nullptr;
    r["order_bounds"] = {std::max(e.lower_bound(), std::ceil(frac.value - 1e-9)), e.upper_bound()};
    r["order_lb"] = frac.value;
    r["hitting_set"] = nullptr;
  }
  r["greedy_disjoint"] = bf::greedy_disjoint_elements(b);
  return c;
}

Json family_report_json(const bf::FamilyReport& r) {
  Json j{{"family_size", r.family_size},
         {"ell", r.ell},
         {"is_bramble", r.is_bramble},
         {"intersecting_pairs", r.intersecting_pairs},
         {"total_pairs", r.total_pairs},
         {"intersection_fraction", r.intersection_fraction},
         {"congestion", r.congestion},
         {"order_lb", r.order_lb},
         {"greedy_disjoint", r.greedy_disjoint}};
  if (!r.is_bramble) j["violation"] = r.violation;
  j["order"] = r.order_exact ? Json(*r.order_exact) : Json(nullptr);
  if (r.order_bounds) j["order_bounds"] = {r.order_bounds->first, r.order_bounds->second};
  j["hitting_set"] = r.hitting_set;
  return j;
}

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  std::string kind = "grid";
  bf::GenerateParams params;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("generate", "Generate a graph");
    c->add_option("--kind", kind, "grid|clique|cycle|path|star|random_regular|gnp|tree")->required();
    c->add_option("--a", params.a, "grid rows");
    c->add_option("--b", params.b, "grid columns");
    c->add_option("--n", params.n, "vertex count (leaf count for star)");
    c->add_option("--d", params.d, "degree for random_regular");
    c->add_option("--p", params.p, "edge probability for gnp");
    c->add_option("--seed", seed, "random seed");
    c->add_option("--format", format, "json|dimacs")->check(CLI::IsMember({"json", "dimacs"}));
    c->add_option("--out", out, "output file (stdout when omitted)");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("generate");
    const bf::Graph g = bf::generate(kind, params, seed);
    if (format == "dimacs") {
      std::ostringstream ss;
      bf::write_dimacs(ss, g);
      emit(out, ss.str());
    } else {
      emit(out, bf::dump(bf::graph_to_json(g)));
    }
    return kOk;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- certify

struct CertifyCmd {
  std::string graph, bramble, out;
  std::uint64_t budget = bf::kDefaultOrderBudget;
  int fractional_iterations = 2000;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("certify", "Certify a bramble: validity, congestion, order");
    c->add_option("--graph", graph, "graph file (JSON or DIMACS)")->required();
    c->add_option("--bramble", bramble, "bramble JSON")->required();
    c->add_option("--budget", budget, "branch-and-bound node budget");
    c->add_option("--fractional-iterations", fractional_iterations, "iterations of the fractional bound");
    c->add_option("--out", out, "report file (stdout when omitted)");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("certify");
    const bf::Graph g = load_graph(graph);
    const bf::Bramble b = bf::bramble_from_json(bf::read_json_file(bramble));
    for (const auto& e : b.elements)
      for (int v : e)
        if (v < 0 || v >= g.num_vertices()) throw bf::ParseError("bramble vertex " + std::to_string(v) + " out of range");
    Json config{{"graph", graph}, {"bramble", bramble}, {"budget", budget}, {"fractional_iterations", fractional_iterations}};
    auto cert = certify_bramble(g, b, budget, fractional_iterations);
    Json report = envelope("certify", std::move(config));
    report.update(cert.report);
    emit(out, bf::dump(report));
    return cert.valid ? kOk : kCertificateFailure;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- flow

struct FlowCmd {
  std::string graph, hubs, out, report;
  int k = 0;
  int iterations = 20;
  double eta = -1.0;
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("flow", "Solve the concurrent flow between all hub pairs");
    c->add_option("--graph", graph, "graph file")->required();
    c->add_option("--W", hubs, "hub set JSON")->required();
    c->add_option("--k", k, "treewidth parameter k (for beta_eff)")->required();
    c->add_option("--iterations", iterations, "multiplicative-weights iterations");
    c->add_option("--eta", eta, "length exponent; <= 0 selects log2(n)");
    c->add_option("--seed", seed, "random seed");
    c->add_option("--out", out, "flow JSON (stdout when omitted)");
    c->add_option("--report", report, "congestion report JSON");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("flow");
    const bf::Graph g = load_graph(graph);
    const bf::VertexSet w = load_vertices(hubs, g);
    const auto cf = bf::solve_concurrent_flow(g, w, k, {iterations, eta}, seed);
    emit(out, bf::dump(bf::flow_to_json(cf)));
    if (!report.empty()) {
      const auto c = bf::flow_congestion(cf);
      Json r = envelope("flow", Json{{"graph", graph}, {"W", hubs}, {"k", k}, {"iterations", iterations}, {"eta", eta},
                                     {"seed", seed}, {"constants", {{"beta_floor", 1.0 / 9.0}}}});
      r["gamma"] = c.gamma;
      r["argmax"] = c.argmax;
      r["beta_eff"] = cf.beta_eff;
      r["throughput"] = c.throughput;
      emit(report, bf::dump(r));
    }
    return kOk;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- sample / pipeline-b

struct SampleParams {
  std::string graph, hubs, flow;
  int k = 0;
  double delta = 0.5;
  std::optional<int> ell;
  double lambda = 0.1;
  std::optional<int> family;
  int family_cap = 10'000;
  int iterations = 20;
  double eta = -1.0;
  std::uint64_t seed = 0;
  std::uint64_t order_budget = 200'000;
  int fractional_iterations = 2000;
  bool exact = true;

  void attach(CLI::App* c) {
    c->add_option("--graph", graph, "graph file")->required();
    c->add_option("--W", hubs, "hub set JSON")->required();
    c->add_option("--k", k, "treewidth parameter k")->required();
    c->add_option("--delta", delta, "delta in (0, 0.5]");
    c->add_option("--ell", ell, "segments per walk (derived when omitted)");
    c->add_option("--lambda", lambda, "family-size exponent constant");
    c->add_option("--family", family, "family size (derived when omitted)");
    c->add_option("--family-cap", family_cap, "cap on the derived family size");
    c->add_option("--flow", flow, "precomputed flow JSON (solved when omitted)");
    c->add_option("--iterations", iterations, "flow solver iterations");
    c->add_option("--eta", eta, "flow length exponent; <= 0 selects log2(n)");
    c->add_option("--seed", seed, "random seed");
    c->add_option("--order-budget", order_budget, "exact order node budget");
    c->add_option("--fractional-iterations", fractional_iterations, "iterations of the fractional bound");
    c->add_flag("!--no-exact", exact, "skip the exact order search");
  }

  Json config() const {
    return Json{{"graph", graph},
                {"W", hubs},
                {"flow", flow.empty() ? Json(nullptr) : Json(flow)},
                {"k", k},
                {"delta", delta},
                {"ell", ell ? Json(*ell) : Json(nullptr)},
                {"lambda", lambda},
                {"family", family ? Json(*family) : Json(nullptr)},
                {"family_cap", family_cap},
                {"iterations", iterations},
                {"eta", eta},
                {"seed", seed},
                {"order_budget", order_budget},
                {"fractional_iterations", fractional_iterations},
                {"exact", exact},
                {"constants", {{"beta_floor", 1.0 / 9.0}, {"lambda", lambda}}}};
  }
};

struct SampleOutcome {
  Json report;
  Json transcript;
  bf::Bramble bramble;
  bool ok = false;
};

SampleOutcome run_sample(const SampleParams& p, const std::string& command) {
  stage("load");
  const bf::Graph g = load_graph(p.graph);
  const bf::VertexSet w = load_vertices(p.hubs, g);
  bf::ConcurrentFlow cf;
  if (!p.flow.empty()) {
    cf = bf::flow_from_json(bf::read_json_file(p.flow), g.num_vertices());
    if (cf.hubs != w) throw bf::ParseError("flow hubs do not match --W");
    if (auto v = bf::validate_flow(g, cf); !v) throw bf::ParseError("invalid flow: " + v.violation);
  } else {
    stage("flow");
    cf = bf::solve_concurrent_flow(g, w, p.k, {p.iterations, p.eta}, p.seed);
  }
  const auto fc = bf::flow_congestion(cf);

  stage("sample");
  bf::SamplerConfig cfg;
  cfg.k = p.k;
  cfg.delta = p.delta;
  cfg.ell = p.ell;
  cfg.lambda = p.lambda;
  cfg.family = p.family;
  cfg.family_cap = p.family_cap;
  cfg.seed = p.seed;
  if (!(p.delta > 0.0 && p.delta <= 0.5)) throw bf::InvalidArgument("delta must lie in (0, 0.5]");
  if (p.k < 1) throw bf::InvalidArgument("k must be positive");
  bf::CertifyOptions certify{p.order_budget, p.fractional_iterations, p.exact};
  const auto fam = bf::sample_bramble(g, cf, cfg, certify);

  SampleOutcome out;
  Json config = p.config();
  config["ell"] = fam.report.ell;
  config["family"] = fam.report.family_size;
  out.report = envelope(command, std::move(config));
  out.report["flow"] = Json{{"gamma", fc.gamma}, {"argmax", fc.argmax}, {"beta_eff", cf.beta_eff}};
  out.report["certificate"] = family_report_json(fam.report);

  Json walks = Json::array();
  for (std::size_t i = 0; i < fam.walks.size(); ++i) {
    bf::Rng rng = bf::stream_rng(p.seed, i);
    const auto detail = bf::sample_walk_detailed(cf, fam.report.ell, rng);
    walks.push_back(Json{{"hubs", detail.hubs}, {"segments", path_list(detail.segments)}, {"walk", fam.walks[i].vertices}});
  }
  out.transcript = envelope(command, p.config());
  out.transcript["walks"] = std::move(walks);
  out.bramble = fam.bramble;
  out.ok = fam.report.is_bramble;
  return out;
}

struct SampleCmd {
  SampleParams params;
  std::string out;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("sample", "Sample closed walks from a concurrent flow and certify the family");
    params.attach(c);
    c->add_option("--out", out, "family JSON (stdout when omitted)");
    c->callback([this] { code = run(); });
  }

  int run() {
    auto res = run_sample(params, "sample");
    Json doc = res.report;
    doc["walks"] = res.transcript["walks"];
    doc["elements"] = bf::bramble_to_json(res.bramble)["elements"];
    emit(out, bf::dump(doc));
    return res.ok ? kOk : kCertificateFailure;
  }

  int code = kOk;
};

struct PipelineBCmd {
  SampleParams params;
  std::string out_dir = ".";

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("pipeline-b", "Flow, walk sampling and certification; writes bramble, report, transcript");
    params.attach(c);
    c->add_option("--out-dir", out_dir, "output directory");
    c->callback([this] { code = run(); });
  }

  int run() {
    auto res = run_sample(params, "pipeline-b");
    std::filesystem::create_directories(out_dir);
    bf::write_text_file(join_path(out_dir, "bramble.json"), bf::dump(bf::bramble_to_json(res.bramble)));
    bf::write_text_file(join_path(out_dir, "report.json"), bf::dump(res.report));
    bf::write_text_file(join_path(out_dir, "transcript.json"), bf::dump(res.transcript));
    return res.ok ? kOk : kCertificateFailure;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- cutmatch

struct CutmatchParams {
  int h = 0;
  std::uint64_t seed = 0;
  std::string player = "random";
  std::string graph, x;
  std::string strategy = "projection";
  double alpha = 0.25;
  int max_rounds = 0;
  int exact_budget = bf::kDefaultExactExpansionBudget;

  Json config() const {
    return Json{{"h", h},
                {"seed", seed},
                {"player", player},
                {"graph", graph.empty() ? Json(nullptr) : Json(graph)},
                {"X", x.empty() ? Json(nullptr) : Json(x)},
                {"strategy", strategy},
                {"alpha", alpha},
                {"max_rounds", max_rounds > 0 ? max_rounds : (h >= 2 ? bf::default_max_rounds(h) : 0)},
                {"exact_budget", exact_budget},
                {"constants", {{"alpha_target", alpha}}}};
  }
};

struct CutmatchOutcome {
  Json transcript;
  bool converged = false;
};

CutmatchOutcome run_cutmatch(CutmatchParams p) {
  stage("cutmatch");
  std::unique_ptr<bf::MatchingPlayer> player;
  bf::FlowMatchingPlayer* flow_player = nullptr;
  if (p.player == "flow") {
    if (p.graph.empty() || p.x.empty()) throw bf::InvalidArgument("the flow player needs --graph and --X");
    const bf::Graph g = load_graph(p.graph);
    const bf::VertexSet reps = load_vertices(p.x, g);
    if (p.h == 0) p.h = static_cast<int>(reps.size());
    if (static_cast<int>(reps.size()) != p.h) throw bf::InvalidArgument("|X| must equal h");
    auto fp = std::make_unique<bf::FlowMatchingPlayer>(g, reps);
    flow_player = fp.get();
    player = std::move(fp);
  } else if (p.player == "random") {
    player = std::make_unique<bf::RandomMatchingPlayer>(bf::derive_seed(p.seed, 1));
  } else if (p.player == "adversarial") {
    player = std::make_unique<bf::FixedHalvesMatchingPlayer>(p.h);
  } else {
    throw bf::InvalidArgument("unknown player '" + p.player + "'");
  }
  bf::GameOptions opts;
  opts.target_alpha = p.alpha;
  opts.max_rounds = p.max_rounds;
  opts.exact_budget = p.exact_budget;
  opts.strategy = parse_strategy(p.strategy);

  bf::GameResult result;
  CutmatchOutcome out;
  try {
    result = bf::run_game(p.h, *player, opts, p.seed);
    out.converged = true;
  } catch (const bf::MaxRoundsExceeded& e) {
    result = e.partial();
  }
  Json rounds = Json::array();
  for (int i = 0; i < result.rounds; ++i) {
    Json r{{"round", i},
           {"cut", {{"A", result.state.cuts[i].side_a}, {"B", result.state.cuts[i].side_b}}},
           {"matching", matching_pairs(result.state.matchings[i])}};
    if (flow_player) r["linkage"] = path_list(flow_player->linkages()[i].paths);
    rounds.push_back(std::move(r));
  }
  out.transcript = envelope("cutmatch", p.config());
  out.transcript["rounds"] = std::move(rounds);
  out.transcript["rounds_played"] = result.rounds;
  out.transcript["converged"] = out.converged;
  out.transcript["alpha"] = result.certificate.alpha;
  out.transcript["method"] = result.certificate.method == bf::ExpansionCertificate::Method::exact ? "exact" : "spectral";
  out.transcript["max_degree"] = result.state.graph.max_degree();
  return out;
}

struct CutmatchCmd {
  CutmatchParams params;
  std::string out;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("cutmatch", "Play the cut-matching game");
    c->add_option("--h", params.h, "number of game vertices (even); defaults to |X| for the flow player");
    c->add_option("--seed", params.seed, "random seed");
    c->add_option("--player", params.player, "random|flow|adversarial")
        ->check(CLI::IsMember({"random", "flow", "adversarial"}));
    c->add_option("--graph", params.graph, "host graph for the flow player");
    c->add_option("--X", params.x, "well-linked representative set for the flow player");
    c->add_option("--strategy", params.strategy, "projection|random")->check(CLI::IsMember({"projection", "random"}));
    c->add_option("--alpha", params.alpha, "target expansion");
    c->add_option("--max-rounds", params.max_rounds, "round limit; <= 0 selects ceil(4 log2(h)^2)");
    c->add_option("--exact-budget", params.exact_budget, "largest h certified by exact enumeration");
    c->add_option("--out", out, "transcript JSON (stdout when omitted)");
    c->callback([this] { code = run(); });
  }

  int run() {
    auto res = run_cutmatch(params);
    emit(out, bf::dump(res.transcript));
    return res.converged ? kOk : kCertificateFailure;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- embed / pipeline-a

struct EmbedParams {
  double alpha = 0.25;
  std::uint64_t seed = 0;
  int clique_target = 0;
  int attempts = 32;
  int repair_steps = 200;
  std::string strategy = "projection";
  int verify_budget = bf::kDefaultWellLinkedBudget;
  std::uint64_t order_budget = bf::kDefaultOrderBudget;

  void attach(CLI::App* c) {
    c->add_option("--alpha", alpha, "target expansion of the game graph");
    c->add_option("--seed", seed, "random seed");
    c->add_option("--clique-target", clique_target, "cap on the clique size (0: h)");
    c->add_option("--attempts", attempts, "clique-minor search restarts");
    c->add_option("--repair-steps", repair_steps, "local-search steps per restart");
    c->add_option("--strategy", strategy, "projection|random")->check(CLI::IsMember({"projection", "random"}));
    c->add_option("--verify-budget", verify_budget, "well-linkedness budget of the input check");
    c->add_option("--order-budget", order_budget, "exact order node budget");
  }

  Json config() const {
    return Json{{"alpha", alpha},
                {"seed", seed},
                {"clique_target", clique_target},
                {"attempts", attempts},
                {"repair_steps", repair_steps},
                {"strategy", strategy},
                {"verify_budget", verify_budget},
                {"order_budget", order_budget},
                {"constants", {{"alpha_target", alpha}}}};
  }
};

struct EmbedOutcome {
  Json report;
  Json transcript;
  bf::Bramble bramble;
  bool ok = false;
};

Json artifacts_json(const bf::EmbeddingArtifacts& art) {
  Json rounds = Json::array();
  for (int i = 0; i < static_cast<int>(art.matchings.size()); ++i) {
    Json r{{"round", i},
           {"cut", {{"A", art.cuts[i].side_a}, {"B", art.cuts[i].side_b}}},
           {"matching", matching_pairs(art.matchings[i])}};
    if (i < static_cast<int>(art.round_linkages.size())) r["linkage"] = path_list(art.round_linkages[i].paths);
    rounds.push_back(std::move(r));
  }
  Json trees = Json::array();
  for (const auto& t : art.trees) {
    Json edges = Json::array();
    for (const auto& e : t) edges.push_back({e.round, e.u, e.v});
    trees.push_back(std::move(edges));
  }
  return Json{{"rounds_played", art.rounds},
              {"certificate", bf::certificate_to_json(art.certificate)},
              {"rounds", std::move(rounds)},
              {"spines", path_list(art.spines)},
              {"clique", bf::model_to_json(art.clique)["branch_sets"]},
              {"trees", std::move(trees)}};
}

EmbedOutcome run_embed(const bf::PathOfSetsSystem& sys, const EmbedParams& p, const std::string& command, Json config) {
  bf::EmbedOptions opts;
  opts.target_alpha = p.alpha;
  opts.clique_target = p.clique_target;
  opts.minor.attempts = p.attempts;
  opts.minor.repair_steps = p.repair_steps;
  opts.strategy = parse_strategy(p.strategy);
  opts.verify_budget = p.verify_budget;

  EmbedOutcome out;
  out.report = envelope(command, config);
  out.transcript = envelope(command, config);
  stage("embed");
  try {
    auto res = bf::embed_and_assemble(sys, opts, p.seed);
    out.transcript.update(artifacts_json(res.artifacts));
    out.bramble = std::move(res.bramble);
  } catch (const bf::GameNotConverged& e) {
    out.transcript.update(artifacts_json(e.partial()));
    out.report["converged"] = false;
    out.report["error"] = e.what();
    return out;
  }
  stage("certify");
  auto cert = certify_bramble(sys.host, out.bramble, p.order_budget, 2000);
  out.report["converged"] = true;
  out.report["rounds_played"] = out.transcript["rounds_played"];
  out.report["alpha"] = out.transcript["certificate"]["alpha"];
  out.report.update(cert.report);
  out.ok = cert.valid && cert.report["congestion"].get<int>() <= 2;
  return out;
}

struct EmbedCmd {
  EmbedParams params;
  std::string system, out, report, transcript;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("embed", "Embed the cut-matching game into a path-of-sets system");
    c->add_option("--system", system, "path-of-sets system JSON")->required();
    params.attach(c);
    c->add_option("--out", out, "bramble JSON (stdout when omitted)");
    c->add_option("--report", report, "certificate report JSON");
    c->add_option("--transcript", transcript, "game and assembly transcript JSON");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("load");
    const auto sys = bf::system_from_json(bf::read_json_file(system));
    Json config = params.config();
    config["system"] = system;
    auto res = run_embed(sys, params, "embed", std::move(config));
    if (res.report.value("converged", false)) emit(out, bf::dump(bf::bramble_to_json(res.bramble)));
    if (!report.empty()) emit(report, bf::dump(res.report));
    if (!transcript.empty()) emit(transcript, bf::dump(res.transcript));
    if (!res.report.value("converged", false)) std::cerr << "bramble-forge: embed: " << res.report["error"].get<std::string>() << "\n";
    return res.ok ? kOk : kCertificateFailure;
  }

  int code = kOk;
};

struct PipelineACmd {
  EmbedParams params;
  int h = 4;
  int r = 40;
  std::string out_dir = ".";

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("pipeline-a", "Grid path-of-sets system, game embedding and assembly");
    c->add_option("--h", h, "system width")->required();
    c->add_option("--r", r, "system length")->required();
    params.attach(c);
    c->add_option("--out-dir", out_dir, "output directory");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("system");
    const auto sys = bf::grid_system(h, r);
    Json config{{"h", h}, {"r", r}};
    config.update(params.config());
    auto res = run_embed(sys, params, "pipeline-a", std::move(config));
    std::filesystem::create_directories(out_dir);
    bf::write_text_file(join_path(out_dir, "system.json"), bf::dump(bf::system_to_json(sys)));
    if (res.report.value("converged", false))
      bf::write_text_file(join_path(out_dir, "bramble.json"), bf::dump(bf::bramble_to_json(res.bramble)));
    bf::write_text_file(join_path(out_dir, "report.json"), bf::dump(res.report));
    bf::write_text_file(join_path(out_dir, "transcript.json"), bf::dump(res.transcript));
    if (!res.report.value("converged", false))
      std::cerr << "bramble-forge: pipeline-a/embed: " << res.report["error"].get<std::string>() << "\n";
    return res.ok ? kOk : kCertificateFailure;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- gridsys / params

struct GridsysCmd {
  int h = 3;
  int r = 2;
  bool verify = false;
  int budget = bf::kDefaultWellLinkedBudget;
  std::string out;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("gridsys", "Write the strong grid path-of-sets system");
    c->add_option("--h", h, "width")->required();
    c->add_option("--r", r, "length")->required();
    c->add_flag("--verify", verify, "run the strong-system verifier");
    c->add_option("--budget", budget, "well-linkedness budget for --verify");
    c->add_option("--out", out, "system JSON (stdout when omitted)");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("gridsys");
    const auto sys = bf::grid_system(h, r);
    emit(out, bf::dump(bf::system_to_json(sys)));
    if (verify) {
      stage("verify");
      if (auto v = bf::verify_system(sys, true, budget); !v) {
        std::cerr << "bramble-forge: gridsys: " << v.violation << "\n";
        return kCertificateFailure;
      }
    }
    return kOk;
  }

  int code = kOk;
};

Json params_json(long long k, double c, const std::vector<bf::PolynomialTerm>& q) {
  bf::ParameterConstants constants{c, q};
  const auto p = bf::compute_parameters(k, constants);
  Json out = envelope("params", Json{{"k", k}, {"constants", {{"c", c}, {"q", q_json(q)}}}});
  out["h"] = p.h;
  out["r"] = p.r;
  out["f"] = p.f;
  out["f_at_most_k"] = p.f_at_most_k;
  out["degenerate"] = p.degenerate;
  return out;
}

struct ParamsCmd {
  long long k = 0;
  double c = 1.0;
  std::string q = "1";
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("params", "Evaluate the width/length formulas for a given k");
    cmd->add_option("--k", k, "target k")->required();
    cmd->add_option("--c", c, "constant c");
    cmd->add_option("--q", q, "polynomial q as coef[:i[:j]] terms, comma separated");
    cmd->add_option("--out", out, "report JSON (stdout when omitted)");
    cmd->callback([this] { code = run(); });
  }

  int run() {
    stage("params");
    emit(out, bf::dump(params_json(k, c, parse_q(q))));
    return kOk;
  }

  int code = kOk;
};

// ---------------------------------------------------------------- sweep

// A sweep spec names a command, base parameters and axes; cells are the
// cartesian product of the axes in document order. A missing or empty axes
// object, or any empty axis, gives no cells.
struct SweepSpec {
  std::string command;
  Json base;
  std::vector<std::pair<std::string, Json>> axes;
};

SweepSpec parse_sweep(const Json& j) {
  SweepSpec s;
  if (!j.is_object() || !j.contains("command")) throw bf::ParseError("sweep spec needs a 'command'");
  s.command = j.at("command").get<std::string>();
  if (s.command != "sample" && s.command != "cutmatch" && s.command != "pipeline-a" && s.command != "params") {
    throw bf::ParseError("sweep command must be sample, cutmatch, pipeline-a or params");
  }
  s.base = j.value("base", Json::object());
  if (!s.base.is_object()) throw bf::ParseError("sweep 'base' must be an object");
  const Json axes = j.value("axes", Json::object());
  if (!axes.is_object()) throw bf::ParseError("sweep 'axes' must be an object");
  for (const auto& [key, values] : axes.items()) {
    if (!values.is_array()) throw bf::ParseError("sweep axis '" + key + "' must be an array");
    s.axes.emplace_back(key, values);
  }
  return s;
}

std::vector<Json> sweep_cells(const SweepSpec& s) {
  std::vector<Json> cells;
  if (s.axes.empty()) return cells;
  std::size_t total = 1;
  for (const auto& [key, values] : s.axes) total *= values.size();
  for (std::size_t index = 0; index < total; ++index) {
    Json cell = s.base;
    std::size_t rest = index;
    for (auto it = s.axes.rbegin(); it != s.axes.rend(); ++it) {
      const std::size_t m = it->second.size();
      cell[it->first] = it->second[rest % m];
      rest /= m;
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

const std::vector<std::string>& sweep_columns(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> columns{
      {"sample",
       {"cell", "seed", "k", "delta", "ell", "lambda", "family", "iterations", "gamma", "beta_eff", "is_bramble",
        "intersecting_pairs", "total_pairs", "intersection_fraction", "congestion", "order_lb", "greedy_disjoint",
        "order", "order_lower", "order_upper", "status", "error", "version"}},
      {"cutmatch",
       {"cell", "seed", "h", "player", "strategy", "alpha_target", "max_rounds", "rounds", "converged", "alpha",
        "method", "max_degree", "status", "error", "version"}},
      {"pipeline-a",
       {"cell", "seed", "h", "r", "alpha_target", "clique_target", "rounds", "t", "valid", "congestion", "order",
        "order_lb", "status", "error", "version"}},
      {"params", {"cell", "k", "c", "h", "r", "f", "f_at_most_k", "degenerate", "status", "error", "version"}}};
  return columns.at(command);
}

// Graph sources in a sweep spec: a file path, an inline graph object, or a
// generator object with a "kind" key.
bf::Graph sweep_graph(const Json& j, std::uint64_t seed) {
  if (j.is_string()) return load_graph(j.get<std::string>());
  if (j.is_object() && j.contains("kind")) {
    bf::GenerateParams p;
    p.a = j.value("a", 0);
    p.b = j.value("b", 0);
    p.n = j.value("n", 0);
    p.d = j.value("d", 0);
    p.p = j.value("p", 0.0);
    return bf::generate(j.at("kind").get<std::string>(), p, j.value("seed", seed));
  }
  return bf::graph_from_json(j);
}

bf::VertexSet sweep_vertices(const Json& j) {
  if (j.is_string()) return bf::vertex_set_from_json(bf::read_json_file(j.get<std::string>()));
  return bf::vertex_set_from_json(j);
}

template <typename T>
T cell_value(const Json& cell, const char* key, T fallback) {
  if (!cell.contains(key) || cell.at(key).is_null()) return fallback;
  try {
    return cell.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw bf::ParseError(std::string("sweep parameter '") + key + "': " + e.what());
  }
}

class SweepRunner {
 public:
  SweepRunner(SweepSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {}

  // Flows depend only on the graph, hubs and solver settings, so they are
  // solved once per distinct setting before the cells run.
  void prepare(const std::vector<Json>& cells) {
    if (spec_.command != "sample") return;
    for (const Json& cell : cells) {
      const std::string key = flow_key(cell);
      if (flows_.count(key)) continue;
      try {
        const std::uint64_t flow_seed = cell_value<std::uint64_t>(cell, "flow_seed", seed_);
        if (!cell.contains("graph") || !cell.contains("W")) throw bf::ParseError("sample sweeps need 'graph' and 'W'");
        auto g = std::make_shared<bf::Graph>(sweep_graph(cell.at("graph"), flow_seed));
        const bf::VertexSet w = sweep_vertices(cell.at("W"));
        const bf::FlowOptions opts{cell_value(cell, "iterations", 20), cell_value(cell, "eta", -1.0)};
        auto cf = std::make_shared<bf::ConcurrentFlow>(
            bf::solve_concurrent_flow(*g, w, cell_value(cell, "k", 0), opts, flow_seed));
        flows_[key] = {g, cf, ""};
      } catch (const std::exception& e) {
        flows_[key] = {nullptr, nullptr, e.what()};
      }
    }
  }

  Json run_cell(std::size_t index, const Json& cell) const {
    Json row = Json::object();
    for (const auto& c : sweep_columns(spec_.command)) row[c] = nullptr;
    row["cell"] = index;
    row["version"] = bf::kVersion;
    const std::uint64_t seed = cell_value<std::uint64_t>(cell, "seed", bf::derive_seed(seed_, index));
    if (row.contains("seed")) row["seed"] = seed;
    try {
      if (spec_.command == "sample") sample_cell(cell, seed, row);
      if (spec_.command == "cutmatch") cutmatch_cell(cell, seed, row);
      if (spec_.command == "pipeline-a") pipeline_cell(cell, seed, row);
      if (spec_.command == "params") params_cell(cell, row);
      if (row["status"].is_null()) row["status"] = "ok";
    } catch (const std::exception& e) {
      row["status"] = "error";
      row["error"] = e.what();
    }
    return row;
  }

 private:
  struct FlowEntry {
    std::shared_ptr<bf::Graph> graph;
    std::shared_ptr<bf::ConcurrentFlow> flow;
    std::string error;
  };

  std::string flow_key(const Json& cell) const {
    Json key{{"graph", cell.value("graph", Json(nullptr))},
             {"W", cell.value("W", Json(nullptr))},
             {"k", cell.value("k", Json(nullptr))},
             {"iterations", cell.value("iterations", Json(nullptr))},
             {"eta", cell.value("eta", Json(nullptr))},
             {"flow_seed", cell.value("flow_seed", Json(nullptr))}};
    return key.dump();
  }

  void sample_cell(const Json& cell, std::uint64_t seed, Json& row) const {
    const FlowEntry& fe = flows_.at(flow_key(cell));
    const int k = cell_value(cell, "k", 0);
    bf::SamplerConfig cfg;
    cfg.k = k;
    cfg.delta = cell_value(cell, "delta", 0.5);
    if (cell.contains("ell") && !cell["ell"].is_null()) cfg.ell = cell_value(cell, "ell", 1);
    cfg.lambda = cell_value(cell, "lambda", 0.1);
    if (cell.contains("family") && !cell["family"].is_null()) cfg.family = cell_value(cell, "family", 1);
    cfg.family_cap = cell_value(cell, "family_cap", 10'000);
    cfg.seed = seed;
    row["k"] = k;
    row["delta"] = cfg.delta;
    row["lambda"] = cfg.lambda;
    row["iterations"] = cell_value(cell, "iterations", 20);
    if (!fe.flow) throw bf::Error("flow: " + fe.error);
    row["gamma"] = bf::flow_congestion(*fe.flow).gamma;
    row["beta_eff"] = fe.flow->beta_eff;
    if (!(cfg.delta > 0.0 && cfg.delta <= 0.5)) throw bf::InvalidArgument("delta must lie in (0, 0.5]");
    bf::CertifyOptions certify{cell_value<std::uint64_t>(cell, "order_budget", 200'000),
                               cell_value(cell, "fractional_iterations", 2000), cell_value(cell, "exact", true)};
    const auto fam = bf::sample_bramble(*fe.graph, *fe.flow, cfg, certify);
    const auto& r = fam.report;
    row["ell"] = r.ell;
    row["family"] = r.family_size;
    row["is_bramble"] = r.is_bramble;
    row["intersecting_pairs"] = r.intersecting_pairs;
    row["total_pairs"] = r.total_pairs;
    row["intersection_fraction"] = r.intersection_fraction;
    row["congestion"] = r.congestion;
    row["order_lb"] = r.order_lb;
    row["greedy_disjoint"] = r.greedy_disjoint;
    if (r.order_exact) row["order"] = *r.order_exact;
    if (r.order_bounds) {
      row["order_lower"] = r.order_bounds->first;
      row["order_upper"] = r.order_bounds->second;
    }
    if (!r.is_bramble) {
      row["status"] = "not_bramble";
      row["error"] = r.violation;
    }
  }

  void cutmatch_cell(const Json& cell, std::uint64_t seed, Json& row) const {
    CutmatchParams p;
    p.h = cell_value(cell, "h", 0);
    p.seed = seed;
    p.player = cell_value<std::string>(cell, "player", "random");
    p.graph = cell_value<std::string>(cell, "graph", "");
    p.x = cell_value<std::string>(cell, "X", "");
    p.strategy = cell_value<std::string>(cell, "strategy", "projection");
    p.alpha = cell_value(cell, "alpha", 0.25);
    p.max_rounds = cell_value(cell, "max_rounds", 0);
    p.exact_budget = cell_value(cell, "exact_budget", bf::kDefaultExactExpansionBudget);
    row["h"] = p.h;
    row["player"] = p.player;
    row["strategy"] = p.strategy;
    row["alpha_target"] = p.alpha;
    const auto res = run_cutmatch(p);
    const Json& t = res.transcript;
    row["h"] = t["config"]["h"];
    row["max_rounds"] = t["config"]["max_rounds"];
    row["rounds"] = t["rounds_played"];
    row["converged"] = t["converged"];
    row["alpha"] = t["alpha"];
    row["method"] = t["method"];
    row["max_degree"] = t["max_degree"];
    if (!res.converged) row["status"] = "not_converged";
  }

  void pipeline_cell(const Json& cell, std::uint64_t seed, Json& row) const {
    EmbedParams p;
    p.alpha = cell_value(cell, "alpha", 0.25);
    p.seed = seed;
    p.clique_target = cell_value(cell, "clique_target", 0);
    p.attempts = cell_value(cell, "attempts", 32);
    p.repair_steps = cell_value(cell, "repair_steps", 200);
    p.strategy = cell_value<std::string>(cell, "strategy", "projection");
    p.verify_budget = cell_value(cell, "verify_budget", bf::kDefaultWellLinkedBudget);
    p.order_budget = cell_value<std::uint64_t>(cell, "order_budget", bf::kDefaultOrderBudget);
    const int h = cell_value(cell, "h", 4), r = cell_value(cell, "r", 40);
    row["h"] = h;
    row["r"] = r;
    row["alpha_target"] = p.alpha;
    row["clique_target"] = p.clique_target;
    const auto res = run_embed(bf::grid_system(h, r), p, "pipeline-a", Json::object());
    const Json& rep = res.report;
    if (!rep.value("converged", false)) {
      row["status"] = "not_converged";
      row["error"] = rep["error"];
      return;
    }
    row["rounds"] = rep["rounds_played"];
    row["t"] = rep["size"];
    row["valid"] = rep["valid"];
    row["congestion"] = rep["congestion"];
    row["order"] = rep["order"];
    row["order_lb"] = rep["order_lb"];
    if (!res.ok) row["status"] = "certificate_failure";
  }

  void params_cell(const Json& cell, Json& row) const {
    const long long k = cell_value<long long>(cell, "k", 0);
    const double c = cell_value(cell, "c", 1.0);
    row["k"] = k;
    row["c"] = c;
    std::vector<bf::PolynomialTerm> q{{1.0, 0, 0}};
    if (cell.contains("q")) q = parse_q(cell.at("q").get<std::string>());
    const auto p = params_json(k, c, q);
    for (const char* key : {"h", "r", "f", "f_at_most_k", "degenerate"}) row[key] = p[key];
  }

  SweepSpec spec_;
  std::uint64_t seed_;
  std::map<std::string, FlowEntry> flows_;
};

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return v.dump();
}

struct SweepCmd {
  std::string spec_path, out;
  std::string format = "csv";
  int jobs = 1;
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("sweep", "Run a parameter sweep; one row per cell");
    c->add_option("--spec", spec_path, "sweep spec JSON")->required();
    c->add_option("--seed", seed, "seed from which per-cell seeds are derived");
    c->add_option("--jobs", jobs, "concurrent cells")->envname("BRAMBLE_FORGE_JOBS")->check(CLI::PositiveNumber);
    c->add_option("--format", format, "csv|jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    c->add_option("--out", out, "output file (stdout when omitted)");
    c->callback([this] { code = run(); });
  }

  int run() {
    stage("sweep");
    const SweepSpec spec = parse_sweep(bf::read_json_file(spec_path));
    const auto cells = sweep_cells(spec);
    SweepRunner runner(spec, seed);
    runner.prepare(cells);

    std::vector<Json> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next++) < cells.size();) rows[i] = runner.run_cell(i, cells[i]);
    };
    std::vector<std::thread> pool;
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream ss;
    const auto& columns = sweep_columns(spec.command);
    if (format == "csv") {
      for (std::size_t i = 0; i < columns.size(); ++i) ss << (i ? "," : "") << columns[i];
      ss << "\n";
      for (const Json& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) ss << (i ? "," : "") << csv_field(row[columns[i]]);
        ss << "\n";
      }
    } else {
      for (const Json& row : rows) ss << row.dump() << "\n";
    }
    emit(out, ss.str());
    return kOk;
  }

  int code = kOk;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bramble-forge: construct and certify brambles"};
  // Subcommands take --h, so help is --help only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", bf::kVersion);
  app.require_subcommand(1);

  GenerateCmd generate;
  CertifyCmd certify;
  FlowCmd flow;
  SampleCmd sample;
  PipelineBCmd pipeline_b;
  CutmatchCmd cutmatch;
  EmbedCmd embed;
  PipelineACmd pipeline_a;
  GridsysCmd gridsys;
  ParamsCmd params;
  SweepCmd sweep;
  generate.attach(app);
  certify.attach(app);
  flow.attach(app);
  sample.attach(app);
  pipeline_b.attach(app);
  cutmatch.attach(app);
  embed.attach(app);
  pipeline_a.attach(app);
  gridsys.attach(app);
  params.attach(app);
  sweep.attach(app);

  const std::string name = "bramble-forge";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const bf::BudgetExceeded& e) {
    std::cerr << name << ": " << g_stage << ": " << e.what() << " (bounds " << e.lower_bound() << ".."
              << e.upper_bound() << ")\n";
    return kBudget;
  } catch (const bf::ParseError& e) {
    std::cerr << name << ": " << g_stage << ": " << e.what() << "\n";
    return kUsage;
  } catch (const bf::InvalidArgument& e) {
    std::cerr << name << ": " << g_stage << ": " << e.what() << "\n";
    return kUsage;
  } catch (const bf::Error& e) {
    std::cerr << name << ": " << g_stage << ": " << e.what() << "\n";
    return kCertificateFailure;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << g_stage << ": " << e.what() << "\n";
    return kCertificateFailure;
  }
  for (int code : {generate.code, certify.code, flow.code, sample.code, pipeline_b.code, cutmatch.code, embed.code,
                   pipeline_a.code, gridsys.code, params.code, sweep.code}) {
    if (code != kOk) return code;
  }
  return kOk;
}
