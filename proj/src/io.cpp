#include "bramble_forge/io.hpp"

#include <fstream>
#include <sstream>

namespace bramble_forge {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<VertexSet> set_list(const Json& j, const char* key) {
  std::vector<VertexSet> out;
  for (auto& s : field<std::vector<std::vector<int>>>(j, key)) out.push_back(normalize(std::move(s)));
  return out;
}

Json path_list(const std::vector<Path>& paths) {
  Json out = Json::array();
  for (const Path& p : paths) out.push_back(p.vertices);
  return out;
}

}  // namespace

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return Json{{"n", g.num_vertices()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  const int n = field<int>(j, "n");
  std::vector<Edge> edges;
  for (const auto& e : field<std::vector<std::vector<int>>>(j, "edges")) {
    if (e.size() != 2) throw ParseError("edge entries must be pairs");
    edges.emplace_back(std::min(e[0], e[1]), std::max(e[0], e[1]));
  }
  try {
    return Graph(n, edges);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
}

void write_dimacs(std::ostream& out, const Graph& g) {
  out << "p edge " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

Graph read_dimacs(std::istream& in) {
  std::string line;
  int n = -1;
  std::size_t declared = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "p") {
      std::string format;
      if (!(ls >> format >> n >> declared) || (format != "edge" && format != "col")) {
        throw ParseError("bad DIMACS problem line: " + line);
      }
    } else if (tag == "e") {
      int u, v;
      if (n < 0 || !(ls >> u >> v)) throw ParseError("bad DIMACS edge line: " + line);
      if (u < 1 || v < 1 || u > n || v > n) throw ParseError("DIMACS edge out of range: " + line);
      edges.emplace_back(u - 1, v - 1);
    } else {
      throw ParseError("unrecognized DIMACS line: " + line);
    }
  }
  if (n < 0) throw ParseError("DIMACS input has no problem line");
  if (edges.size() != declared) throw ParseError("DIMACS edge count does not match the problem line");
  return Graph::simplified(n, edges);
}

Json bramble_to_json(const Bramble& b) {
  Json el = Json::array();
  for (const auto& e : b.elements) el.push_back(e);
  return Json{{"elements", el}};
}

Bramble bramble_from_json(const Json& j) { return Bramble{set_list(j, "elements")}; }

VertexSet vertex_set_from_json(const Json& j) {
  try {
    if (j.is_array()) return normalize(j.get<std::vector<int>>());
    for (const char* key : {"W", "X", "vertices"})
      if (j.is_object() && j.contains(key)) return normalize(j.at(key).get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad vertex set: ") + e.what());
  }
  throw ParseError("expected a vertex list or an object with key W, X or vertices");
}

Json flow_to_json(const ConcurrentFlow& cf) {
  Json families = Json::array();
  const std::size_t m = cf.hub_count();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Json paths = Json::array();
      for (const auto& wp : cf.family(i, j)) paths.push_back(Json{{"vertices", wp.path.vertices}, {"weight", wp.weight}});
      families.push_back(Json{{"u", cf.hubs[i]}, {"v", cf.hubs[j]}, {"paths", paths}});
    }
  }
  return Json{{"W", cf.hubs}, {"nu", cf.value}, {"beta_eff", cf.beta_eff}, {"families", families}};
}

ConcurrentFlow flow_from_json(const Json& j, int num_vertices) {
  ConcurrentFlow cf;
  cf.num_vertices = num_vertices;
  cf.hubs = field<std::vector<int>>(j, "W");
  cf.value = field<double>(j, "nu");
  cf.beta_eff = field<double>(j, "beta_eff");
  const std::size_t m = cf.hubs.size();
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < m; ++i) {
    if (cf.hubs[i] < 0 || cf.hubs[i] >= num_vertices) throw ParseError("hub out of range");
    if (!pos.emplace(cf.hubs[i], i).second) throw ParseError("duplicate hub");
  }
  cf.families.resize(m * m);
  const auto fams = j.at("families");
  if (!fams.is_array()) throw ParseError("'families' must be an array");
  for (const auto& f : fams) {
    const int u = field<int>(f, "u"), v = field<int>(f, "v");
    if (!pos.count(u) || !pos.count(v)) throw ParseError("family endpoint is not a hub");
    auto& fam = cf.families[pos[u] * m + pos[v]];
    for (const auto& p : f.at("paths")) {
      WeightedPath wp{Path{field<std::vector<int>>(p, "vertices")}, field<double>(p, "weight")};
      for (int x : wp.path.vertices)
        if (x < 0 || x >= num_vertices) throw ParseError("flow path vertex out of range");
      fam.push_back(std::move(wp));
    }
  }
  // Keep the hub order sorted as the solver produces it.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cf.hubs[a] < cf.hubs[b]; });
  ConcurrentFlow sorted = cf;
  for (std::size_t i = 0; i < m; ++i) {
    sorted.hubs[i] = cf.hubs[order[i]];
    for (std::size_t k = 0; k < m; ++k) sorted.families[i * m + k] = cf.families[order[i] * m + order[k]];
  }
  return sorted;
}

Json model_to_json(const MinorModel& m) {
  Json sets = Json::array();
  for (const auto& s : m.branch_sets) sets.push_back(s);
  return Json{{"branch_sets", sets}};
}

MinorModel model_from_json(const Json& j) { return MinorModel{set_list(j, "branch_sets")}; }

Json system_to_json(const PathOfSetsSystem& sys) {
  Json connectors = Json::array();
  for (const Linkage& l : sys.connectors) connectors.push_back(path_list(l.paths));
  return Json{{"graph", graph_to_json(sys.host)}, {"h", sys.h},          {"S", sys.clusters},
              {"A", sys.entries},                 {"B", sys.exits},     {"P", connectors}};
}

PathOfSetsSystem system_from_json(const Json& j) {
  PathOfSetsSystem sys;
  if (!j.is_object() || !j.contains("graph")) throw ParseError("missing key 'graph'");
  sys.host = graph_from_json(j.at("graph"));
  sys.h = field<int>(j, "h");
  sys.clusters = set_list(j, "S");
  sys.entries = set_list(j, "A");
  sys.exits = set_list(j, "B");
  for (const auto& l : field<std::vector<std::vector<std::vector<int>>>>(j, "P")) {
    Linkage link;
    for (const auto& p : l) link.paths.push_back(Path{p});
    sys.connectors.push_back(std::move(link));
  }
  return sys;
}

Json certificate_to_json(const ExpansionCertificate& c) {
  Json j{{"alpha", c.alpha}, {"method", c.method == ExpansionCertificate::Method::exact ? "exact" : "spectral"}};
  if (c.witness_cut) j["witness_cut"] = *c.witness_cut;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace bramble_forge
