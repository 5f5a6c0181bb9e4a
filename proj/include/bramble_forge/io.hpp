#pragma once

#include <iosfwd>
#include <string>

#include "bramble_forge/bramble.hpp"
#include "bramble_forge/concurrent_flow.hpp"
#include "bramble_forge/cut_matching.hpp"
#include "bramble_forge/expander_minor.hpp"
#include "bramble_forge/graph.hpp"
#include "bramble_forge/path_of_sets.hpp"
#include "json.hpp"

namespace bramble_forge {

using Json = nlohmann::ordered_json;

/// Thrown for malformed input documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Graph: {"n": int, "edges": [[u, v], ...]}, u < v, lexicographic.
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

// DIMACS edge format: "p edge n m" then "e u v" lines, 1-based; "c" comments.
void write_dimacs(std::ostream& out, const Graph& g);
Graph read_dimacs(std::istream& in);

// Bramble: {"elements": [[v, ...], ...]}.
Json bramble_to_json(const Bramble& b);
Bramble bramble_from_json(const Json& j);

// Vertex set: either [v, ...] or an object with a "W" / "X" / "vertices" key.
VertexSet vertex_set_from_json(const Json& j);

// Flow: {"W": [...], "nu": 1.0, "beta_eff": x, "families": [{"u":, "v":, "paths": [{"vertices": [...], "weight": w}]}]}.
Json flow_to_json(const ConcurrentFlow& cf);
ConcurrentFlow flow_from_json(const Json& j, int num_vertices);

// Model: {"branch_sets": [[v, ...], ...]}.
Json model_to_json(const MinorModel& m);
MinorModel model_from_json(const Json& j);

// System: {"graph": {...}, "h": h, "S": [...], "A": [...], "B": [...], "P": [[[path], ...], ...]}.
Json system_to_json(const PathOfSetsSystem& sys);
PathOfSetsSystem system_from_json(const Json& j);

Json certificate_to_json(const ExpansionCertificate& c);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string dump(const Json& j);

}  // namespace bramble_forge
