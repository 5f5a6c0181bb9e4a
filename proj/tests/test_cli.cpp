#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bramble_forge/bramble.hpp"
#include "bramble_forge/io.hpp"
#include "doctest.h"

using namespace bramble_forge;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::current_path() / "cli_work";

int run(const std::string& args) {
  fs::create_directories(kDir);
  const std::string cmd = "cd \"" + kDir.string() + "\" && \"" BRAMBLE_FORGE_CLI "\" " + args + " >out.txt 2>err.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
  std::ifstream in(kDir / name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const std::string& name, const std::string& text) {
  fs::create_directories(kDir);
  std::ofstream(kDir / name, std::ios::binary) << text;
}

Json load(const std::string& name) { return Json::parse(slurp(name)); }

}  // namespace

TEST_CASE("usage and parse errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("certify --graph g.json") == 2);
  put("broken.json", "{\"n\": 3, \"edges\": [[0,");
  put("b.json", "{\"elements\": [[0]]}");
  CHECK(run("certify --graph broken.json --bramble b.json") == 2);
  CHECK(slurp("err.txt").find("certify") != std::string::npos);
  put("bad.dimacs", "p edge 2 1\ne 1 5\n");
  CHECK(run("certify --graph bad.dimacs --bramble b.json") == 2);
  CHECK(run("--version") == 0);
  CHECK(slurp("out.txt") == "0.1.0\n");
  CHECK(run("--help") == 0);
}

TEST_CASE("generate and certify") {
  REQUIRE(run("generate --kind clique --n 4 --out k4.json") == 0);
  put("singletons.json", R"({"elements": [[0], [1], [2], [3]]})");
  REQUIRE(run("certify --graph k4.json --bramble singletons.json --out r.json") == 0);
  const Json r = load("r.json");
  CHECK(r["valid"] == true);
  CHECK(r["order"] == 4);
  CHECK(r["congestion"] == 1);
  CHECK(r["version"] == "0.1.0");

  REQUIRE(run("generate --kind grid --a 3 --b 3 --format dimacs --out g3.dimacs") == 0);
  CHECK(slurp("g3.dimacs").rfind("p edge 9 12\n", 0) == 0);
  put("not.json", R"({"elements": [[0], [8]]})");
  CHECK(run("certify --graph g3.dimacs --bramble not.json --out r.json") == 1);
  CHECK(load("r.json")["valid"] == false);

  put("cross.json", bramble_to_json(grid_cross_bramble(3)).dump());
  REQUIRE(run("certify --graph g3.dimacs --bramble cross.json --out r.json") == 0);
  CHECK(load("r.json")["order"] == 4);
}

TEST_CASE("budget exhaustion exits with 3") {
  CHECK(run("gridsys --h 13 --r 1 --verify --out big.json") == 3);
  CHECK(slurp("err.txt").find("verify") != std::string::npos);
  // The order search reports bounds instead of failing.
  REQUIRE(run("generate --kind grid --a 6 --b 6 --out g6.json") == 0);
  put("cross6.json", bramble_to_json(grid_cross_bramble(6)).dump());
  REQUIRE(run("certify --graph g6.json --bramble cross6.json --budget 1 --out r.json") == 0);
  const Json r = load("r.json");
  CHECK(r["order"].is_null());
  CHECK(r["order_bounds"][0].get<double>() <= 7);
  CHECK(r["order_bounds"][1].get<double>() >= 7);
}

TEST_CASE("outputs are byte-identical across reruns") {
  REQUIRE(run("generate --kind grid --a 8 --b 8 --out g8.json") == 0);
  put("w8.json", R"({"W": [0, 8, 16, 24, 32, 40, 48, 56]})");
  REQUIRE(run("sample --graph g8.json --W w8.json --k 24 --ell 4 --family 12 --seed 5 --out s1.json") == 0);
  REQUIRE(run("sample --graph g8.json --W w8.json --k 24 --ell 4 --family 12 --seed 5 --out s2.json") == 0);
  CHECK(slurp("s1.json") == slurp("s2.json"));
  REQUIRE(run("sample --graph g8.json --W w8.json --k 24 --ell 4 --family 12 --seed 6 --out s3.json") == 0);
  CHECK(slurp("s1.json") != slurp("s3.json"));

  REQUIRE(run("pipeline-a --h 4 --r 40 --seed 3 --out-dir pa1") == 0);
  REQUIRE(run("pipeline-a --h 4 --r 40 --seed 3 --out-dir pa2") == 0);
  for (const char* f : {"system.json", "bramble.json", "report.json", "transcript.json"})
    CHECK(slurp(std::string("pa1/") + f) == slurp(std::string("pa2/") + f));

  REQUIRE(run("cutmatch --h 16 --seed 4 --out c1.json") == 0);
  REQUIRE(run("cutmatch --h 16 --seed 4 --out c2.json") == 0);
  CHECK(slurp("c1.json") == slurp("c2.json"));
}

TEST_CASE("flow file feeds sample") {
  put("w8.json", R"({"W": [0, 8, 16, 24, 32, 40, 48, 56]})");
  REQUIRE(run("generate --kind grid --a 8 --b 8 --out g8.json") == 0);
  REQUIRE(run("flow --graph g8.json --W w8.json --k 24 --seed 5 --out f.json --report fr.json") == 0);
  CHECK(load("fr.json")["gamma"].get<double>() >= 1.0);
  REQUIRE(run("sample --graph g8.json --W w8.json --k 24 --ell 4 --family 12 --seed 5 --flow f.json --out s4.json") ==
          0);
  REQUIRE(run("sample --graph g8.json --W w8.json --k 24 --ell 4 --family 12 --seed 5 --out s5.json") == 0);
  CHECK(load("s4.json")["elements"] == load("s5.json")["elements"]);
  put("w_other.json", R"({"W": [1, 8]})");
  CHECK(run("sample --graph g8.json --W w_other.json --k 24 --flow f.json") == 2);
}

TEST_CASE("pipeline-b with a single walk") {
  REQUIRE(run("generate --kind grid --a 6 --b 6 --out g6.json") == 0);
  put("w6.json", R"([0, 6, 12, 18])");
  REQUIRE(run("pipeline-b --graph g6.json --W w6.json --k 12 --family 1 --seed 2 --out-dir pb") == 0);
  const Json rep = load("pb/report.json");
  CHECK(rep["certificate"]["family_size"] == 1);
  CHECK(rep["certificate"]["is_bramble"] == true);
  CHECK(rep["certificate"]["order"] == 1);
  CHECK(load("pb/bramble.json")["elements"].size() == 1);
  const Json tr = load("pb/transcript.json");
  REQUIRE(tr["walks"].size() == 1);
  CHECK(tr["walks"][0]["segments"].size() == tr["walks"][0]["hubs"].size());
}

TEST_CASE("cutmatch transcripts and exit codes") {
  REQUIRE(run("cutmatch --h 8 --seed 1 --out c.json") == 0);
  const Json c = load("c.json");
  CHECK(c["converged"] == true);
  CHECK(c["max_degree"] == c["rounds_played"]);
  CHECK(c["rounds"].size() == c["rounds_played"].get<std::size_t>());
  CHECK(c["rounds"][0]["matching"].size() == 4);
  CHECK(run("cutmatch --h 8 --alpha 50 --max-rounds 3 --out c.json") == 1);
  CHECK(load("c.json")["rounds_played"] == 3);
  CHECK(run("cutmatch --h 7") == 2);
  CHECK(run("cutmatch --h 8 --player flow") == 2);
}

TEST_CASE("gridsys and params") {
  CHECK(run("gridsys --h 3 --r 2 --verify --out sys.json") == 0);
  CHECK(load("sys.json")["S"].size() == 2);
  CHECK(run("gridsys --h 1 --r 2 --verify --out sys.json") == 1);
  REQUIRE(run("params --k 1048576 --c 0.0001 --out p.json") == 0);
  const Json p = load("p.json");
  CHECK(p["degenerate"] == false);
  CHECK(p["h"].get<long long>() >= 1);
  REQUIRE(run("params --k 16 --out p.json") == 0);
  CHECK(load("p.json")["degenerate"] == true);
  CHECK(run("params --k 16 --q 1:x") == 2);
}

TEST_CASE("sweeps") {
  put("empty.json", R"({"command": "cutmatch", "axes": {}})");
  REQUIRE(run("sweep --spec empty.json --out e.csv") == 0);
  const std::string empty = slurp("e.csv");
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
  CHECK(empty.rfind("cell,", 0) == 0);

  put("none.json", R"({"command": "params", "axes": {"k": [16], "c": []}})");
  REQUIRE(run("sweep --spec none.json --out n.csv") == 0);
  const std::string none = slurp("n.csv");
  CHECK(std::count(none.begin(), none.end(), '\n') == 1);

  // ell = floor(k^(1/2 + delta) / (72 beta_eff)) with beta_eff at its floor 1/9.
  put("delta.json", R"({"command": "sample",
    "base": {"graph": {"kind": "grid", "a": 8, "b": 8}, "W": [0, 8, 16, 24, 32, 40, 48, 56], "k": 400, "family": 6},
    "axes": {"delta": [0.1, 0.25, 0.5]}})");
  REQUIRE(run("sweep --spec delta.json --format jsonl --jobs 3 --out d.jsonl") == 0);
  std::istringstream lines(slurp("d.jsonl"));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    const Json row = Json::parse(line);
    const double k = row["k"], delta = row["delta"], beta = row["beta_eff"];
    CHECK(row["status"] == "ok");
    CHECK(row["ell"] == static_cast<int>(std::floor(std::pow(k, 0.5 + delta) / (72.0 * beta))));
    ++rows;
  }
  CHECK(rows == 3);
  REQUIRE(run("sweep --spec delta.json --jobs 1 --out d1.csv") == 0);
  REQUIRE(run("sweep --spec delta.json --jobs 4 --out d4.csv") == 0);
  CHECK(slurp("d1.csv") == slurp("d4.csv"));

  put("errs.json", R"({"command": "cutmatch", "axes": {"h": [7, 8]}})");
  REQUIRE(run("sweep --spec errs.json --format jsonl --out x.jsonl") == 0);
  std::istringstream xs(slurp("x.jsonl"));
  std::getline(xs, line);
  CHECK(Json::parse(line)["status"] == "error");
  std::getline(xs, line);
  CHECK(Json::parse(line)["status"] == "ok");

  put("badspec.json", R"({"axes": {}})");
  CHECK(run("sweep --spec badspec.json") == 2);
}
