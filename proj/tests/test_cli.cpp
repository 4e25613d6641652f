// End-to-end checks of the coownet binary: exit codes, output files,
// reproducibility. The binary path comes in via COOWNET_BIN.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* bin = std::getenv("COOWNET_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "COOWNET_BIN not set");
  return bin;
}

std::string fixtures() {
  const char* dir = std::getenv("COOWNET_FIXTURES");
  REQUIRE_MESSAGE(dir != nullptr, "COOWNET_FIXTURES not set");
  return std::string(dir) + "/golden_seed42";
}

int run(const std::string& args) {
  const std::string command = binary() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("coownet_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("generate: deterministic and parseable back") {
  TempDir a("gen_a"), b("gen_b");
  const std::string flags =
      " --subsidiaries 300 --investors-per-group 15 --seed 9 -o ";
  REQUIRE(run("generate" + flags + a.str()) == 0);
  REQUIRE(run("generate" + flags + b.str()) == 0);
  for (const char* name :
       {"subsidiaries.csv", "memberships.csv", "macroareas.csv"}) {
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
  // stats parses the generated trio straight back
  TempDir out("gen_stats");
  CHECK(run("stats --subsidiaries " + a.str() + "/subsidiaries.csv" +
            " --macroareas " + a.str() + "/macroareas.csv -o " + out.str()) ==
        0);
  CHECK(slurp(out.path / "stats.csv").starts_with("group,records,avg"));
}

TEST_CASE("generate: invalid p_in exits 2") {
  TempDir out("gen_bad");
  CHECK(run("generate --p-in 1.5 -o " + out.str()) == 2);
  CHECK(run("generate --p-in -0.1 -o " + out.str()) == 2);
}

TEST_CASE("stats: missing input exits 2, sector grouping works") {
  TempDir out("stats");
  CHECK(run("stats --subsidiaries /nonexistent/path.csv -o " + out.str()) ==
        2);
  REQUIRE(run("stats --subsidiaries " + fixtures() + "/subsidiaries.csv" +
              " --group-by sector -o " + out.str()) == 0);
  const auto text = slurp(out.path / "stats.csv");
  CHECK(text.find("\n600,") != std::string::npos);
  CHECK(text.find("\n2300,") != std::string::npos);
}

TEST_CASE("analyze: reproducible, complete output set, exit 3 on empty filter") {
  const std::string inputs = " --subsidiaries " + fixtures() +
                             "/subsidiaries.csv --memberships " + fixtures() +
                             "/memberships.csv";
  TempDir a("an_a"), b("an_b");
  const std::string flags =
      inputs + " --runs 25 --mc-samples 999 --seed 11 -o ";
  REQUIRE(run("analyze" + flags + a.str()) == 0);
  REQUIRE(run("analyze" + flags + b.str()) == 0);
  for (const char* name :
       {"test_result.csv", "contingency.csv", "network.graphml",
        "network.dot", "bipartite.dot", "partition.csv", "ensemble.csv"}) {
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
  CHECK(fs::exists(a.path / "manifest.json"));
  CHECK(slurp(a.path / "test_result.csv")
            .starts_with("label,weighting,mrh_rejected"));

  TempDir empty("an_empty");
  CHECK(run("analyze" + inputs +
            " --filter-region EU --snapshot-year 1900 -o " + empty.str()) ==
        3);
}

TEST_CASE("analyze: weighted run detects the planted structure") {
  TempDir out("an_weighted");
  // 9999 samples put the p-value floor at 1e-4, below the *** threshold.
  REQUIRE(run("analyze --subsidiaries " + fixtures() +
              "/subsidiaries.csv --memberships " + fixtures() +
              "/memberships.csv --weighted --runs 25 --mc-samples 9999 "
              "--seed 4 -o " +
              out.str()) == 0);
  const auto text = slurp(out.path / "test_result.csv");
  CHECK(text.find("Overall,weighted,YES") != std::string::npos);
  CHECK(text.find("***") != std::string::npos);
}

TEST_CASE("null: single replica produces a single row") {
  TempDir out("null_one");
  REQUIRE(run("null --subsidiaries " + fixtures() +
              "/subsidiaries.csv --memberships " + fixtures() +
              "/memberships.csv --replicas 1 --runs 10 --mc-samples 499 "
              "--seed 3 -o " +
              out.str()) == 0);
  const auto text = slurp(out.path / "null_results.csv");
  CHECK(text.starts_with("replica,label,weighting,mrh_rejected"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);  // header + 1 row
}

TEST_CASE("battery: rows per entry and weighting, soft failures in-row") {
  TempDir out("battery");
  const auto battery_path = out.path / "battery.json";
  {
    std::ofstream battery(battery_path);
    battery << R"({"entries": [
      {"label": "Overall", "weighting": "both"},
      {"label": "Nothing", "filter": {"snapshot_year": 1900}}
    ]})";
  }
  REQUIRE(run("battery --subsidiaries " + fixtures() +
              "/subsidiaries.csv --memberships " + fixtures() +
              "/memberships.csv --battery " + battery_path.string() +
              " --runs 20 --mc-samples 999 --seed 8 -o " + out.str()) == 0);
  const auto text = slurp(out.path / "battery.csv");
  CHECK(text.find("Overall,unweighted,YES") != std::string::npos);
  CHECK(text.find("Overall,weighted,YES") != std::string::npos);
  CHECK(text.find("Nothing,unweighted,,,,,no data") != std::string::npos);
}

TEST_CASE("version flag prints tool version and defaults") {
  const std::string command = binary() + " --version > /tmp/coownet_version.txt";
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  const auto text = slurp("/tmp/coownet_version.txt");
  CHECK(text.find("coownet 0.1.0") != std::string::npos);
  CHECK(text.find("runs=1000") != std::string::npos);
}
