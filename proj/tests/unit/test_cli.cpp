#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kBinary = GMOT_CLI_PATH;

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / ("gmot_cli_" + std::to_string(std::rand()))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

int gmot(const std::string& args) {
  const std::string cmd = "\"" + kBinary.string() + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

const char* kSmall = " -s 40 -k 3 -d 2 ";

void make_dataset(const Scratch& s) {
  REQUIRE(gmot("--seed 4 generate --per-model 3 --min-nodes 10 --max-nodes 25 --out " + q(s / "data")) == 0);
}

}  // namespace

TEST_CASE("generate writes graphs and an ordered manifest") {
  Scratch s;
  make_dataset(s);
  const auto manifest = nlohmann::ordered_json::parse(slurp(s / "data" / "manifest.json"));
  REQUIRE(manifest.size() == 12);
  CHECK(manifest.begin().key() == "ER_00.edges");
  for (const auto& [file, label] : manifest.items()) {
    CHECK(fs::exists(s / "data" / file));
    CHECK(file.substr(0, 2) == label.get<std::string>());
  }
}

TEST_CASE("distance, eval and plan-export end to end; reruns are byte-identical") {
  Scratch s;
  make_dataset(s);
  const std::string manifest = q(s / "data" / "manifest.json");
  REQUIRE(gmot("--seed 1 distance --manifest " + manifest + kSmall + "--out " + q(s / "d.csv")) == 0);
  REQUIRE(gmot("--seed 1 distance --manifest " + manifest + kSmall + "--out " + q(s / "d2.csv")) == 0);
  CHECK(slurp(s / "d.csv") == slurp(s / "d2.csv"));

  const auto side = nlohmann::json::parse(slurp(s / "d.json"));
  CHECK(side["method"] == "CCB-tied");
  CHECK(side["files"].size() == 12);
  CHECK(side["times"]["pairs"] == 66);

  REQUIRE(gmot("eval --distances " + q(s / "d.csv") + " --manifest " + manifest + " --out " + q(s / "r.json")) == 0);
  const auto report = nlohmann::json::parse(slurp(s / "r.json"));
  CHECK(report["knn_mean"].get<double>() >= 0.0);
  CHECK(report["fold_accuracy"].size() == 20);
  std::istringstream order(slurp(s / "r.order.txt"));
  int lines = 0;
  for (std::string l; std::getline(order, l);) ++lines;
  CHECK(lines == 12);

  const fs::path a = s / "data" / "ER_00.edges", b = s / "data" / "BA_01.edges";
  REQUIRE(gmot("plan-export " + q(a) + " " + q(b) + kSmall + "--variant full --out " + q(s / "p.csv") + " --cost " +
               q(s / "c.csv")) == 0);
  CHECK(slurp(s / "p.csv").rfind("i,j,mass\n", 0) == 0);
  CHECK(slurp(s / "c.csv").rfind("i,j,cost\n", 0) == 0);
}

TEST_CASE("GMOT_SEED applies unless --seed is given") {
  Scratch s;
  make_dataset(s);
  const std::string args = " distance --manifest " + q(s / "data" / "manifest.json") + " --method cnp" + kSmall;
  REQUIRE(gmot("--seed 2" + args + "--out " + q(s / "a.csv")) == 0);
  ::setenv("GMOT_SEED", "2", 1);
  REQUIRE(gmot(args + "--out " + q(s / "b.csv")) == 0);
  REQUIRE(gmot("--seed 3" + args + "--out " + q(s / "c.csv")) == 0);
  ::unsetenv("GMOT_SEED");
  CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));
  CHECK(slurp(s / "a.csv") != slurp(s / "c.csv"));
}

TEST_CASE("failures exit non-zero and leave no partial output") {
  Scratch s;
  make_dataset(s);
  const std::string manifest = q(s / "data" / "manifest.json");
  {
    std::ofstream(s / "blocker") << "not a directory";
  }
  CHECK(gmot("distance --manifest " + manifest + kSmall + "--out " + q(s / "blocker" / "d.csv")) != 0);
  CHECK_FALSE(fs::exists(s / "blocker" / "d.json"));

  CHECK(gmot("distance --manifest " + manifest + " --method wl --out " + q(s / "x.csv")) != 0);
  CHECK(gmot("plan-export " + q(s / "data" / "ER_00.edges") + " --out " + q(s / "p.csv")) != 0);

  REQUIRE(gmot("distance --manifest " + manifest + " --method degree --out " + q(s / "d.csv")) == 0);
  {
    std::ofstream(s / "partial.json") << R"({"ER_00.edges": "ER"})";
  }
  CHECK(gmot("eval --distances " + q(s / "d.csv") + " --manifest " + q(s / "partial.json") + " --out " +
             q(s / "r.json")) != 0);
  CHECK_FALSE(fs::exists(s / "r.json"));

  std::ofstream(s / "bad.edges") << "1 2\n2 three\n";
  CHECK(gmot("distance " + q(s / "bad.edges") + " " + q(s / "data" / "ER_00.edges") + " --out " + q(s / "e.csv")) != 0);
}
