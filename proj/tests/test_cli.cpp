#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "densek_cli/run.hpp"

namespace fs = std::filesystem;
using densek::cli::Mode;
using densek::cli::RunSpec;

namespace {

const std::string kSmall = std::string(DENSEK_FIXTURE_DIR) + "/small.txt";
const std::string kBip = std::string(DENSEK_FIXTURE_DIR) + "/bip.tsv";

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "densek_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

int sh(const std::string& args) {
  const std::string cmd = std::string(DENSEK_CLI_PATH) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

std::string drop_runtime(const std::string& row) {
  auto f = split(row);
  f[9].clear();
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
  return out;
}

}  // namespace

TEST_CASE("dks sweep: one row per (method, k), in order") {
  const auto out = scratch("sweep.csv");
  REQUIRE(sh("dks --input " + kSmall + " --k 5,10 --methods epprox,greedy --out " + out.string()) ==
          0);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == densek::cli::kCsvHeader);
  const std::vector<std::pair<std::string, std::string>> expect{
      {"epprox", "5"}, {"epprox", "10"}, {"greedy", "5"}, {"greedy", "10"}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto f = split(rows[i + 1]);
    REQUIRE(f.size() == 14);
    CHECK(f[0] == "small");
    CHECK(f[3] == "dks");
    CHECK(f[4] == expect[i].second);
    CHECK(f[5].empty());
    CHECK(f[6] == expect[i].first);
    const double d = std::stod(f[7]);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
  CHECK(split(rows[1])[11] == "step_tol");
}

TEST_CASE("dkbs single cell") {
  const auto out = scratch("bip.csv");
  REQUIRE(sh("dkbs --input " + kBip + " --k1 10 --k2 100 --methods epprox --out " + out.string()) ==
          0);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 2);
  const auto f = split(rows[1]);
  CHECK(f[3] == "dkbs");
  CHECK(f[4] == "10");
  CHECK(f[5] == "100");
}

TEST_CASE("missing input: nonzero exit, no CSV") {
  const auto out = scratch("missing.csv");
  fs::remove(out);
  CHECK(sh("dks --input /nonexistent/graph.txt --k 5 --out " + out.string()) != 0);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("usage errors") {
  CHECK(sh("dks --input " + kSmall + " --k 10,5") != 0);
  CHECK(sh("dks --input " + kSmall + " --k 5 --methods nope") != 0);
  CHECK(sh("dkbs --input " + kBip + " --k1 2 --k2 3 --methods greedy") != 0);
  CHECK(sh("dks --input " + kSmall + " --k 500") != 0);
  CHECK(sh("dks --input " + kSmall + " --k 5 --c1 2 --c2 1.5") != 0);
  CHECK(sh("") != 0);
}

TEST_CASE("solver failure marks the row and fails the run") {
  // C(40, 20) exceeds the brute-force guard
  const auto out = scratch("err.csv");
  CHECK(sh("dks --input " + kSmall + " --k 3,20 --methods brute,greedy --out " + out.string()) ==
        1);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 5);
  CHECK_FALSE(split(rows[1])[7].empty());  // k = 3 is within the guard
  CHECK(split(rows[2])[11] == "error");
  CHECK(split(rows[3])[6] == "greedy");
}

TEST_CASE("parallel cells give the same CSV as serial ones") {
  const auto a = scratch("serial.csv");
  const auto b = scratch("parallel.csv");
  const std::string args = "dks --input " + kSmall + " --k 3,5,8,12 --methods epprox,greedy,tpm";
  REQUIRE(sh(args + " --jobs 1 --out " + a.string()) == 0);
  REQUIRE(sh(args + " --jobs 4 --out " + b.string()) == 0);
  const auto ra = lines(a);
  const auto rb = lines(b);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 1; i < ra.size(); ++i) CHECK(drop_runtime(ra[i]) == drop_runtime(rb[i]));
}

TEST_CASE("trace output is one JSON object per iteration") {
  const auto csv = scratch("t.csv");
  const auto trace = scratch("t.jsonl");
  REQUIRE(sh("dks --input " + kSmall + " --k 5 --methods epprox --trace-out " + trace.string() +
             " --out " + csv.string()) == 0);
  const auto rows = lines(csv);
  const auto iters = std::stoul(split(rows[1])[10]);
  const auto recs = lines(trace);
  REQUIRE(recs.size() == iters);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto j = nlohmann::json::parse(recs[i]);
    CHECK(j["iter"] == i);
    CHECK(j["k1"] == 5);
    CHECK(j["method"] == "epprox");
  }
}

TEST_CASE("overrides reach the solver") {
  RunSpec spec;
  spec.mode = Mode::dkbs;
  CHECK(densek::cli::solver_config(spec).lambda_growth == 10.0);
  CHECK(densek::cli::solver_config(spec).stop_sq_tol == 1e-15);
  spec.mode = Mode::dks;
  spec.lambda_growth = 3.0;
  spec.max_iter = 7;
  spec.extrapolation = densek::ExtrapolationMode::theory;
  spec.seed = 9;
  const auto c = densek::cli::solver_config(spec);
  CHECK(c.lambda_growth == 3.0);
  CHECK(c.stop_sq_tol == 1e-11);
  CHECK(c.max_iter == 7);
  CHECK(c.extrapolation == densek::ExtrapolationMode::theory);
  CHECK(c.seed == 9);

  spec.input = kSmall;
  spec.k = {6};
  spec.methods = {"epprox"};
  std::ostringstream os;
  REQUIRE(densek::cli::run(spec, os) == 0);
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(std::stoul(split(row)[10]) <= 7);
  CHECK(split(row)[13] == "9");
}
