#include <doctest.h>

#include "nneuler/commands.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nneuler;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "nneuler");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nneuler_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const std::string kData = NNEULER_TEST_DATA;
const std::string kConfigs = kData + "/../../configs";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  CHECK(run({"price", kData + "/cir_mu_0_9.ini"}) == kExitInfeasible);
  CHECK(run({"price", kData + "/zero_paths.ini"}) == kExitConfig);
  CHECK(run({"price", kData + "/does_not_exist.ini"}) == kExitConfig);
  CHECK(run({"gencheck", kData + "/no_model.ini"}) == kExitConfig);
  CHECK(run({"table", "table9"}) == kExitConfig);
  CHECK(run({"frobnicate"}) == kExitConfig);
  CHECK(run({}) == kExitConfig);
}

TEST_CASE("price writes CSV and manifest") {
  const auto out = scratch("price.csv");
  REQUIRE(run({"price", kConfigs + "/cir_low_vol_bond.ini", "--out", out.string(), "--seed",
               "11", "--threads", "2"}) == kExitOk);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("n,scheme,mean,stderr,margin95,bias,rmse,N,seed\n", 0) == 0);
  CHECK(csv.find(",11\n") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(m["command"] == "price");
  CHECK(m["seed"] == 11);
  CHECK(m["threads"] == 2);
  CHECK(m.contains("tool_version"));
  CHECK(m.contains("wall_clock_seconds"));
}

TEST_CASE("table output is reproducible") {
  const auto a = scratch("t1a.csv");
  const auto b = scratch("t1b.csv");
  REQUIRE(run({"table", "table1", "--scale", "4000", "--out", a.string()}) == kExitOk);
  REQUIRE(run({"table", "table1", "--scale", "4000", "--out", b.string(), "--threads", "3"}) ==
          kExitOk);
  const std::string first = slurp(a);
  CHECK(first == slurp(b));
  // 8 rows of n times 5 schemes plus the header
  CHECK(std::count(first.begin(), first.end(), '\n') == 41);

  const auto w = scratch("t4.csv");
  REQUIRE(run({"table", "table4", "--scale", "20000", "--wide", "--out", w.string()}) == kExitOk);
  CHECK(slurp(w).rfind("n,Bernoulli,(b1),(b2),(b3),(b4)\n5,", 0) == 0);

  const auto p = scratch("t3.csv");
  REQUIRE(run({"table", "table3", "--scale", "200000", "--out", p.string()}) == kExitOk);
  const std::string pairs = slurp(p);
  CHECK(pairs.rfind("panel,n,N,mean,bias,margin95,rmse\n", 0) == 0);
  CHECK(std::count(pairs.begin(), pairs.end(), '\n') == 11);
}

TEST_CASE("rate subcommand") {
  const auto out = scratch("rate.csv");
  REQUIRE(run({"rate", kData + "/table3_low_vol_bias.csv", "--out", out.string()}) == kExitOk);
  const std::string text = slurp(out);
  CHECK(text.rfind("rate,slope,intercept,points,excluded\n", 0) == 0);
  const double r = std::stod(text.substr(text.find('\n') + 1));
  CHECK(std::abs(r - 1.209) <= 0.01);

  REQUIRE(run({"rate", kData + "/table5_bias.csv", "--exclude", "5,10", "--out", out.string()}) ==
          kExitOk);
  CHECK(slurp(out).find(",4,2\n") != std::string::npos);
}

TEST_CASE("gencheck subcommand") {
  const auto out = scratch("gen.csv");
  REQUIRE(run({"gencheck", kConfigs + "/gencheck_cir.ini", "--out", out.string()}) == kExitOk);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,gap");
  std::vector<double> gaps;
  while (std::getline(in, line)) gaps.push_back(std::stod(line.substr(line.find(',') + 1)));
  REQUIRE(gaps.size() == 3);
  // quadratic test function: the gap is max b^2 / n = (0.5 * 0.36)^2 / n
  CHECK(gaps[0] == doctest::Approx(0.0324 / 8).epsilon(1e-8));
  CHECK(gaps[1] == doctest::Approx(0.0324 / 32).epsilon(1e-8));
  CHECK(gaps[2] == doctest::Approx(0.0324 / 128).epsilon(1e-8));
}

TEST_CASE("gencheck defaults") {
  std::istringstream in(R"([model]
kind = garch_sv
alpha = 0.05
lambda = 1
nu = 0.5
beta = 0.05
rho = -0.3
v0 = 0.05
s0 = 100

[scheme]
kind = proposed
mu1 = 0.657
)");
  const auto res = run_gencheck(parse_config(in));
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].gap > res.rows[1].gap);
  CHECK(res.rows[1].gap > res.rows[2].gap);
  CHECK(res.jump_vanishing_n > 0);
}

}  // TEST_SUITE
