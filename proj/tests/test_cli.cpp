#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "archinf/model_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("ARCHINF_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const fs::path dir = fs::path("cli_tmp");
  fs::create_directories(dir);
  const std::string out_file = (dir / "stdout.txt").string();
  const std::string err_file = (dir / "stderr.txt").string();
  const std::string cmd =
      cli_path() + " " + args + " > " + out_file + " 2> " + err_file;
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::string write_file(const std::string& name, const std::string& body) {
  const fs::path dir = fs::path("cli_tmp");
  fs::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string zero_model() {
  return write_file("zero.json", R"({
    "family": "zero",
    "params": {"omega": 4.0, "mu": 1.0},
    "bounds": {"omega": [0.01, 20.0], "mu": [-5.0, 5.0]},
    "innovation": {"gamma": 0.5}
  })");
}

std::string gexp_model() {
  return write_file("gexp.json", R"({
    "family": "gexp",
    "m": 1,
    "params": {"omega": 0.2, "mu": 0.0, "e": [0.5], "f": [0.0], "d": 0.7},
    "bounds": {"omega": [0.01, 3.0], "mu": [-0.5, 0.5], "e": [[0.02, 3.0]],
               "d": [0.05, 3.0]},
    "innovation": {"gamma": 0.5}
  })");
}

}  // namespace

TEST_CASE("help exits zero, unknown flags exit two") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("simulate --help").exit_code == 0);
  CHECK(run_cli("simulate --frobnicate 1").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("simulate: deterministic CSV with header") {
  const std::string model = zero_model();
  auto r1 = run_cli("simulate --model " + model +
                    " --T 5 --burn 3 --seed 42 --out cli_tmp/a.csv");
  CHECK(r1.exit_code == 0);
  auto r2 = run_cli("simulate --model " + model +
                    " --T 5 --burn 3 --seed 42 --out cli_tmp/b.csv");
  CHECK(r2.exit_code == 0);
  const std::string a = slurp("cli_tmp/a.csv");
  CHECK(a == slurp("cli_tmp/b.csv"));
  CHECK(a.substr(0, 4) == "t,y\n");
  int rows = -1;  // header
  for (char c : a)
    if (c == '\n') ++rows;
  CHECK(rows == 5);
}

TEST_CASE("simulate: missing omega names the field path") {
  const std::string bad = write_file("bad.json", R"({
    "family": "zero",
    "params": {"mu": 1.0}
  })");
  auto r = run_cli("simulate --model " + bad + " --T 5 --out cli_tmp/x.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("params.omega") != std::string::npos);
}

TEST_CASE("fit: round trip recovers the truth inside the intervals") {
  const std::string model = gexp_model();
  auto sim = run_cli("simulate --model " + model +
                     " --T 3000 --seed 7 --nw 1500 --out cli_tmp/y.csv");
  REQUIRE(sim.exit_code == 0);
  auto fitres = run_cli("fit --model " + model +
                        " --data cli_tmp/y.csv --level 0.95 --out cli_tmp/fit.json");
  REQUIRE(fitres.exit_code == 0);
  json j = json::parse(slurp("cli_tmp/fit.json"));
  CHECK(j["diagnostics"]["converged"].get<bool>());
  // wide sanity intervals: the acceptance suite does the statistics
  CHECK(std::abs(j["theta_hat"]["omega"].get<double>() - 0.2) < 0.2);
  CHECK(std::abs(j["theta_hat"]["mu"].get<double>()) < 0.1);
  CHECK(j["ci"]["d"][0].get<double>() < j["ci"]["d"][1].get<double>());
  CHECK(j["covariance"].size() == 16);
}

TEST_CASE("fit: too-short series exits two") {
  const std::string model = gexp_model();
  write_file("short.csv", "t,y\n1,0.1\n2,-0.2\n3,0.3\n");
  auto r = run_cli("fit --model " + model +
                   " --data cli_tmp/short.csv --out cli_tmp/fit2.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("fit: figarch positivity violation exits two with a message") {
  const std::string fig = write_file("figarch_bad.json", R"({
    "family": "figarch",
    "m": 1, "n": 1,
    "params": {"omega": 0.1, "mu": 0.0, "a": [0.03], "b": [0.7], "d": 0.15},
    "bounds": {"omega": [0.01, 1.0], "mu": [-0.1, 0.1],
               "a": [[0.02, 0.04]], "b": [[0.65, 0.75]], "d": [0.1, 0.2]},
    "innovation": {"gamma": 0.5}
  })");
  write_file("flat.csv", [] {
    std::string s = "t,y\n";
    for (int i = 1; i <= 50; ++i) s += std::to_string(i) + ",0.1\n";
    return s;
  }());
  auto r = run_cli("fit --model " + fig +
                   " --data cli_tmp/flat.csv --out cli_tmp/fit3.json");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("positive") != std::string::npos);
}

TEST_CASE("check: table rows and grid validation") {
  const std::string fig = write_file("figarch.json", R"({
    "family": "figarch",
    "m": 0, "n": 0,
    "params": {"omega": 0.1, "mu": 0.0, "d": 0.45},
    "innovation": {"gamma": 0.5}
  })");
  auto r = run_cli("check --model " + fig + " --rho-grid 0.75:0.95:0.05 --nw 100000");
  CHECK(r.exit_code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "rho\tmoment_factor\tweight_sum\tvalue\ttail_bound\tverdict");
  int rows = 0;
  bool any_no = false;
  while (std::getline(is, line)) {
    ++rows;
    if (line.find("no") != std::string::npos) any_no = true;
  }
  CHECK(rows == 5);
  CHECK(any_no);

  CHECK(run_cli("check --model " + fig + " --rho-grid 0.5:1.2:0.1 --nw 100").exit_code == 2);
  // rho below the summability threshold reports divergent-sum rows
  auto r2 = run_cli("check --model " + fig + " --rho-grid 0.6:0.65:0.05 --nw 100");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("divergent-sum") != std::string::npos);
}

TEST_CASE("weights: csv output matches the hand value") {
  const std::string model = gexp_model();
  auto r = run_cli("weights --model " + model + " --n 3 --derivs 1");
  CHECK(r.exit_code == 0);
  std::istringstream is(r.out);
  std::string header, row1;
  std::getline(is, header);
  CHECK(header == "j,psi,d_e1,d_d");
  std::getline(is, row1);
  // psi_1 = 0.5 * 0.7 * exp(-0.7)
  const double want = 0.5 * 0.7 * std::exp(-0.7);
  const auto comma = row1.find(',');
  const double got = std::stod(row1.substr(comma + 1));
  CHECK(std::abs(got - want) < 1e-15);
}

TEST_CASE("simulate: variance overflow exits three") {
  const std::string explosive = write_file("explosive.json", R"({
    "family": "gexp",
    "m": 1,
    "params": {"omega": 1.0, "mu": 0.0, "e": [30.0], "f": [0.0], "d": 0.7},
    "innovation": {"gamma": 0.5}
  })");
  auto r = run_cli("simulate --model " + explosive +
                   " --T 3000 --seed 1 --allow-nonstationary --out cli_tmp/boom.csv");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("overflow") != std::string::npos);
}

TEST_CASE("series CSV round trip is bit exact") {
  archinf::Series y{1.0 / 3.0,       -2.7182818284590452, 1e-17,
                    -0.0,            123456.789012345678, 5e-324,
                    0.1 + 0.2,       -1.0000000000000002};
  const std::string path = write_file("roundtrip.csv", "");
  archinf::write_series_csv(path, y);
  archinf::Series back = archinf::read_series_csv(path);
  REQUIRE(back.size() == y.size());
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == y[i]);
}

TEST_CASE("mc: floor on replications and deterministic output") {
  const std::string cfg_low = write_file("mc_low.json", R"({
    "model": )" + slurp(zero_model()) + R"(,
    "T": [500, 1000],
    "R": 10,
    "seed": 5
  })");
  CHECK(run_cli("mc --config " + cfg_low + " --out cli_tmp/mc0.json").exit_code == 2);

  const std::string cfg = write_file("mc.json", R"({
    "model": )" + slurp(zero_model()) + R"(,
    "T": [500, 1000],
    "R": 50,
    "seed": 5
  })");
  auto r1 = run_cli("mc --config " + cfg + " --out cli_tmp/mc1.json --threads 1");
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("mc --config " + cfg + " --out cli_tmp/mc2.json --threads 2");
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp("cli_tmp/mc1.json") == slurp("cli_tmp/mc2.json"));
  json j = json::parse(slurp("cli_tmp/mc1.json"));
  CHECK(j["by_size"].size() == 2);
  CHECK(j["by_size"][0]["coords"][1]["coverage"].is_number());
}
