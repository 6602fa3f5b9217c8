#include <parsmd/manifest.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace parsmd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::path(PARSMD_WORKDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome invoke(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = env + " \"" + std::string(PARSMD_CLI) + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path write_manifest(const fs::path& dir, NoiseModel noise, double sigma, std::int64_t n) {
  ExperimentManifest m;
  VectorXd mu(2);
  mu << 0.5, 0.0;
  m.problem = make_problem(euclidean_ball<double>(VectorXd::Zero(2), 1.0), ObjectiveKind::QuadraticBall, mu, noise);
  m.epsilon = 0.3;
  m.sigma = sigma;
  m.trials = 30;
  m.n_override = n;
  m.master_seed = 11;
  m.output.directory = (dir / "out").string();
  const fs::path path = dir / "manifest.json";
  std::ofstream(path) << manifest_to_json(m).dump(2);
  return path;
}

}  // namespace

TEST_CASE("run: noiseless manifest") {
  const fs::path dir = workdir("noiseless");
  const fs::path manifest = write_manifest(dir, {}, 0.2, 200);
  const Outcome r = invoke("run --manifest \"" + manifest.string() + "\"", dir);
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "out" / "results.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("strategy,epsilon,sigma,N,K,trials,exceedances,empirical_p", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < 8; ++i) std::getline(ls, cell, ',');
    CHECK(std::stod(cell) == 0.0);
  }
  CHECK(rows == 3);
  const Json summary = Json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary.at("master_seed") == 11);
  CHECK(summary.at("seed_source") == "manifest");
}

TEST_CASE("run: seed flag and worker count leave the summary unchanged") {
  const fs::path dir = workdir("workers");
  const fs::path manifest = write_manifest(dir, {NoiseKind::Uniform, 0.4}, 0.2, 200);
  const std::string base = "run --manifest \"" + manifest.string() + "\" --seed 99";
  REQUIRE(invoke(base + " --workers 1", dir).code == 0);
  const std::string one = slurp(dir / "out" / "summary.json");
  REQUIRE(invoke(base, dir, "PARSMD_WORKERS=3").code == 0);
  CHECK(slurp(dir / "out" / "summary.json") == one);
  CHECK(Json::parse(one).at("seed_source") == "flag");
}

TEST_CASE("run: malformed manifest exits 1 without outputs") {
  const fs::path dir = workdir("malformed");
  std::ofstream(dir / "manifest.json") << "{\"schema_version\": 1, \"epsilon\": ";
  const Outcome r = invoke("run --manifest \"" + (dir / "manifest.json").string() + "\"", dir);
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(dir / "summary.json"));
  CHECK_FALSE(fs::exists(dir / "results.csv"));
  CHECK_FALSE(fs::exists(dir / "trials.jsonl"));
}

TEST_CASE("run: bound outside its regime exits 2 naming the condition") {
  const fs::path dir = workdir("not_applicable");
  const fs::path manifest = write_manifest(dir, {NoiseKind::Gaussian, 0.3}, 0.01, 40);
  const Outcome r = invoke("run --manifest \"" + manifest.string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("ln σ⁻¹ ≪ N") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "summary.json"));
}

TEST_CASE("bounds subcommand") {
  const fs::path dir = workdir("bounds");
  const std::string q = "bounds --epsilon 0.1 --sigma 0.05 --M 1 --R 1 --R-bar 1 --tail a";
  const Outcome json = invoke(q + " --format json", dir);
  REQUIRE(json.code == 0);
  const Json t = Json::parse(json.out);
  CHECK(t.at("average_of_k").at("N") == 3200);
  CHECK(t.at("average_of_k").at("K") == 6);
  CHECK(t.at("min_of_k").at("K") == 5);
  const Outcome csv = invoke(q + " --format csv", dir);
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find("min_of_k.N,800") != std::string::npos);

  CHECK(invoke("bounds --epsilon 0.1 --sigma 2 --M 1 --R 1 --R-bar 1", dir).code == 1);
  CHECK(invoke("bounds --epsilon 0.1 --sigma 0.05 --M 1 --R 1 --R-bar 1 --tail z", dir).code == 1);
  CHECK(invoke("bounds --sigma 0.05", dir).code == 1);
}

TEST_CASE("invalid invocations exit 1") {
  const fs::path dir = workdir("invalid");
  CHECK(invoke("frobnicate", dir).code == 1);
  CHECK(invoke("run", dir).code == 1);
  CHECK(invoke("run --manifest /nonexistent.json", dir).code == 1);
  CHECK(invoke("run --manifest x.json --workers 0", dir).code == 1);
}

TEST_CASE("selftest") {
  const fs::path dir = workdir("selftest");
  const Outcome a = invoke("selftest", dir);
  const Outcome b = invoke("selftest", dir);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Outcome fault = invoke("selftest --inject-fault entropy-step", dir);
  CHECK(fault.code != 0);
  CHECK(fault.err.find("step-inequality") != std::string::npos);
  CHECK(invoke("--help", dir).out.find("inject-fault") == std::string::npos);
}
