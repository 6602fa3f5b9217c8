#include <parsmd/experiment.hpp>

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace parsmd;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentManifest small_manifest(NoiseModel noise) {
  ExperimentManifest m;
  VectorXd mu(2);
  mu << 0.5, 0.0;
  m.problem = make_problem(euclidean_ball<double>(VectorXd::Zero(2), 1.0), ObjectiveKind::QuadraticBall, mu, noise);
  m.epsilon = 0.3;
  m.sigma = 0.2;
  m.trials = 30;
  m.n_override = 300;
  return m;
}

}  // namespace

TEST_CASE("noiseless experiment yields empirical_p = 0 and agreeing CSV / JSON") {
  const ExperimentManifest m = small_manifest({});
  const ExperimentOutput out = run_experiment(m, 5, "manifest", 2);
  const auto rows = parse_csv(out.csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == kCsvColumns);
  const Json& strategies = out.summary.at("strategies");
  REQUIRE(strategies.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = rows[i + 1];
    REQUIRE(row.size() == kCsvColumns.size());
    const Json& plan = strategies[i].at("plan");
    const Json& est = strategies[i].at("estimate");
    CHECK(row[0] == plan.at("strategy").get<std::string>());
    CHECK(std::stod(row[1]) == plan.at("epsilon").get<double>());
    CHECK(std::stod(row[2]) == plan.at("sigma").get<double>());
    CHECK(std::stoll(row[3]) == plan.at("N").get<std::int64_t>());
    CHECK(std::stoll(row[4]) == plan.at("K").get<std::int64_t>());
    CHECK(std::stoll(row[5]) == est.at("trials").get<std::int64_t>());
    CHECK(std::stoll(row[6]) == est.at("exceedances").get<std::int64_t>());
    CHECK(std::stod(row[7]) == est.at("empirical_probability").get<double>());
    CHECK(std::stod(row[8]) == est.at("ci_low").get<double>());
    CHECK(std::stod(row[9]) == est.at("ci_high").get<double>());
    CHECK(std::stod(row[10]) == est.at("mean_gap").get<double>());
    CHECK(std::stoll(row[11]) == plan.at("oracle_calls_total").get<std::int64_t>());
    CHECK(std::stod(row[7]) == 0.0);
  }
  CHECK(out.trial_lines.size() == 90);
  CHECK(Json::parse(out.trial_lines.front()).at("trial") == 0);
}

TEST_CASE("summary is identical across worker counts") {
  const ExperimentManifest m = small_manifest({NoiseKind::Uniform, 0.4});
  const std::string ref = run_experiment(m, 42, "flag", 1).summary.dump();
  CHECK(run_experiment(m, 42, "flag", 2).summary.dump() == ref);
  CHECK(run_experiment(m, 42, "flag", 8).summary.dump() == ref);
  CHECK(run_experiment(m, 43, "flag", 1).summary.dump() != ref);
}

TEST_CASE("N override below the validity threshold is rejected") {
  ExperimentManifest m = small_manifest({NoiseKind::Gaussian, 0.3});
  m.sigma = 0.01;
  m.n_override = 40;  // < 10 ln(100) = 46.05
  try {
    manifest_plans(m);
    FAIL("expected BoundNotApplicable");
  } catch (const BoundNotApplicable& e) {
    CHECK(std::string(e.what()).find("ln σ⁻¹ ≪ N") != std::string::npos);
  }
  m.n_override = 60;  // warning band
  const auto plans = manifest_plans(m);
  CHECK(plans[1].validity.status == ValidityStatus::Warning);
}

TEST_CASE("write_outputs writes all files and leaves no temporaries") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "parsmd_experiment_test";
  fs::remove_all(dir);
  ExperimentManifest m = small_manifest({});
  m.strategy = "average_of_k";
  m.output.directory = dir.string();
  write_outputs(m.output, run_experiment(m, 1, "manifest", 1));
  CHECK(fs::exists(dir / "trials.jsonl"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "results.csv"));
  for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".partial");
  std::ifstream in(dir / "trials.jsonl");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 30);
  fs::remove_all(dir);
}

TEST_CASE("bounds table matches a hand computation") {
  BoundsQuery q;
  q.epsilon = 0.1;
  q.sigma = 0.05;
  const Json t = bounds_table(q);
  // N_expectation = ceil(2 / 0.01); min-of-K: ceil(8 / 0.01), ceil(log2 20);
  // average-of-K with C = 2 * max(1, 8 / 2) = 8: ceil(4 * 8 / 0.01), ceil(2 ln 20)
  CHECK(t.at("N_expectation") == 200);
  CHECK(t.at("min_of_k").at("N") == 800);
  CHECK(t.at("min_of_k").at("K") == 5);
  CHECK(t.at("average_of_k").at("N") == 3200);
  CHECK(t.at("average_of_k").at("K") == 6);
  CHECK(t.at("average_of_k").at("oracle_calls_total") == 3200 * 6);
  CHECK(t.at("deviation_N") == 800);

  q.sigma = 0.5;
  const Json half = bounds_table(q);
  CHECK(half.at("min_of_k").at("K") == 1);
  CHECK(half.at("average_of_k").at("K") == 2);

  q.epsilon = 0.05;
  const Json quarter = bounds_table(q);
  CHECK(quarter.at("N_expectation") == 4 * 200);
  CHECK(quarter.at("min_of_k").at("N") == 4 * 800);
  CHECK(quarter.at("average_of_k").at("N") == 4 * half.at("average_of_k").at("N").get<int>());

  const std::string csv = bounds_csv(t);
  CHECK(csv.find("average_of_k.N,3200\n") != std::string::npos);
}
