#include <parsmd/experiment.hpp>
#include <parsmd/smd.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace parsmd {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

StrategyPlan build_plan(const ExperimentManifest& m, StrategyKind kind) {
  const ProblemConstants& k = m.problem.constants;
  const TailClass tail = m.problem.tail_class();
  const BoundOptions& opts = m.bound_options;
  StrategyPlan plan;
  double radius = k.r_bar;
  switch (kind) {
    case StrategyKind::Single:
      plan = single_parameters(m.epsilon, m.sigma, k.M, k.r_bar, tail, opts);
      break;
    case StrategyKind::AverageOfK:
      plan = average_of_k_parameters(m.epsilon, m.sigma, k.M, k.r_bar, tail, opts);
      break;
    case StrategyKind::MinOfK:
      plan = min_of_k_parameters(m.epsilon, m.sigma, k.M, k.R, tail);
      radius = k.R;
      break;
  }
  if (m.n_override) plan = with_iterations(plan, *m.n_override, k.M, radius, opts);
  if (m.k_override && kind != StrategyKind::Single) plan.K = *m.k_override;
  return plan;
}

std::string csv_row(const StrategyPlan& plan, const DeviationEstimate& est, double wall_ms) {
  std::ostringstream row;
  row << to_string(plan.strategy) << ',' << format_double(plan.epsilon) << ','
      << format_double(plan.sigma) << ',' << plan.N << ',' << plan.K << ',' << est.trials << ','
      << est.exceedances << ',' << format_double(est.empirical_probability) << ','
      << format_double(est.ci_low) << ',' << format_double(est.ci_high) << ','
      << format_double(est.mean_gap) << ',' << plan.oracle_calls_total() << ','
      << format_double(wall_ms) << '\n';
  return row.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<StrategyPlan> manifest_plans(const ExperimentManifest& m) {
  if (m.strategy == "compare")
    return {build_plan(m, StrategyKind::Single), build_plan(m, StrategyKind::AverageOfK),
            build_plan(m, StrategyKind::MinOfK)};
  return {build_plan(m, strategy_from_string(m.strategy))};
}

ExperimentOutput run_experiment(const ExperimentManifest& m, std::uint64_t master_seed,
                                const std::string& seed_source, unsigned workers) {
  const std::vector<StrategyPlan> plans = manifest_plans(m);
  const bool shared_seed = plans.size() > 1;

  ExperimentOutput out;
  out.summary["schema_version"] = kSchemaVersion;
  out.summary["master_seed"] = master_seed;
  out.summary["seed_source"] = seed_source;
  out.summary["problem"] = problem_to_json(m.problem);
  out.summary["strategies"] = Json::array();

  std::string header;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) header += (i ? "," : "") + kCsvColumns[i];
  out.csv = header + "\n";

  const ExecutionOptions exec{workers};
  for (const StrategyPlan& plan : plans) {
    const std::uint64_t seed = shared_seed ? strategy_seed(master_seed, plan.strategy) : master_seed;
    const auto start = std::chrono::steady_clock::now();
    const DeviationEstimate est = estimate_deviation(m.problem, plan, m.epsilon, m.trials, seed, exec);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    out.summary["strategies"].push_back({{"plan", plan_to_json(plan)},
                                         {"estimate", estimate_to_json(est)},
                                         {"stream_seed", seed}});
    for (const TrialRecord& rec : est.records)
      out.trial_lines.push_back(trial_record_to_json(rec, plan.strategy).dump());
    out.csv += csv_row(plan, est, wall_ms);
  }
  return out;
}

void write_outputs(const OutputPaths& paths, const ExperimentOutput& out) {
  const fs::path dir(paths.directory.empty() ? "." : paths.directory);
  fs::create_directories(dir);
  std::string lines;
  for (const std::string& l : out.trial_lines) lines += l + "\n";
  const std::vector<std::pair<fs::path, std::string>> files = {
      {dir / paths.trials, lines},
      {dir / paths.summary, out.summary.dump(2) + "\n"},
      {dir / paths.csv, out.csv}};

  std::vector<fs::path> temps;
  try {
    for (const auto& [path, contents] : files) {
      fs::path tmp = path;
      tmp += ".partial";
      temps.push_back(tmp);
      write_file(tmp, contents);
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const fs::path& t : temps) fs::remove(t, ec);
    throw;
  }
}

Json bounds_table(const BoundsQuery& q) {
  Json t;
  t["inputs"] = {{"epsilon", q.epsilon}, {"sigma", q.sigma}, {"M", q.M},
                 {"R", q.R},             {"R_bar", q.r_bar}, {"tail_class", tail_class_to_json(q.tail)}};
  const CaseConstants c = case_constants(q.tail, q.options);
  t["C1"] = c.c1;
  t["C2"] = c.c2;
  t["C"] = deviation_constant(q.tail, q.options);

  const std::int64_t n_expectation = iterations_for_expectation(q.M, q.R, q.epsilon);
  t["N_expectation"] = n_expectation;
  const std::int64_t n_cor = deviation_N(q.M, q.r_bar, q.epsilon, q.sigma, q.tail, q.options);
  t["deviation_N"] = n_cor;
  try {
    t["deviation_bound_at_N_expectation"] = deviation_bound(q.M, q.R, q.r_bar, n_expectation, q.sigma, q.tail, q.options);
  } catch (const BoundNotApplicable& e) {
    t["deviation_bound_at_N_expectation"] = nullptr;
    t["deviation_bound_note"] = e.what();
  }

  const StrategyPlan single = single_parameters(q.epsilon, q.sigma, q.M, q.r_bar, q.tail, q.options);
  const StrategyPlan avg = average_of_k_parameters(q.epsilon, q.sigma, q.M, q.r_bar, q.tail, q.options);
  const StrategyPlan mink = min_of_k_parameters(q.epsilon, q.sigma, q.M, q.R, q.tail);
  auto plan_row = [](const StrategyPlan& p) {
    return Json{{"N", p.N},
                {"K", p.K},
                {"h", p.h},
                {"oracle_calls_total", p.oracle_calls_total()},
                {"oracle_calls_per_worker", p.oracle_calls_per_worker()}};
  };
  t["single"] = plan_row(single);
  t["average_of_k"] = plan_row(avg);
  t["min_of_k"] = plan_row(mink);
  return t;
}

std::string bounds_csv(const Json& t) {
  std::ostringstream out;
  out << "quantity,value\n";
  auto num = [](const Json& v) -> std::string {
    if (v.is_null()) return "n/a";
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  for (const char* key : {"C1", "C2", "C", "N_expectation", "deviation_N", "deviation_bound_at_N_expectation"})
    out << key << ',' << num(t.at(key)) << '\n';
  for (const char* plan : {"single", "average_of_k", "min_of_k"})
    for (const char* key : {"N", "K", "h", "oracle_calls_total", "oracle_calls_per_worker"})
      out << plan << '.' << key << ',' << num(t.at(plan).at(key)) << '\n';
  return out.str();
}

}  // namespace parsmd
