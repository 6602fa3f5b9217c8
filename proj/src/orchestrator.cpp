#include <parsmd/orchestrator.hpp>
#include <parsmd/parallel.hpp>
#include <parsmd/stats.hpp>

#include <chrono>
#include <limits>

namespace parsmd {

namespace {

std::uint32_t checked_u32(std::int64_t v, const char* what) {
  if (v < 0 || v > std::numeric_limits<std::uint32_t>::max())
    throw DomainError(std::string(what) + " out of range");
  return static_cast<std::uint32_t>(v);
}

struct Aggregated {
  Run run;
  std::optional<std::size_t> selected;
};

Aggregated aggregate(const Problem& problem, const StrategyPlan& plan, const std::vector<Run>& reps) {
  if (plan.strategy == StrategyKind::MinOfK) {
    const std::size_t best = select_min(reps);
    Run out = reps[best];
    out.oracle_calls = plan.oracle_calls_total();
    return {std::move(out), best};
  }
  if (reps.size() == 1) return {reps.front(), std::nullopt};
  return {aggregate_average(problem, reps), std::nullopt};
}

}  // namespace

SmdConfig replicate_config(const StrategyPlan& plan, std::uint64_t master_seed, std::uint32_t trial,
                           std::uint32_t replicate) {
  SmdConfig cfg;
  cfg.N = plan.N;
  cfg.h = plan.h;
  cfg.key = StreamKey{master_seed, trial, replicate};
  return cfg;
}

std::vector<Run> run_replicates(const Problem& problem, const StrategyPlan& plan,
                                std::uint64_t master_seed, std::uint32_t trial,
                                const ExecutionOptions& exec) {
  const std::uint32_t K = checked_u32(plan.K, "K");
  if (K < 1) throw DomainError("run_replicates: K must be >= 1");
  std::vector<Run> out(K);
  parallel_for(K, exec.workers, [&](std::size_t i) {
    out[i] = run_smd(problem, replicate_config(plan, master_seed, trial, static_cast<std::uint32_t>(i)));
  });
  return out;
}

Run aggregate_average(const Problem& problem, const std::vector<Run>& replicates) {
  if (replicates.empty()) throw DomainError("aggregate_average: no replicates");
  Run out;
  out.x_bar = VectorXd::Zero(problem.dimension());
  for (const Run& r : replicates) {
    out.x_bar += r.x_bar;
    out.oracle_calls += r.oracle_calls;
  }
  out.x_bar /= static_cast<double>(replicates.size());
  out.iterations = replicates.front().iterations;
  out.gap = exact_objective(problem, out.x_bar) - optimal_value(problem).value;
  return out;
}

std::size_t select_min(const std::vector<Run>& replicates) {
  if (replicates.empty()) throw DomainError("select_min: no replicates");
  // f(x) - f* ranks identically to f(x) since f* is shared.
  std::size_t best = 0;
  for (std::size_t i = 1; i < replicates.size(); ++i)
    if (replicates[i].gap < replicates[best].gap) best = i;
  return best;
}

Run run_average_of_k(const Problem& problem, const StrategyPlan& plan, std::uint64_t master_seed,
                     const ExecutionOptions& exec, std::uint32_t trial) {
  if (plan.strategy != StrategyKind::AverageOfK)
    throw DomainError("run_average_of_k: plan is not an average-of-K plan");
  const std::vector<Run> reps = run_replicates(problem, plan, master_seed, trial, exec);
  if (reps.size() == 1) return reps.front();
  return aggregate_average(problem, reps);
}

Run run_min_of_k(const Problem& problem, const StrategyPlan& plan, std::uint64_t master_seed,
                 const ExecutionOptions& exec, std::uint32_t trial) {
  if (plan.strategy != StrategyKind::MinOfK) throw DomainError("run_min_of_k: plan is not a min-of-K plan");
  const std::vector<Run> reps = run_replicates(problem, plan, master_seed, trial, exec);
  return aggregate(problem, plan, reps).run;
}

DeviationEstimate estimate_deviation(const Problem& problem, const StrategyPlan& plan, double eps,
                                     std::int64_t trials, std::uint64_t master_seed,
                                     const ExecutionOptions& exec) {
  if (trials < 30) throw DomainError("estimate_deviation: at least 30 trials required");
  if (!(eps > 0.0)) throw DomainError("estimate_deviation: eps must be positive");
  const std::uint32_t T = checked_u32(trials, "trials");
  const std::uint32_t K = checked_u32(plan.K, "K");
  if (K < 1) throw DomainError("estimate_deviation: K must be >= 1");

  const std::size_t jobs = static_cast<std::size_t>(T) * K;
  std::vector<Run> results(jobs);
  parallel_for(jobs, exec.workers, [&](std::size_t job) {
    const auto trial = static_cast<std::uint32_t>(job / K);
    const auto rep = static_cast<std::uint32_t>(job % K);
    results[job] = run_smd(problem, replicate_config(plan, master_seed, trial, rep));
  });

  DeviationEstimate est;
  est.strategy = plan.strategy;
  est.epsilon = eps;
  est.target_sigma = plan.sigma;
  est.trials = trials;
  est.records.reserve(T);
  std::vector<double> gaps;
  gaps.reserve(T);
  for (std::uint32_t t = 0; t < T; ++t) {
    std::vector<Run> reps(std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(t) * K),
                          std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(t + 1) * K));
    TrialRecord rec;
    rec.trial = t;
    rec.replicate_gaps.reserve(K);
    for (const Run& r : reps) rec.replicate_gaps.push_back(r.gap);
    Aggregated agg = aggregate(problem, plan, reps);
    rec.gap = agg.run.gap;
    rec.selected_replicate = agg.selected;
    rec.exceeded = rec.gap > eps;
    if (rec.exceeded) ++est.exceedances;
    gaps.push_back(rec.gap);
    est.records.push_back(std::move(rec));
  }
  est.empirical_probability = static_cast<double>(est.exceedances) / static_cast<double>(trials);
  const Interval ci = clopper_pearson(est.exceedances, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  const Summary s = summarize(gaps);
  est.mean_gap = s.mean;
  est.gap_std = s.stddev;
  return est;
}

std::uint64_t strategy_seed(std::uint64_t master_seed, StrategyKind kind) {
  // splitmix64 finalizer over (seed, strategy)
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(kind) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<StrategyPlan> comparison_plans(const Problem& problem, double eps, double sigma,
                                           const BoundOptions& opts) {
  const ProblemConstants& k = problem.constants;
  const TailClass tail = problem.tail_class();
  return {single_parameters(eps, sigma, k.M, k.r_bar, tail, opts),
          average_of_k_parameters(eps, sigma, k.M, k.r_bar, tail, opts),
          min_of_k_parameters(eps, sigma, k.M, k.R, tail)};
}

Comparison compare_strategies(const Problem& problem, double eps, double sigma, std::int64_t trials,
                              std::uint64_t master_seed, const ExecutionOptions& exec,
                              const BoundOptions& opts) {
  Comparison out;
  for (const StrategyPlan& plan : comparison_plans(problem, eps, sigma, opts)) {
    StrategyReport report;
    report.plan = plan;
    const auto start = std::chrono::steady_clock::now();
    report.estimate =
        estimate_deviation(problem, plan, eps, trials, strategy_seed(master_seed, plan.strategy), exec);
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.strategies.push_back(std::move(report));
  }
  return out;
}

}  // namespace parsmd
