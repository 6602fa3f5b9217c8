#ifndef PARSMD_ORCHESTRATOR_HPP
#define PARSMD_ORCHESTRATOR_HPP

#include <parsmd/bounds.hpp>
#include <parsmd/problems.hpp>
#include <parsmd/smd.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace parsmd {

using Problem = StochasticProblem<double>;
using Run = RunResult<double>;

struct ExecutionOptions {
  unsigned workers = 1;
};

// Replicate i of outer trial t runs on StreamKey{master_seed, t, i}.
SmdConfig replicate_config(const StrategyPlan& plan, std::uint64_t master_seed, std::uint32_t trial,
                           std::uint32_t replicate);

// Runs plan.K independent SMD chains and returns them in replicate order.
std::vector<Run> run_replicates(const Problem& problem, const StrategyPlan& plan,
                                std::uint64_t master_seed, std::uint32_t trial = 0,
                                const ExecutionOptions& exec = {});

// Coordinate-wise average of the replicate outputs; gap evaluated at the average.
Run aggregate_average(const Problem& problem, const std::vector<Run>& replicates);

// Replicate with the smallest exact objective (lowest index on ties).
std::size_t select_min(const std::vector<Run>& replicates);

Run run_average_of_k(const Problem& problem, const StrategyPlan& plan, std::uint64_t master_seed,
                     const ExecutionOptions& exec = {}, std::uint32_t trial = 0);

Run run_min_of_k(const Problem& problem, const StrategyPlan& plan, std::uint64_t master_seed,
                 const ExecutionOptions& exec = {}, std::uint32_t trial = 0);

struct TrialRecord {
  std::uint32_t trial = 0;
  double gap = 0.0;
  bool exceeded = false;
  std::vector<double> replicate_gaps;
  std::optional<std::size_t> selected_replicate;  // min-of-K only
};

struct DeviationEstimate {
  StrategyKind strategy = StrategyKind::Single;
  double epsilon = 0.0;
  double target_sigma = 0.0;
  std::int64_t trials = 0;
  std::int64_t exceedances = 0;
  double empirical_probability = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double mean_gap = 0.0;
  double gap_std = 0.0;
  std::vector<TrialRecord> records;
};

// Runs T independent executions of the plan's strategy, counts gap > eps and
// attaches an exact 95% binomial interval. All T * K replicate chains share
// one job queue; results are gathered by (trial, replicate) before
// aggregation, so the estimate is independent of the worker count.
DeviationEstimate estimate_deviation(const Problem& problem, const StrategyPlan& plan, double eps,
                                     std::int64_t trials, std::uint64_t master_seed,
                                     const ExecutionOptions& exec = {});

struct StrategyReport {
  StrategyPlan plan;
  DeviationEstimate estimate;
  double wall_ms = 0.0;
};

struct Comparison {
  std::vector<StrategyReport> strategies;  // Single, AverageOfK, MinOfK
};

// Seed used for strategy `kind` when several strategies share one master seed.
std::uint64_t strategy_seed(std::uint64_t master_seed, StrategyKind kind);

// Builds the three plans from the problem constants. Single and AverageOfK
// use r_bar; MinOfK uses R.
std::vector<StrategyPlan> comparison_plans(const Problem& problem, double eps, double sigma,
                                           const BoundOptions& opts = {});

Comparison compare_strategies(const Problem& problem, double eps, double sigma, std::int64_t trials,
                              std::uint64_t master_seed, const ExecutionOptions& exec = {},
                              const BoundOptions& opts = {});

}  // namespace parsmd

#endif  // PARSMD_ORCHESTRATOR_HPP
