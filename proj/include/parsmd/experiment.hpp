#ifndef PARSMD_EXPERIMENT_HPP
#define PARSMD_EXPERIMENT_HPP

#include <parsmd/manifest.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace parsmd {

enum ExitStatus : int { kExitOk = 0, kExitError = 1, kExitNotApplicable = 2 };

inline const std::vector<std::string> kCsvColumns = {
    "strategy", "epsilon", "sigma", "N", "K", "trials", "exceedances", "empirical_p",
    "ci_low", "ci_high", "mean_gap", "oracle_calls_total", "wall_ms"};

// Plans requested by the manifest, with N/K overrides applied.
// Throws BoundNotApplicable if a plan violates its validity condition.
std::vector<StrategyPlan> manifest_plans(const ExperimentManifest& m);

struct ExperimentOutput {
  Json summary;                         // deterministic given the seed
  std::vector<std::string> trial_lines; // JSON lines, one per trial
  std::string csv;
};

// Runs every planned strategy. The summary omits timing and worker count so
// that it is byte-identical for a fixed seed.
ExperimentOutput run_experiment(const ExperimentManifest& m, std::uint64_t master_seed,
                                const std::string& seed_source, unsigned workers);

// Writes all three files through temporaries and renames them into place
// only after every write succeeded.
void write_outputs(const OutputPaths& paths, const ExperimentOutput& out);

// Shortest round-trip decimal representation, shared by CSV and JSON output.
std::string format_double(double v);

struct BoundsQuery {
  double epsilon = 0.1;
  double sigma = 0.05;
  double M = 1.0;
  double R = 1.0;
  double r_bar = 1.0;
  TailClass tail;
  BoundOptions options;
};

// Tabulates the closed-form quantities for one parameter set.
Json bounds_table(const BoundsQuery& q);
std::string bounds_csv(const Json& table);

}  // namespace parsmd

#endif  // PARSMD_EXPERIMENT_HPP
