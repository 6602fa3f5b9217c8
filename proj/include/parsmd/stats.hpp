#ifndef PARSMD_STATS_HPP
#define PARSMD_STATS_HPP

#include <cstdint>
#include <span>

namespace parsmd {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval for
// `successes` out of `trials` at the given confidence level.
Interval clopper_pearson(std::int64_t successes, std::int64_t trials, double level = 0.95);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> values);

}  // namespace parsmd

#endif  // PARSMD_STATS_HPP
