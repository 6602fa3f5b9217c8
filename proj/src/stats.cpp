#include <parsmd/stats.hpp>
#include <parsmd/types.hpp>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>

namespace parsmd {

Interval clopper_pearson(std::int64_t successes, std::int64_t trials, double level) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw DomainError("clopper_pearson: need 0 <= successes <= trials, trials >= 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("clopper_pearson: level must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  Interval ci;
  ci.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, tail);
  ci.high = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - tail);
  return ci;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mean += (values[i] - mean) / static_cast<double>(i + 1);
  s.mean = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

}  // namespace parsmd
