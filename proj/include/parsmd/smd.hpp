#ifndef PARSMD_SMD_HPP
#define PARSMD_SMD_HPP

#include <parsmd/geometry.hpp>
#include <parsmd/problems.hpp>
#include <parsmd/random.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace parsmd {

// ceil() that treats values within 1e-9 relative of an integer as that
// integer, so e.g. 2 / 0.1^2 yields 200 rather than 201.
inline std::int64_t ceil_to_count(double x) {
  if (!std::isfinite(x) || x > 9.0e18) throw DomainError("iteration count overflows");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x)))
    return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(x));
}

// N = ceil(2 M^2 R^2 / eps^2): the iteration count after which
// E f(x_bar) - f* <= eps.
inline std::int64_t iterations_for_expectation(double M, double R, double eps) {
  if (!(M > 0.0) || !(R > 0.0) || !(eps > 0.0))
    throw DomainError("iterations_for_expectation: M, R and eps must be positive");
  return std::max<std::int64_t>(1, ceil_to_count(2.0 * M * M * R * R / (eps * eps)));
}

// h = (R / M) sqrt(2 / N).
inline double stepsize(double M, double R, std::int64_t N) {
  if (!(M > 0.0) || !(R > 0.0) || N < 1)
    throw DomainError("stepsize: M and R must be positive and N >= 1");
  return (R / M) * std::sqrt(2.0 / static_cast<double>(N));
}

struct SmdConfig {
  std::int64_t N = 1;
  double h = 1.0;
  StreamKey key;
  bool record_trajectory = false;
};

// Quantities entering the one-step inequality
//   2 V_{x+}(x*) <= 2 V_x(x*) + 2 h <g, x* - x> + h^2 |g|_*^2.
struct StepRecord {
  double bregman_before = 0.0;  // V_{x^k}(x*)
  double bregman_after = 0.0;   // V_{x^{k+1}}(x*)
  double inner = 0.0;           // <g^k, x* - x^k>
  double grad_dual_sq = 0.0;    // |g^k|_*^2
};

template <typename Scalar>
struct RunResult {
  Vector<Scalar> x_bar;
  double gap = 0.0;
  std::int64_t iterations = 0;
  std::int64_t oracle_calls = 0;
  std::vector<StepRecord> trajectory;
};

// Slack of the one-step inequality (rhs - lhs); nonnegative when it holds.
inline double step_inequality_slack(const StepRecord& r, double h) {
  return 2.0 * r.bregman_before + 2.0 * h * r.inner + h * h * r.grad_dual_sq -
         2.0 * r.bregman_after;
}

// One SMD chain driven by an arbitrary stochastic oracle
// g = oracle(x, rng): x^{k+1} = Mirr_{x^k}(h g^k) from the prox-center,
// returning the average of x^0 .. x^{N-1} (gap left at 0). When `reference`
// is given and trajectory recording is on, step records are taken at u = *reference.
template <typename Scalar, typename Oracle>
RunResult<Scalar> run_smd(const ProxSetup<Scalar>& setup, Oracle&& oracle, const SmdConfig& config,
                          const Vector<Scalar>* reference = nullptr) {
  if (config.N < 1) throw DomainError("run_smd: N must be >= 1");
  if (!(config.h > 0.0) || !std::isfinite(config.h))
    throw DomainError("run_smd: step size must be positive and finite");
  if (config.N > std::numeric_limits<std::uint32_t>::max())
    throw DomainError("run_smd: N exceeds the random stream's iteration range");
  const bool record = config.record_trajectory && reference != nullptr;

  const auto h = static_cast<Scalar>(config.h);
  RunResult<Scalar> out;
  Vector<Scalar> x = setup.prox_center();
  Vector<Scalar> avg = Vector<Scalar>::Zero(setup.dimension);
  if (record) out.trajectory.reserve(static_cast<std::size_t>(config.N));

  for (std::int64_t k = 0; k < config.N; ++k) {
    avg += (x - avg) / static_cast<Scalar>(k + 1);
    RandomStream rng(config.key, static_cast<std::uint32_t>(k));
    const Vector<Scalar> g = oracle(x, rng);
    Vector<Scalar> next = mirror_step(setup, x, h * g);
    if (record) {
      StepRecord rec;
      rec.bregman_before = static_cast<double>(bregman(setup, x, *reference));
      rec.bregman_after = static_cast<double>(bregman(setup, next, *reference));
      rec.inner = static_cast<double>(g.dot(*reference - x));
      const Scalar gn = dual_norm(setup, g);
      rec.grad_dual_sq = static_cast<double>(gn * gn);
      out.trajectory.push_back(rec);
    }
    x = std::move(next);
  }
  out.iterations = config.N;
  out.oracle_calls = config.N;
  out.x_bar = std::move(avg);
  return out;
}

// SMD on a StochasticProblem. The loop only queries sample_subgradient; f is
// evaluated once afterwards to report the gap f(x_bar) - f*.
template <typename Scalar>
RunResult<Scalar> run_smd(const StochasticProblem<Scalar>& problem, const SmdConfig& config) {
  const Optimum<Scalar> opt = optimal_value(problem);
  auto oracle = [&problem](const Vector<Scalar>& x, RandomStream& rng) {
    return sample_subgradient(problem, x, rng);
  };
  RunResult<Scalar> out = run_smd(problem.setup, oracle, config, &opt.point);
  out.gap = static_cast<double>(exact_objective(problem, out.x_bar) - opt.value);
  return out;
}

}  // namespace parsmd

#endif  // PARSMD_SMD_HPP
