#ifndef PARSMD_BOUNDS_HPP
#define PARSMD_BOUNDS_HPP

#include <parsmd/problems.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace parsmd {

struct CaseConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

// Tunables for the closed-form bounds. A nonpositive c1_polynomial selects
// default_c1_polynomial(alpha).
struct BoundOptions {
  double c1_polynomial = 0.0;
  double validity_multiplier = 20.0;
  double warning_multiplier = 10.0;
};

// Placeholder C1(alpha) for the polynomial tail class, sqrt(2) alpha / (alpha - 2).
// Not a published constant; override through BoundOptions once calibrated.
double default_c1_polynomial(double alpha);

// (sqrt 2, 2 sqrt 2) bounded; (2 sqrt 2, 2 sqrt 2) sub-Gaussian; (C1(alpha), 1) polynomial.
CaseConstants case_constants(const TailClass& tail, const BoundOptions& opts = {});

// C = C1^2 max(1, C2^2 / 2): the smallest constant for which N >= C M^2 r_bar^2 / eps^2
// makes the deviation bound at level sigma at most eps (1 + sqrt(2 ln 1/sigma)).
double deviation_constant(const TailClass& tail, const BoundOptions& opts = {});

enum class ValidityStatus { Ok, Warning, Violated };

// Outcome of the "N large enough" side condition of the tail class:
//   sub-Gaussian: ln(1/sigma) << N;  polynomial: sigma^(-1/(alpha-1)) << N.
// "<<" is read as N >= validity_multiplier * scale; between warning_multiplier
// and validity_multiplier a warning is reported.
struct ValidityReport {
  ValidityStatus status = ValidityStatus::Ok;
  std::string condition;  // empty for the bounded class
  double scale = 0.0;     // ln(1/sigma) or sigma^(-1/(alpha-1))
  std::int64_t N = 0;
  std::string message;
};

ValidityReport check_validity(std::int64_t N, double sigma, const TailClass& tail,
                              const BoundOptions& opts = {});

class BoundNotApplicable : public std::runtime_error {
 public:
  explicit BoundNotApplicable(ValidityReport report)
      : std::runtime_error(report.message), report_(std::move(report)) {}
  const ValidityReport& report() const { return report_; }

 private:
  ValidityReport report_;
};

// High-probability bound (C1 M / sqrt N)(R + C2 r_bar sqrt(ln 1/sigma)) on
// f(x_bar^N) - f*, holding with probability >= 1 - sigma.
// Throws BoundNotApplicable when the validity condition is violated.
double deviation_bound(double M, double R, double r_bar, std::int64_t N, double sigma,
                       const TailClass& tail, const BoundOptions& opts = {});

// N = ceil(C M^2 r_bar^2 / eps^2).
std::int64_t deviation_N(double M, double r_bar, double eps, double sigma, const TailClass& tail,
                         const BoundOptions& opts = {});

// P{eta >= c} for eta ~ N(mean, sd^2).
double gaussian_tail(double mean, double sd, double c);

enum class StrategyKind { Single, AverageOfK, MinOfK };

const char* to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& name);

struct StrategyPlan {
  StrategyKind strategy = StrategyKind::Single;
  double epsilon = 0.0;
  double sigma = 0.0;
  std::int64_t N = 1;
  std::int64_t K = 1;
  double h = 0.0;
  TailClass tail_class;
  double C1 = 0.0;
  double C2 = 0.0;
  double C = 0.0;
  ValidityReport validity;

  std::int64_t oracle_calls_total() const { return N * K; }
  std::int64_t oracle_calls_per_worker() const { return N; }
};

// Average-of-K: K = ceil(2 ln 1/sigma), N = ceil(4 C M^2 r_bar^2 / eps^2),
// h = stepsize(M, r_bar, N).
StrategyPlan average_of_k_parameters(double eps, double sigma, double M, double r_bar,
                                const TailClass& tail, const BoundOptions& opts = {});

// Min-of-K: K = ceil(log2 1/sigma), N = ceil(8 M^2 R^2 / eps^2), h = stepsize(M, R, N).
// Each replicate is an eps/2-solution, so by Markov it fails with probability <= 1/2.
StrategyPlan min_of_k_parameters(double eps, double sigma, double M, double R,
                                 const TailClass& tail = {});

// Single chain sized for (eps, sigma): deviation_N at eps / (1 + sqrt(2 ln 1/sigma)),
// i.e. Theta(M^2 r_bar^2 ln(1/sigma) / eps^2) iterations, h = stepsize(M, r_bar, N).
StrategyPlan single_parameters(double eps, double sigma, double M, double r_bar,
                               const TailClass& tail, const BoundOptions& opts = {});

// Single chain sized for the expectation criterion only (N from
// iterations_for_expectation, h = stepsize(M, R, N)).
StrategyPlan expectation_parameters(double eps, double M, double R, const TailClass& tail = {});

// Recomputes step size and validity after N was overridden by the caller.
// Throws BoundNotApplicable if the new N violates the validity condition.
StrategyPlan with_iterations(StrategyPlan plan, std::int64_t N, double M, double radius,
                             const BoundOptions& opts = {});

}  // namespace parsmd

#endif  // PARSMD_BOUNDS_HPP
