#include <parsmd/bounds.hpp>
#include <parsmd/smd.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace parsmd {

namespace {

void require_sigma(double sigma, const char* what) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError(std::string(what) + ": sigma must lie in (0, 1)");
}

void require_positive(double value, const char* name, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError(std::string(what) + ": " + name + " must be positive and finite");
}

std::int64_t ceil_count_at_least_one(double x) { return std::max<std::int64_t>(1, ceil_to_count(x)); }

}  // namespace

double default_c1_polynomial(double alpha) {
  if (!(alpha > 2.0)) throw DomainError("polynomial tail requires alpha > 2");
  return std::numbers::sqrt2 * alpha / (alpha - 2.0);
}

CaseConstants case_constants(const TailClass& tail, const BoundOptions& opts) {
  switch (tail.kind) {
    case TailKind::BoundedAS:
      return {std::numbers::sqrt2, 2.0 * std::numbers::sqrt2};
    case TailKind::SubGaussian:
      return {2.0 * std::numbers::sqrt2, 2.0 * std::numbers::sqrt2};
    case TailKind::Polynomial: {
      if (!(tail.alpha > 2.0)) throw DomainError("case_constants: polynomial tail requires alpha > 2");
      const double c1 =
          opts.c1_polynomial > 0.0 ? opts.c1_polynomial : default_c1_polynomial(tail.alpha);
      return {c1, 1.0};
    }
  }
  throw DomainError("case_constants: unknown tail class");
}

double deviation_constant(const TailClass& tail, const BoundOptions& opts) {
  const CaseConstants c = case_constants(tail, opts);
  return c.c1 * c.c1 * std::max(1.0, c.c2 * c.c2 / 2.0);
}

ValidityReport check_validity(std::int64_t N, double sigma, const TailClass& tail,
                              const BoundOptions& opts) {
  require_sigma(sigma, "check_validity");
  ValidityReport r;
  r.N = N;
  switch (tail.kind) {
    case TailKind::BoundedAS:
      r.message = "no side condition for the bounded class";
      return r;
    case TailKind::SubGaussian:
      r.condition = "ln σ⁻¹ ≪ N";
      r.scale = std::log(1.0 / sigma);
      break;
    case TailKind::Polynomial:
      if (!(tail.alpha > 2.0)) throw DomainError("check_validity: polynomial tail requires alpha > 2");
      r.condition = "σ^(-1/(α-1)) ≪ N";
      r.scale = std::pow(sigma, -1.0 / (tail.alpha - 1.0));
      break;
  }
  const auto n = static_cast<double>(N);
  std::ostringstream msg;
  if (n >= opts.validity_multiplier * r.scale) {
    r.status = ValidityStatus::Ok;
    msg << "validity condition " << r.condition << " satisfied";
  } else if (n >= opts.warning_multiplier * r.scale) {
    r.status = ValidityStatus::Warning;
    msg << "validity condition " << r.condition << " only marginally satisfied: N = " << N
        << " < " << opts.validity_multiplier << " x " << r.scale;
  } else {
    r.status = ValidityStatus::Violated;
    msg << "bound not applicable: validity condition " << r.condition << " violated (N = " << N
        << " < " << opts.warning_multiplier << " x " << r.scale << ")";
  }
  r.message = msg.str();
  return r;
}

double deviation_bound(double M, double R, double r_bar, std::int64_t N, double sigma,
                       const TailClass& tail, const BoundOptions& opts) {
  require_positive(M, "M", "deviation_bound");
  require_positive(R, "R", "deviation_bound");
  require_positive(r_bar, "r_bar", "deviation_bound");
  require_sigma(sigma, "deviation_bound");
  if (N < 1) throw DomainError("deviation_bound: N must be >= 1");
  ValidityReport validity = check_validity(N, sigma, tail, opts);
  if (validity.status == ValidityStatus::Violated) throw BoundNotApplicable(std::move(validity));
  const CaseConstants c = case_constants(tail, opts);
  return c.c1 * M / std::sqrt(static_cast<double>(N)) *
         (R + c.c2 * r_bar * std::sqrt(std::log(1.0 / sigma)));
}

std::int64_t deviation_N(double M, double r_bar, double eps, double sigma, const TailClass& tail,
                         const BoundOptions& opts) {
  require_positive(M, "M", "deviation_N");
  require_positive(r_bar, "r_bar", "deviation_N");
  require_positive(eps, "eps", "deviation_N");
  require_sigma(sigma, "deviation_N");
  return ceil_count_at_least_one(deviation_constant(tail, opts) * M * M * r_bar * r_bar / (eps * eps));
}

double gaussian_tail(double mean, double sd, double c) {
  if (!(sd > 0.0)) throw DomainError("gaussian_tail: sd must be positive");
  return 0.5 * std::erfc((c - mean) / (sd * std::numbers::sqrt2));
}

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Single:
      return "single";
    case StrategyKind::AverageOfK:
      return "average_of_k";
    case StrategyKind::MinOfK:
      return "min_of_k";
  }
  return "unknown";
}

StrategyKind strategy_from_string(const std::string& name) {
  if (name == "single") return StrategyKind::Single;
  if (name == "average_of_k") return StrategyKind::AverageOfK;
  if (name == "min_of_k") return StrategyKind::MinOfK;
  throw DomainError("unknown strategy '" + name + "'");
}

namespace {

StrategyPlan base_plan(StrategyKind kind, double eps, double sigma, const TailClass& tail,
                       const BoundOptions& opts) {
  StrategyPlan plan;
  plan.strategy = kind;
  plan.epsilon = eps;
  plan.sigma = sigma;
  plan.tail_class = tail;
  const CaseConstants c = case_constants(tail, opts);
  plan.C1 = c.c1;
  plan.C2 = c.c2;
  plan.C = deviation_constant(tail, opts);
  return plan;
}

void attach_validity(StrategyPlan& plan, const BoundOptions& opts) {
  plan.validity = check_validity(plan.N, plan.sigma, plan.tail_class, opts);
  if (plan.validity.status == ValidityStatus::Violated) throw BoundNotApplicable(plan.validity);
}

}  // namespace

StrategyPlan average_of_k_parameters(double eps, double sigma, double M, double r_bar,
                                const TailClass& tail, const BoundOptions& opts) {
  require_positive(eps, "eps", "average_of_k_parameters");
  require_sigma(sigma, "average_of_k_parameters");
  require_positive(M, "M", "average_of_k_parameters");
  require_positive(r_bar, "r_bar", "average_of_k_parameters");
  StrategyPlan plan = base_plan(StrategyKind::AverageOfK, eps, sigma, tail, opts);
  plan.K = ceil_count_at_least_one(2.0 * std::log(1.0 / sigma));
  plan.N = ceil_count_at_least_one(4.0 * plan.C * M * M * r_bar * r_bar / (eps * eps));
  plan.h = stepsize(M, r_bar, plan.N);
  attach_validity(plan, opts);
  return plan;
}

StrategyPlan min_of_k_parameters(double eps, double sigma, double M, double R,
                                 const TailClass& tail) {
  require_positive(eps, "eps", "min_of_k_parameters");
  require_sigma(sigma, "min_of_k_parameters");
  require_positive(M, "M", "min_of_k_parameters");
  require_positive(R, "R", "min_of_k_parameters");
  StrategyPlan plan = base_plan(StrategyKind::MinOfK, eps, sigma, tail, {});
  plan.K = ceil_count_at_least_one(std::log2(1.0 / sigma));
  plan.N = ceil_count_at_least_one(8.0 * M * M * R * R / (eps * eps));
  plan.h = stepsize(M, R, plan.N);
  // Relies on the Markov inequality only; no tail side condition.
  plan.validity = check_validity(plan.N, sigma, TailClass{}, {});
  return plan;
}

StrategyPlan single_parameters(double eps, double sigma, double M, double r_bar,
                               const TailClass& tail, const BoundOptions& opts) {
  require_positive(eps, "eps", "single_parameters");
  require_sigma(sigma, "single_parameters");
  StrategyPlan plan = base_plan(StrategyKind::Single, eps, sigma, tail, opts);
  const double eps_mean = eps / (1.0 + std::sqrt(2.0 * std::log(1.0 / sigma)));
  plan.K = 1;
  plan.N = deviation_N(M, r_bar, eps_mean, sigma, tail, opts);
  plan.h = stepsize(M, r_bar, plan.N);
  attach_validity(plan, opts);
  return plan;
}

StrategyPlan expectation_parameters(double eps, double M, double R, const TailClass& tail) {
  StrategyPlan plan = base_plan(StrategyKind::Single, eps, 0.5, tail, {});
  plan.sigma = 0.0;
  plan.K = 1;
  plan.N = iterations_for_expectation(M, R, eps);
  plan.h = stepsize(M, R, plan.N);
  return plan;
}

StrategyPlan with_iterations(StrategyPlan plan, std::int64_t N, double M, double radius,
                             const BoundOptions& opts) {
  if (N < 1) throw DomainError("with_iterations: N must be >= 1");
  plan.N = N;
  plan.h = stepsize(M, radius, N);
  if (plan.strategy == StrategyKind::MinOfK || !(plan.sigma > 0.0)) return plan;
  attach_validity(plan, opts);
  return plan;
}

}  // namespace parsmd
