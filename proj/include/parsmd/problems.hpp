#ifndef PARSMD_PROBLEMS_HPP
#define PARSMD_PROBLEMS_HPP

#include <parsmd/geometry.hpp>
#include <parsmd/random.hpp>
#include <parsmd/types.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace parsmd {

enum class ObjectiveKind { LinearSimplex, QuadraticBall };

enum class NoiseKind { None, Uniform, Gaussian, Pareto };

// Additive noise on the random parameter xi = mean + z.
//   Uniform:  z_i ~ U[-scale, scale] i.i.d.
//   Gaussian: z_i ~ N(0, scale^2) i.i.d.
//   Pareto:   z = scale * sqrt(W) * u, u uniform on the unit sphere and
//             P(W >= t) = (1 + t)^(-alpha).
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double scale = 0.0;
  double alpha = 3.0;
};

enum class TailKind { BoundedAS, SubGaussian, Polynomial };

// Which tail assumption the stochastic subgradient satisfies: almost surely
// bounded, sub-Gaussian, or polynomial with exponent alpha > 2.
struct TailClass {
  TailKind kind = TailKind::BoundedAS;
  double alpha = 0.0;

  friend bool operator==(const TailClass&, const TailClass&) = default;
};

inline TailClass tail_class_of(const NoiseModel& noise) {
  switch (noise.kind) {
    case NoiseKind::Gaussian:
      return {TailKind::SubGaussian, 0.0};
    case NoiseKind::Pareto:
      return {TailKind::Polynomial, noise.alpha};
    default:
      return {TailKind::BoundedAS, 0.0};
  }
}

// M bounds the dual norm of the stochastic subgradient (second moment, tail
// scale or a.s. bound depending on the tail class); V_{x0}(x*) <= R^2 and
// max_{x in Q} V_x(x*) <= r_bar^2.
struct ProblemConstants {
  double M = 0.0;
  double R = 0.0;
  double r_bar = 0.0;
};

// f(x) = E f(x, xi) over a ball or clipped simplex, with closed-form f and x*.
//   LinearSimplex: f(x, xi) = <xi, x>,           E xi = mean (c).
//   QuadraticBall: f(x, xi) = 0.5 |x - xi|_2^2,  E xi = mean (mu).
template <typename Scalar>
struct StochasticProblem {
  ProxSetup<Scalar> setup;
  ObjectiveKind objective = ObjectiveKind::QuadraticBall;
  Vector<Scalar> mean;
  NoiseModel noise;
  ProblemConstants constants;

  TailClass tail_class() const { return tail_class_of(noise); }
  Eigen::Index dimension() const { return setup.dimension; }
};

// ---------------------------------------------------------------------------

namespace detail {

template <typename Scalar>
Scalar trace_covariance(const NoiseModel& noise, Eigen::Index n) {
  const auto dim = static_cast<Scalar>(n);
  const auto s = static_cast<Scalar>(noise.scale);
  switch (noise.kind) {
    case NoiseKind::Uniform:
      return dim * s * s / Scalar(3);
    case NoiseKind::Gaussian:
      return dim * s * s;
    case NoiseKind::Pareto:
      return s * s / static_cast<Scalar>(noise.alpha - 1.0);
    case NoiseKind::None:
      break;
  }
  return Scalar(0);
}

template <typename Scalar>
Vector<Scalar> draw_noise(const NoiseModel& noise, Eigen::Index n, RandomStream& rng) {
  Vector<Scalar> z = Vector<Scalar>::Zero(n);
  switch (noise.kind) {
    case NoiseKind::None:
      break;
    case NoiseKind::Uniform:
      for (Eigen::Index i = 0; i < n; ++i)
        z(i) = static_cast<Scalar>(rng.uniform(-noise.scale, noise.scale));
      break;
    case NoiseKind::Gaussian:
      for (Eigen::Index i = 0; i < n; ++i) z(i) = static_cast<Scalar>(noise.scale * rng.normal());
      break;
    case NoiseKind::Pareto: {
      const double w = std::pow(rng.uniform(), -1.0 / noise.alpha) - 1.0;
      const double radius = noise.scale * std::sqrt(w);
      Vector<Scalar> dir(n);
      Scalar norm(0);
      do {
        for (Eigen::Index i = 0; i < n; ++i) dir(i) = static_cast<Scalar>(rng.normal());
        norm = dir.norm();
      } while (!(norm > Scalar(0)));
      z = dir * static_cast<Scalar>(radius / norm);
      break;
    }
  }
  return z;
}

}  // namespace detail

// sup over Q of the dual norm of the exact gradient.
template <typename Scalar>
Scalar max_gradient_dual_norm(const StochasticProblem<Scalar>& p) {
  if (p.objective == ObjectiveKind::LinearSimplex) return p.mean.template lpNorm<Eigen::Infinity>();
  return p.setup.radius + (p.mean - p.setup.center).norm();
}

// Same supremum in the Euclidean norm, used by the polynomial tail class.
template <typename Scalar>
Scalar max_gradient_l2_norm(const StochasticProblem<Scalar>& p) {
  if (p.objective == ObjectiveKind::LinearSimplex) return p.mean.norm();
  return p.setup.radius + (p.mean - p.setup.center).norm();
}

// Feasible point at which |grad f(x)|_2 attains max_gradient_l2_norm.
template <typename Scalar>
Vector<Scalar> worst_case_point(const StochasticProblem<Scalar>& p) {
  if (p.objective == ObjectiveKind::LinearSimplex) return p.setup.prox_center();
  Vector<Scalar> dir = p.setup.center - p.mean;
  const Scalar len = dir.norm();
  if (len > Scalar(0)) {
    dir /= len;
  } else {
    dir = Vector<Scalar>::Unit(p.dimension(), 0);
  }
  return p.setup.center + p.setup.radius * dir;
}

template <typename Scalar, typename Derived>
Vector<Scalar> sample_subgradient(const StochasticProblem<Scalar>& p,
                                  const Eigen::MatrixBase<Derived>& x, RandomStream& rng) {
  detail::require_feasible(p.setup, x, "sample_subgradient");
  Vector<Scalar> z = detail::draw_noise<Scalar>(p.noise, p.dimension(), rng);
  if (p.objective == ObjectiveKind::LinearSimplex) return p.mean + z;
  return x - p.mean - z;
}

template <typename Scalar, typename Derived>
Scalar exact_objective(const StochasticProblem<Scalar>& p, const Eigen::MatrixBase<Derived>& x) {
  detail::require_feasible(p.setup, x, "exact_objective");
  if (p.objective == ObjectiveKind::LinearSimplex) return p.mean.dot(x);
  return Scalar(0.5) * (x - p.mean).squaredNorm() +
         Scalar(0.5) * detail::trace_covariance<Scalar>(p.noise, p.dimension());
}

template <typename Scalar>
struct Optimum {
  Scalar value;
  Vector<Scalar> point;
};

// Exact minimizer over Q. On the clipped simplex every coordinate sits at the
// floor except the smallest cost (lowest index on ties), which takes the rest.
template <typename Scalar>
Optimum<Scalar> optimal_value(const StochasticProblem<Scalar>& p) {
  if (p.objective == ObjectiveKind::QuadraticBall) {
    return {Scalar(0.5) * detail::trace_covariance<Scalar>(p.noise, p.dimension()), p.mean};
  }
  const Eigen::Index n = p.dimension();
  const Scalar floor = p.setup.floor();
  Eigen::Index best = 0;
  p.mean.minCoeff(&best);
  Vector<Scalar> x = Vector<Scalar>::Constant(n, floor);
  x(best) = Scalar(1) - static_cast<Scalar>(n - 1) * floor;
  return {p.mean.dot(x), std::move(x)};
}

// Closed-form (M, R, r_bar) for the problem's noise model and geometry.
//   M: a.s. sup (uniform, none); sqrt(2 G^2 + 4 n s^2) (Gaussian);
//      G_2 + s (Pareto), where G is the sup of the exact gradient norm.
//   R^2 = V_{x0}(x*);  r_bar^2 = 2 r^2 (ball) or ln(n / gamma) (simplex, +inf if gamma = 0).
template <typename Scalar>
ProblemConstants derive_constants(const StochasticProblem<Scalar>& p) {
  const auto n = static_cast<double>(p.dimension());
  const double s = p.noise.scale;
  const double grad_sup = static_cast<double>(max_gradient_dual_norm(p));
  ProblemConstants k;
  switch (p.noise.kind) {
    case NoiseKind::None:
      k.M = grad_sup;
      break;
    case NoiseKind::Uniform:
      k.M = p.objective == ObjectiveKind::LinearSimplex ? grad_sup + s : grad_sup + s * std::sqrt(n);
      break;
    case NoiseKind::Gaussian:
      k.M = std::sqrt(2.0 * grad_sup * grad_sup + 4.0 * n * s * s);
      break;
    case NoiseKind::Pareto:
      k.M = static_cast<double>(max_gradient_l2_norm(p)) + s;
      break;
  }
  if (!(k.M > 0.0)) throw DomainError("derive_constants: degenerate problem with M = 0");

  const Optimum<Scalar> opt = optimal_value(p);
  const Vector<Scalar> x0 = p.setup.prox_center();
  if (p.setup.kind == GeometryKind::EuclideanBall) {
    k.R = std::sqrt(static_cast<double>(bregman(p.setup, x0, opt.point)));
    k.r_bar = std::sqrt(2.0) * static_cast<double>(p.setup.radius);
  } else {
    k.R = std::sqrt(static_cast<double>(bregman(p.setup, x0, opt.point)));
    // unbounded without an interior floor
    k.r_bar = p.setup.gamma > Scalar(0) ? std::sqrt(std::log(n / static_cast<double>(p.setup.gamma)))
                                        : std::numeric_limits<double>::infinity();
  }
  return k;
}

// Validates the combination and fills in derived constants.
template <typename Scalar>
StochasticProblem<Scalar> make_problem(ProxSetup<Scalar> setup, ObjectiveKind objective,
                                       Vector<Scalar> mean, NoiseModel noise) {
  if (mean.size() != setup.dimension) throw DomainError("make_problem: mean has wrong dimension");
  if (!all_finite(mean)) throw DomainError("make_problem: mean must be finite");
  if (objective == ObjectiveKind::LinearSimplex && setup.kind != GeometryKind::EntropySimplex)
    throw DomainError("make_problem: LinearSimplex requires the entropy simplex geometry");
  if (objective == ObjectiveKind::QuadraticBall) {
    if (setup.kind != GeometryKind::EuclideanBall)
      throw DomainError("make_problem: QuadraticBall requires the Euclidean ball geometry");
    if ((mean - setup.center).norm() > setup.radius + Scalar(kFeasibilityTolerance))
      throw DomainError("make_problem: QuadraticBall mean must lie inside the ball");
  }
  if (!(noise.scale >= 0.0) || !std::isfinite(noise.scale))
    throw DomainError("make_problem: noise scale must be finite and nonnegative");
  if (noise.kind == NoiseKind::Pareto && !(noise.alpha > 2.0))
    throw DomainError("make_problem: polynomial tail requires alpha > 2");

  StochasticProblem<Scalar> p;
  p.setup = std::move(setup);
  p.objective = objective;
  p.mean = std::move(mean);
  p.noise = noise;
  p.constants = derive_constants(p);
  return p;
}

}  // namespace parsmd

#endif  // PARSMD_PROBLEMS_HPP
