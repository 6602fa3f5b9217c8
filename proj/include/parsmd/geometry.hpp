#ifndef PARSMD_GEOMETRY_HPP
#define PARSMD_GEOMETRY_HPP

#include <parsmd/types.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace parsmd {

enum class GeometryKind { EuclideanBall, EntropySimplex };

// A prox-setup: feasible set, norm, prox-function d and its prox-center x0.
//
//   EuclideanBall:  Q = {x : |x - c|_2 <= r},  d(x) = 0.5 |x - c|_2^2,  norm l2.
//   EntropySimplex: Q = {x : sum x = 1, x_i >= gamma / n},
//                   d(x) = ln n + sum x_i ln x_i,  norm l1.
//
// Both prox-functions are 1-strongly convex in the declared norm and vanish
// at the prox-center.
template <typename Scalar>
struct ProxSetup {
  GeometryKind kind = GeometryKind::EuclideanBall;
  Eigen::Index dimension = 1;
  Scalar radius = Scalar(1);
  Vector<Scalar> center;
  Scalar gamma = Scalar(0);

  // Lower bound gamma / n on every simplex coordinate.
  Scalar floor() const { return gamma / static_cast<Scalar>(dimension); }

  Vector<Scalar> prox_center() const {
    if (kind == GeometryKind::EuclideanBall) return center;
    return Vector<Scalar>::Constant(dimension, Scalar(1) / static_cast<Scalar>(dimension));
  }
};

inline constexpr double kDefaultSimplexFloor = 1e-3;

template <typename Scalar>
ProxSetup<Scalar> euclidean_ball(Vector<Scalar> center, Scalar radius) {
  if (center.size() < 1) throw DomainError("euclidean_ball: dimension must be >= 1");
  if (!(radius > Scalar(0)) || !std::isfinite(radius))
    throw DomainError("euclidean_ball: radius must be positive and finite");
  if (!all_finite(center)) throw DomainError("euclidean_ball: center must be finite");
  ProxSetup<Scalar> s;
  s.kind = GeometryKind::EuclideanBall;
  s.dimension = center.size();
  s.radius = radius;
  s.center = std::move(center);
  return s;
}

template <typename Scalar>
ProxSetup<Scalar> entropy_simplex(Eigen::Index n, Scalar gamma = Scalar(kDefaultSimplexFloor)) {
  if (n < 1) throw DomainError("entropy_simplex: dimension must be >= 1");
  if (!(gamma >= Scalar(0) && gamma < Scalar(1)))
    throw DomainError("entropy_simplex: gamma must lie in [0, 1)");
  ProxSetup<Scalar> s;
  s.kind = GeometryKind::EntropySimplex;
  s.dimension = n;
  s.gamma = gamma;
  return s;
}

// Absolute slack used when validating caller-supplied points.
inline constexpr double kFeasibilityTolerance = 1e-9;

template <typename Scalar, typename Derived>
bool is_feasible(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<Derived>& x,
                 Scalar tol = Scalar(kFeasibilityTolerance)) {
  if (x.size() != setup.dimension || !all_finite(x)) return false;
  if (setup.kind == GeometryKind::EuclideanBall)
    return (x - setup.center).norm() <= setup.radius + tol;
  if (std::abs(x.sum() - Scalar(1)) > tol) return false;
  return x.minCoeff() >= setup.floor() - tol;
}

namespace detail {

template <typename Scalar, typename Derived>
void require_feasible(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<Derived>& x,
                      const char* what) {
  if (x.size() != setup.dimension)
    throw DomainError(std::string(what) + ": dimension mismatch (expected " +
                      std::to_string(setup.dimension) + ", got " + std::to_string(x.size()) +
                      ")");
  if (!is_feasible(setup, x)) throw DomainError(std::string(what) + ": point is infeasible");
}

template <typename Scalar>
Scalar xlogx(Scalar t) {
  return t > Scalar(0) ? t * std::log(t) : Scalar(0);
}

}  // namespace detail

// Norm in which d is 1-strongly convex, and its dual.
template <typename Scalar, typename Derived>
Scalar primal_norm(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<Derived>& v) {
  return setup.kind == GeometryKind::EuclideanBall ? v.norm() : v.template lpNorm<1>();
}

template <typename Scalar, typename Derived>
Scalar dual_norm(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<Derived>& v) {
  return setup.kind == GeometryKind::EuclideanBall ? v.norm()
                                                   : v.template lpNorm<Eigen::Infinity>();
}

template <typename Scalar, typename Derived>
Scalar prox_function(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<Derived>& x) {
  if (setup.kind == GeometryKind::EuclideanBall)
    return Scalar(0.5) * (x - setup.center).squaredNorm();
  Scalar acc = std::log(static_cast<Scalar>(setup.dimension));
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += detail::xlogx(x(i));
  return acc;
}

template <typename Scalar, typename Derived>
Vector<Scalar> prox_gradient(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<Derived>& x) {
  if (setup.kind == GeometryKind::EuclideanBall) return x - setup.center;
  if (!(x.minCoeff() > Scalar(0)))
    throw DomainError("prox_gradient: entropy gradient undefined on the simplex boundary");
  return (x.array().log() + Scalar(1)).matrix();
}

// Bregman divergence V_z(x) = d(x) - d(z) - <grad d(z), x - z>.
// On the simplex this is the KL divergence sum x_i ln(x_i / z_i), which
// requires z strictly positive.
template <typename Scalar, typename DerivedZ, typename DerivedX>
Scalar bregman(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<DerivedZ>& z,
               const Eigen::MatrixBase<DerivedX>& x) {
  detail::require_feasible(setup, z, "bregman");
  detail::require_feasible(setup, x, "bregman");
  if (setup.kind == GeometryKind::EuclideanBall) return Scalar(0.5) * (x - z).squaredNorm();
  if (!(z.minCoeff() > Scalar(0)))
    throw DomainError("bregman: z lies on the simplex boundary, divergence undefined");
  Scalar acc(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > Scalar(0)) acc += x(i) * (std::log(x(i)) - std::log(z(i)));
  }
  // Sums may differ from 1 by rounding; the linear term restores exactness.
  acc += z.sum() - x.sum();
  return acc < Scalar(0) ? Scalar(0) : acc;
}

// KL projection of a positive vector p (any scale) onto
// {y : sum y = 1, y_i >= floor}: y_i = max(floor, t * p_i) for the unique
// t making the sum 1. Coordinates falling below the floor are clipped and the
// remaining mass is redistributed proportionally until no violation remains.
template <typename Scalar>
Vector<Scalar> project_clipped_simplex(const Vector<Scalar>& p, Scalar floor) {
  const Eigen::Index n = p.size();
  Vector<Scalar> y = p / p.sum();
  if (floor <= Scalar(0)) return y;
  std::vector<bool> clipped(static_cast<std::size_t>(n), false);
  Eigen::Index n_clipped = 0;
  for (;;) {
    Scalar free_mass(0);
    for (Eigen::Index i = 0; i < n; ++i)
      if (!clipped[static_cast<std::size_t>(i)]) free_mass += p(i);
    const Scalar scale = (Scalar(1) - static_cast<Scalar>(n_clipped) * floor) / free_mass;
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (clipped[ui]) {
        y(i) = floor;
      } else if (scale * p(i) < floor) {
        clipped[ui] = true;
        ++n_clipped;
        changed = true;
      } else {
        y(i) = scale * p(i);
      }
    }
    if (!changed) break;
  }
  return y;
}

// Mirr_x(v) = argmin_{y in Q} <v, y - x> + V_x(y), with v = h * g already scaled.
template <typename Scalar, typename DerivedX, typename DerivedV>
Vector<Scalar> mirror_step(const ProxSetup<Scalar>& setup, const Eigen::MatrixBase<DerivedX>& x,
                           const Eigen::MatrixBase<DerivedV>& v) {
  detail::require_feasible(setup, x, "mirror_step");
  if (v.size() != setup.dimension) throw DomainError("mirror_step: dimension mismatch");
  if (!all_finite(v)) throw DomainError("mirror_step: non-finite step vector");

  if (setup.kind == GeometryKind::EuclideanBall) {
    Vector<Scalar> offset = x - v - setup.center;
    const Scalar dist = offset.norm();
    if (dist > setup.radius) offset *= setup.radius / dist;
    return setup.center + offset;
  }

  // zero coordinates (possible only when gamma = 0) stay at zero.
  // log-domain multiplicative update, shifted by max(-v) before exponentiating
  Vector<Scalar> logits = x.array().log().matrix() - v;
  const Scalar shift = logits.maxCoeff();
  Vector<Scalar> weights = (logits.array() - shift).exp().matrix();
  return project_clipped_simplex<Scalar>(weights, setup.floor());
}

}  // namespace parsmd

#endif  // PARSMD_GEOMETRY_HPP
