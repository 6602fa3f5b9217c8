#ifndef PARSMD_TYPES_HPP
#define PARSMD_TYPES_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace parsmd {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;

// Raised for dimension mismatches, infeasible points and other violated
// preconditions of the numerical routines.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.array().isFinite().all();
}

}  // namespace parsmd

#endif  // PARSMD_TYPES_HPP
