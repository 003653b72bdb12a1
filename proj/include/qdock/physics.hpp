#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace qdock::physics {

// Lorentz-Berthelot combination rules.
template <typename Scalar>
Scalar mix_epsilon(Scalar eps_a, Scalar eps_b) {
  using std::sqrt;
  return sqrt(eps_a * eps_b);
}

template <typename Scalar>
Scalar mix_r_min(Scalar r_a, Scalar r_b) {
  return (r_a + r_b) / Scalar(2);
}

// Softened 8-4 Lennard-Jones pair energy; minimum -epsilon at r = r_min.
template <typename Scalar>
Scalar lj_8_4(Scalar epsilon, Scalar r_min, Scalar r) {
  const Scalar s = r_min / r;
  const Scalar s2 = s * s;
  const Scalar s4 = s2 * s2;
  return epsilon * (s4 * s4 - Scalar(2) * s4);
}

// Angle at vertex `b` of the triangle a-b-c, in degrees. atan2 keeps full
// precision near 0 and 180 degrees.
template <typename DerivedA, typename DerivedB, typename DerivedC>
typename DerivedA::Scalar angle_deg(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                    const Eigen::MatrixBase<DerivedC>& c) {
  using Scalar = typename DerivedA::Scalar;
  using std::atan2;
  const Eigen::Matrix<Scalar, 3, 1> u = a - b;
  const Eigen::Matrix<Scalar, 3, 1> v = c - b;
  return atan2(u.cross(v).norm(), u.dot(v)) * Scalar(180) / Scalar(EIGEN_PI);
}

}  // namespace qdock::physics
