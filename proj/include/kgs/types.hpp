#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>

namespace kgs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using CVec3 = Eigen::Vector3cd;
using CMat6 = Eigen::Matrix<std::complex<double>, 6, 6>;
using Complex = std::complex<double>;

// (2*pi)^{3/2}; the Fourier convention is (2pi)^{-3/2} e^{+ikx} forward everywhere.
inline constexpr double two_pi_pow_3_2 = 15.749609945722419;

/// Invalid parameters or configuration (|v|>=1, negative radius, grid mismatch, ...).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (Newton not converging, quadrature stagnating, blow-up).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double lorentz_gamma(const Vec3& v) {
  const double v2 = v.squaredNorm();
  if (v2 >= 1.0) throw validation_error("superluminal: |v| >= 1");
  return 1.0 / std::sqrt(1.0 - v2);
}

}  // namespace kgs
