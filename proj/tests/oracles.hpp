#pragma once

// Test-only oracles, independent of the spectral implementation paths they
// check.

#include <cmath>
#include <functional>

#include "kgs/quadrature.hpp"
#include "kgs/types.hpp"

namespace kgs::oracles {

using SpaceFn = std::function<double(const Vec3&)>;

// Retarded Klein-Gordon kernel applied to smooth data f at the point x0:
//   [R(t) * f](x0) = (1/(4 pi t)) int_{|y|=t} f(x0+y) dS
//     - (m/(4 pi)) int_{|y|<=t} J1(m sqrt(t^2-|y|^2))/sqrt(t^2-|y|^2) f(x0+y) dy,
// with J1 the Bessel function of order one.
inline double retarded_kernel(const SpaceFn& f, const Vec3& x0, double t, double m) {
  const int nmu = 32, nphi = 64, nth = 64;
  const GaussRule& gm = gauss_legendre(nmu);
  const auto sphere_avg = [&](double radius) {
    double acc = 0.0;
    for (int b = 0; b < nmu; ++b) {
      const double mu = gm.x[b];
      const double st = std::sqrt(1.0 - mu * mu);
      for (int c = 0; c < nphi; ++c) {
        const double phi = 2.0 * M_PI * c / nphi;
        const Vec3 y(radius * mu, radius * st * std::cos(phi), radius * st * std::sin(phi));
        acc += gm.w[b] * (2.0 * M_PI / nphi) * f(x0 + y);
      }
    }
    return acc;  // integral over the unit sphere directions (4 pi average * 4pi)
  };

  const double shell = t / (4.0 * M_PI) * sphere_avg(t);

  // volume term with r = t sin(theta): the 1/sqrt(t^2-r^2) weight cancels
  const GaussRule& gt = gauss_legendre(nth);
  double vol = 0.0;
  for (int a = 0; a < nth; ++a) {
    const double th = 0.25 * M_PI * (gt.x[a] + 1.0);
    const double w = 0.25 * M_PI * gt.w[a];
    const double s = std::sin(th), c = std::cos(th);
    vol += w * s * s * std::cyl_bessel_j(1, m * t * c) * sphere_avg(t * s);
  }
  vol *= -m / (4.0 * M_PI) * t * t;
  return shell + vol;
}

/// psi(x0, t) of the free Klein-Gordon flow with data (psi0, pi0):
/// d/dt[R(t)*psi0] + R(t)*pi0, the time derivative by centered differences.
inline double kg_point_value(const SpaceFn& psi0, const SpaceFn& pi0, const Vec3& x0, double t,
                             double m, double dt = 1e-3) {
  const double dpsi = (retarded_kernel(psi0, x0, t + dt, m) -
                       retarded_kernel(psi0, x0, t - dt, m)) /
                      (2.0 * dt);
  return dpsi + retarded_kernel(pi0, x0, t, m);
}

}  // namespace kgs::oracles
