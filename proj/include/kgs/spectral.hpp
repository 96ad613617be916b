#pragma once

// Stationary (resolvent) layer of the linearized dynamics, in the frame with
// v = (|v|,0,0):
//   kappa(lambda) = gamma sqrt(lambda^2 + mu^2), mu = m/gamma,
//   g_lambda(y) = e^{-kappa|yt| - kappa1 yt_1} / (4 pi |yt|),  yt = (gamma y1, y2, y3),
//   K_jj = int k_j^2 |rhohat|^2 / (k^2+m^2-(|v|k1)^2) dk,
//   H_jj(lambda) = int k_j^2 |rhohat|^2 / (k^2+m^2+(i|v|k1+lambda)^2) dk,
//   M(lambda) = [[lambda E, -B_v], [K - H(lambda), lambda E]].
// On the imaginary axis the one-sided limits lambda = i omega + 0 are used;
// for |omega| > mu the real part is a principal value and the imaginary part
// the Plemelj surface integral over the singular ellipsoid T_omega.

#include <complex>

#include "kgs/charge.hpp"
#include "kgs/types.hpp"

namespace kgs {

/// Branch with Re kappa > 0 for Re lambda > 0; purely imaginary input is
/// treated as the limit from Re lambda > 0 (kappa = i sign(omega) gamma
/// sqrt(omega^2-mu^2) beyond the gap).
Complex kappa(Complex lambda, double vmag, double m);

/// Green function of D = -Lap + m^2 + (-v.grad + lambda)^2 at y != 0.
Complex green_function(Complex lambda, const Vec3& v, double m, const Vec3& y);

/// Diagonal of K in the v-aligned frame (K_par, K_perp, K_perp).
Vec3 K_matrix(double vmag, const ChargeProfile& profile, double m);

/// Diagonal of H(lambda); lambda with Re lambda = 0 means i omega + 0.
CVec3 H_matrix(Complex lambda, double vmag, const ChargeProfile& profile, double m);

/// Im H_jj(i omega + 0) for |omega| > mu via the surface integral
/// -(omega/|omega|) pi int_{T_omega} k_j^2 |rhohat|^2 / |grad Dhat_0| dS.
Vec3 im_H_surface(double omega, double vmag, const ChargeProfile& profile, double m);

struct ResolventSample {
  Complex lambda;
  Complex kappa;
  Vec3 K;        // diagonal entries
  CVec3 H;       // diagonal entries, H(2) == H(1) up to quadrature
  CMat6 M;
  Complex detM;           // direct 6x6 determinant
  Complex detM_factored;  // prod_j (lambda^2 + B_jj (K_jj - H_jj))
};

ResolventSample M_matrix(Complex lambda, double vmag, const ChargeProfile& profile, double m);

/// Appendix-B expression
///   1/(M-r-w) + 1/(M-r+w) - 2/(M-r) + 1/(M+r+w) + 1/(M+r-w) - 2/(M+r);
/// positive (possibly +inf) on the admissible range.
double appendix_b_value(double big_m, double r, double omega);
bool appendix_b_check(double big_m, double r, double omega);

struct PuiseuxFit {
  double branch_omega;  // +mu or -mu
  CMat6 R0, R1;         // M^{-1}(i omega) ~ R0 + R1 s(omega), s = sqrt(mu^2-omega^2)|_{+0}
  double residual;      // rms misfit over the sample windows, relative
  double halfpower_norm;  // Frobenius norm of R1
};

/// Sample M^{-1}(i omega) on both sides of the branch point side*mu and fit
/// the truncated Puiseux expansion.
PuiseuxFit puiseux_fit(double vmag, const ChargeProfile& profile, double m, int side,
                       double window = 0.15, int points_per_side = 10);

}  // namespace kgs
