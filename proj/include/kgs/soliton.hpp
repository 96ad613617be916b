#pragma once

// The solitary manifold: traveling-wave states S(sigma) = (psi_v(x-b),
// pi_v(x-b), b, p_v) with |v| < 1, built in k-space from
//   psihat_v(k) = -rhohat(k) / (k^2 + m^2 - (k.v)^2),
//   pihat_v(k)  = i (k.v) psihat_v(k),
//   p_v = v / sqrt(1 - v^2),
// together with the tangent frame tau_1..tau_6 of the manifold at sigma.

#include <array>

#include "kgs/charge.hpp"
#include "kgs/fields.hpp"
#include "kgs/types.hpp"

namespace kgs {

struct SolitonParams {
  Vec3 b = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

Vec3 momentum_of_velocity(const Vec3& v);  // p_v = v/sqrt(1-v^2), |v| < 1
Vec3 velocity_of_momentum(const Vec3& p);  // v(p) = p/sqrt(1+p^2)

/// Jacobian d p_v / d v = gamma E + gamma^3 v v^T.
Mat3 momentum_velocity_jacobian(const Vec3& v);

/// Straight-line soliton motion sigma(t) = (b0 + v t, v).
SolitonParams soliton_trajectory(const SolitonParams& sigma0, double t);

/// Full soliton state at sigma; fields are translated to b via the exact
/// spectral phase. Fails if the support margin R_rho + |b_j| leaves the box.
FullState soliton_state(const SolitonParams& sigma, const ChargeProfile& profile,
                        const Grid& grid, double m);

/// Spectral soliton fields in the moving frame (b = 0).
SpectralPair soliton_spectra(const Vec3& v, const ChargeProfile& profile, const Grid& grid,
                             double m);

/// Tangent frame at b = 0, as functions of the moving-frame coordinate y:
///   tau_j     = (-d_j psi_v, -d_j pi_v, e_j, 0),        j = 1..3,
///   tau_{j+3} = (d_{v_j} psi_v, d_{v_j} pi_v, 0, d_{v_j} p_v).
using TangentFrame = std::array<FullState, 6>;
TangentFrame tangent_vectors(const Vec3& v, const ChargeProfile& profile, const Grid& grid,
                             double m);

namespace detail {

/// Per-wavenumber soliton amplitudes given rhohat(k); everything downstream
/// (projection, linearization, Gram matrices) uses these closed forms.
struct SolitonModes {
  Complex psi;         // psihat_v
  Complex pi;          // pihat_v
  Complex dpsi_dv[3];  // d_{v_j} psihat_v
  Complex dpi_dv[3];   // d_{v_j} pihat_v
};

inline SolitonModes soliton_modes(double kx, double ky, double kz, double k2, Complex rhohat,
                                  const Vec3& v, double m) {
  SolitonModes out;
  const double kv = kx * v[0] + ky * v[1] + kz * v[2];
  const double denom = k2 + m * m - kv * kv;
  out.psi = -rhohat / denom;
  out.pi = Complex(0.0, kv) * out.psi;
  const double kvec[3] = {kx, ky, kz};
  const double num_pi = (k2 + m * m + kv * kv) / denom;
  for (int j = 0; j < 3; ++j) {
    out.dpsi_dv[j] = 2.0 * kv * kvec[j] / denom * out.psi;
    out.dpi_dv[j] = Complex(0.0, kvec[j] * num_pi) * out.psi;
  }
  return out;
}

}  // namespace detail

}  // namespace kgs
