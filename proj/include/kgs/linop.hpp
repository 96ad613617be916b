#pragma once

// Linearization at a soliton: the generator
//   A_{v,w}(Psi,Pi,Q,P) = ( w.grad Psi + Pi,
//                           Lap Psi - m^2 Psi + w.grad Pi + Q.grad rho,
//                           B_v P,
//                           <Psi, grad rho> - K Q ),
// with B_v = nu (E - v (x) v), nu = sqrt(1-v^2), and K the grid version of
// K_ij = int k_i k_j |rhohat|^2 / (k^2+m^2-(kv)^2) dk (so that the tangent
// frame is an exact null/root system on the grid). States live in the moving
// frame y. Also the quadratic Hamiltonian H_{v,w}, the frozen flow of
// A_{v,v}, and the exact tangential/nonlinear remainder split of the full
// dynamics.

#include <functional>
#include <vector>

#include "kgs/charge.hpp"
#include "kgs/evolve.hpp"
#include "kgs/fields.hpp"
#include "kgs/soliton.hpp"

namespace kgs {

class LinearizedOperator {
 public:
  LinearizedOperator(const Vec3& v, const Vec3& w, const ChargeProfile& profile,
                     const Grid& grid, double m);

  FullState apply(const FullState& x) const;

  /// H_{v,w}(X) = 1/2 int[Pi^2+|grad Psi|^2+m^2 Psi^2] + int Pi (w.grad Psi)
  /// + int rho Q.grad Psi + 1/2 P.B_v P - 1/2 <Q.grad psi_v, Q.grad rho>.
  double hamiltonian(const FullState& x) const;

  /// Equivalent sum-of-squares form at w = v:
  /// 1/2 int |Pi+v.grad Psi|^2 + |Lam^{1/2}Psi - Lam^{-1/2}Q.grad rho|^2
  /// + 1/2 P.B_v P, evaluated in k-space.
  double hamiltonian_squares(const FullState& x) const;

  const Mat3& coupling_matrix() const { return K_; }  // grid K
  const Mat3& bv() const { return Bv_; }
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  double m_;
  Vec3 v_, w_;
  SpectralField rho_;
  SpectralPair soliton_;
  Mat3 K_;
  Mat3 Bv_;
};

/// |Omega(A X1, X2) + Omega(X1, A X2)|.
double skew_symmetry_residual(const LinearizedOperator& op, const FullState& x1,
                              const FullState& x2);

struct FrozenSample {
  double t;
  double energy;       // H_{v,v}(X(t))
  double norm_mbeta;   // ||X(t)||_{-beta}
  Vec3 Q, P;
};

struct FrozenSeries {
  std::vector<FrozenSample> samples;
  std::vector<double> snapshot_t;
  std::vector<FullState> snapshots;
};

/// Strang-split integration of Xdot = A_{v,v} X (free moving-frame flight of
/// the fields and Q-drift, exact coupling kicks).
FrozenSeries frozen_evolve(const Vec3& v, const FullState& x0, double dt, double T,
                           const ChargeProfile& profile, double m, double beta = 2.0,
                           int sample_every = 0, const std::vector<double>& snapshot_times = {});

/// The split Zdot = A Z + T + N along a decomposition Y = S(sigma) + Z:
/// T = -sum[(w-v)_l tau_l + vdot_l tau_{l+3}] and N the exact residual of the
/// full nonlinear vector field against the linearization and transport.
struct RemainderSplit {
  FullState T_term;
  FullState N_term;
};
RemainderSplit nonlinear_remainder(const SolitonParams& sigma, const Vec3& bdot, const Vec3& vdot,
                                   const FullState& z, const ChargeProfile& profile,
                                   const Grid& grid, double m);

}  // namespace kgs
