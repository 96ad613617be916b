#pragma once

// Symplectic form Omega(Y1,Y2) = <Y1, J Y2>, the explicit 6x6 matrix
// Omega(tau_l, tau_j) with its 3x3 block
//   Omega^+(v) = K + (1-v^2)^{-1/2} E + (1-v^2)^{-3/2} v (x) v,
//   K_ij = int |rhohat|^2 k_i k_j (k^2+m^2+3(kv)^2) / (k^2+m^2-(kv)^2)^3 dk,
// and the symplectic orthogonal projection onto the solitary manifold.

#include "kgs/charge.hpp"
#include "kgs/fields.hpp"
#include "kgs/soliton.hpp"
#include "kgs/types.hpp"

namespace kgs {

/// Omega(Y1, Y2) = <psi1,pi2> - <pi1,psi2> + q1.p2 - p1.q2.
double omega(const FullState& y1, const FullState& y2);

struct OmegaMatrix {
  Mat3 K;           // the k-space quadrature block
  Mat3 omega_plus;  // K + gamma E + gamma^3 v v^T; symmetric positive definite
  Mat6 full;        // [[0, Omega^+], [-Omega^+, 0]]
};

/// Closed-form Omega(v) by adaptive Gauss-Legendre quadrature in spherical
/// k-coordinates (polar axis aligned with v), refined to rel. tol 1e-8.
OmegaMatrix omega_matrix(const Vec3& v, const ChargeProfile& profile, double m);

/// Gram matrix Omega(tau_l, tau_j), l,j = 1..6, from grid inner products.
Mat6 tangent_gram(const TangentFrame& frame);

/// Same Gram matrix evaluated directly from the k-space closed forms on the
/// grid (no field storage); equals tangent_gram to roundoff.
Mat6 tangent_gram(const Vec3& v, const ChargeProfile& profile, const Grid& grid, double m);

struct ProjectOptions {
  double rel_tol = 1e-10;
  int max_iterations = 50;
  double v_bar = 0.999;  // iterates with |v| >= v_bar abort as superluminal
};

struct ProjectionResult {
  SolitonParams sigma;
  FullState Z;       // transversal part in the moving frame y = x - b
  int newton_iters = 0;
  double residual = 0.0;  // max_j |Omega(Y - S(sigma), tau_j(sigma))|
};

/// Symplectic orthogonal projection: find sigma with
/// Omega(Y - S(sigma), tau_j(sigma)) = 0 by Newton iteration started at
/// sigma0 = (q, v(p)), Jacobian frozen to the tangent-frame Gram matrix.
ProjectionResult project(const FullState& y, const ChargeProfile& profile, double m,
                         const ProjectOptions& opts = {});

/// Same, for a state already held in spectral form.
ProjectionResult project(const SpectralPair& yhat, const Vec3& q, const Vec3& p,
                         const ChargeProfile& profile, double m, const ProjectOptions& opts = {});

/// Pi_v Z: symplectic orthogonal projection of a moving-frame state onto the
/// tangent space at velocity v, Pi_v Z = sum Pi_jl tau_j Omega(tau_l, Z).
FullState tangent_projector(const Vec3& v, const FullState& z, const ChargeProfile& profile,
                            double m);

/// P_v Z = Z - Pi_v Z.
FullState transversal_projector(const Vec3& v, const FullState& z, const ChargeProfile& profile,
                                double m);

}  // namespace kgs
