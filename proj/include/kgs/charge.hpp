#pragma once

// Charge distributions rho: spherically symmetric, compactly supported,
// twice weakly differentiable. rho(x) = rho1(|x|) with rho1 = 0 for r >= R.
// The Fourier transform uses the (2pi)^{-3/2} e^{+ikx} convention, which for
// radial profiles reduces to
//   rhohat(k) = (2pi)^{-3/2} (4pi/|k|) int_0^R r sin(|k| r) rho1(r) dr.

#include <optional>
#include <string>
#include <vector>

#include "kgs/fields.hpp"
#include "kgs/types.hpp"

namespace kgs {

enum class ProfileKind {
  QuarticBump,  // A (1 - r^2/R^2)^2 on [0, R]; C^1 at the boundary
  Ball,         // A on [0, R]; useful only to exercise Wiener-condition failure
  Tabulated,    // rho1 sampled uniformly on [0, R]
};

struct ChargeProfile {
  ProfileKind kind = ProfileKind::QuarticBump;
  double amplitude = 1.0;
  double radius = 2.0;  // support radius R_rho
  std::vector<double> radial_samples;  // Tabulated only: rho1 at r = j*R/(M-1)

  double rho1(double r) const;
  double total_charge() const;  // int rho dx
  void validate() const;
};

ProfileKind profile_kind_from_string(const std::string& s);
std::string to_string(ProfileKind k);

/// Radial Fourier transform at |k| = kmag (real and even in k).
double rho_hat(const ChargeProfile& profile, double kmag);
inline double rho_hat(const ChargeProfile& profile, const Vec3& k) {
  return rho_hat(profile, k.norm());
}

struct WienerReport {
  double min_abs = 0.0;    // min |rhohat| over the scan (after local refinement)
  double argmin = 0.0;     // |k| at the minimum
  double rho_hat0 = 0.0;   // rhohat(0)
  double threshold = 0.0;  // absolute threshold used
  bool pass = false;
};

/// Scan |rhohat| on n points of [0, k_max], refine around the scan minimum,
/// fail when the minimum drops below rel_threshold * |rhohat(0)|.
WienerReport wiener_check(const ChargeProfile& profile, double k_max, int n,
                          double rel_threshold = 1e-12);

/// Samples of rho(x - center); errors out if the support does not fit the box.
ScalarField rho_on_grid(const ChargeProfile& profile, const Grid& grid, const Vec3& center);

/// Band-limited realization of rho on the grid: the exact radial rho_hat
/// evaluated at every grid wavenumber. The unpaired Nyquist planes are
/// zeroed so that parity cancellations (odd integrands summing to zero) hold
/// exactly in grid sums. This is the charge density the spectral solver
/// machinery works with; rho_on_grid is plain x-space sampling.
SpectralField rho_hat_on_grid(const ChargeProfile& profile, const Grid& grid);

}  // namespace kgs
