#include "kgs/soliton.hpp"

#include <cmath>

namespace kgs {

Vec3 momentum_of_velocity(const Vec3& v) { return lorentz_gamma(v) * v; }

Vec3 velocity_of_momentum(const Vec3& p) { return p / std::sqrt(1.0 + p.squaredNorm()); }

Mat3 momentum_velocity_jacobian(const Vec3& v) {
  const double gamma = lorentz_gamma(v);
  return gamma * Mat3::Identity() + gamma * gamma * gamma * v * v.transpose();
}

SolitonParams soliton_trajectory(const SolitonParams& sigma0, double t) {
  if (sigma0.v.squaredNorm() >= 1.0) throw validation_error("superluminal: |v| >= 1");
  return {sigma0.b + t * sigma0.v, sigma0.v};
}

SpectralPair soliton_spectra(const Vec3& v, const ChargeProfile& profile, const Grid& grid,
                             double m) {
  lorentz_gamma(v);  // validates |v| < 1
  const SpectralField rho = rho_hat_on_grid(profile, grid);
  SpectralPair out(grid);
  const int n = grid.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = grid.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const double kv = ki * v[0] + kj * v[1] + kl * v[2];
        const double denom = k2 + m * m - kv * kv;
        const Complex psi = -rho[idx] / denom;
        out.psi[idx] = psi;
        out.pi[idx] = Complex(0.0, kv) * psi;
      }
    }
  }
  return out;
}

FullState soliton_state(const SolitonParams& sigma, const ChargeProfile& profile,
                        const Grid& grid, double m) {
  for (int a = 0; a < 3; ++a)
    if (std::abs(sigma.b[a]) > grid.half_length - profile.radius)
      throw validation_error("soliton_state: support clipped by the box");
  SpectralPair sp = soliton_spectra(sigma.v, profile, grid, m);
  if (sigma.b != Vec3::Zero()) {
    translate_inplace(sp.psi, sigma.b);
    translate_inplace(sp.pi, sigma.b);
  }
  FullState out(grid);
  out.fields = inverse(sp);
  out.q = sigma.b;
  out.p = momentum_of_velocity(sigma.v);
  return out;
}

TangentFrame tangent_vectors(const Vec3& v, const ChargeProfile& profile, const Grid& grid,
                             double m) {
  lorentz_gamma(v);
  const SpectralField rho = rho_hat_on_grid(profile, grid);
  const int n = grid.n;

  std::array<SpectralPair, 6> spec;
  for (auto& s : spec) s = SpectralPair(grid);

  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = grid.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const auto mk = detail::soliton_modes(ki, kj, kl, k2, rho[idx], v, m);
        const double kvec[3] = {ki, kj, kl};
        for (int a = 0; a < 3; ++a) {
          // -d_a in x-space is multiplication by +i k_a under this convention
          const Complex ika(0.0, kvec[a]);
          spec[a].psi[idx] = ika * mk.psi;
          spec[a].pi[idx] = ika * mk.pi;
          spec[a + 3].psi[idx] = mk.dpsi_dv[a];
          spec[a + 3].pi[idx] = mk.dpi_dv[a];
        }
      }
    }
  }

  const Mat3 dp = momentum_velocity_jacobian(v);
  TangentFrame frame;
  for (int a = 0; a < 3; ++a) {
    frame[a] = FullState(grid);
    frame[a].fields = inverse(spec[a]);
    frame[a].q = Vec3::Unit(a);
    frame[a].p = Vec3::Zero();
    frame[a + 3] = FullState(grid);
    frame[a + 3].fields = inverse(spec[a + 3]);
    frame[a + 3].q = Vec3::Zero();
    frame[a + 3].p = dp.col(a);
  }
  return frame;
}

}  // namespace kgs
