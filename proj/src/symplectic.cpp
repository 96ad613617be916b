#include "kgs/symplectic.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kgs/quadrature.hpp"

namespace kgs {

double omega(const FullState& y1, const FullState& y2) {
  return dot(y1.fields.psi, y2.fields.pi) - dot(y1.fields.pi, y2.fields.psi) +
         y1.q.dot(y2.p) - y1.p.dot(y2.q);
}

namespace {

// Orthonormal frame with v-hat as first column; identity for v = 0.
Mat3 aligned_frame(const Vec3& v) {
  const double vn = v.norm();
  if (vn == 0.0) return Mat3::Identity();
  const Vec3 e1 = v / vn;
  Vec3 helper = std::abs(e1[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e2 = (helper - helper.dot(e1) * e1).normalized();
  const Vec3 e3 = e1.cross(e2);
  Mat3 R;
  R.col(0) = e1;
  R.col(1) = e2;
  R.col(2) = e3;
  return R;
}

// Vector-part contribution of Omega(a, b) for states with particle components
// (qa,pa), (qb,pb).
inline double omega_vec(const Vec3& qa, const Vec3& pa, const Vec3& qb, const Vec3& pb) {
  return qa.dot(pb) - pa.dot(qb);
}

// One sweep over the k-grid evaluating the tangent-frame modes; fn receives
// (flat index, tau-psi[6], tau-pi[6]) per wavenumber.
template <typename Fn>
void sweep_tangent_modes(const Grid& grid, const SpectralField& rho, const Vec3& v, double m,
                         Fn&& fn) {
  const int n = grid.n;
  std::size_t idx = 0;
  Complex tpsi[6], tpi[6];
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
          const Complex ika(0.0, kvec[a]);
          tpsi[a] = ika * mk.psi;
          tpi[a] = ika * mk.pi;
          tpsi[a + 3] = mk.dpsi_dv[a];
          tpi[a + 3] = mk.dpi_dv[a];
        }
        fn(idx, mk, tpsi, tpi);
      }
    }
  }
}

Mat6 gram_vector_part(const Vec3& v) {
  Mat6 g = Mat6::Zero();
  const Mat3 dp = momentum_velocity_jacobian(v);
  for (int l = 0; l < 6; ++l) {
    const Vec3 ql = l < 3 ? Vec3(Vec3::Unit(l)) : Vec3(Vec3::Zero());
    const Vec3 pl = l < 3 ? Vec3(Vec3::Zero()) : Vec3(dp.col(l - 3));
    for (int j = 0; j < 6; ++j) {
      const Vec3 qj = j < 3 ? Vec3(Vec3::Unit(j)) : Vec3(Vec3::Zero());
      const Vec3 pj = j < 3 ? Vec3(Vec3::Zero()) : Vec3(dp.col(j - 3));
      g(l, j) = omega_vec(ql, pl, qj, pj);
    }
  }
  return g;
}

Mat6 tangent_gram_spectral(const Vec3& v, const SpectralField& rho, const Grid& grid, double m) {
  Mat6 g = Mat6::Zero();
  sweep_tangent_modes(grid, rho, v, m,
                      [&](std::size_t, const detail::SolitonModes&, const Complex* tpsi,
                          const Complex* tpi) {
                        for (int l = 0; l < 6; ++l)
                          for (int j = l + 1; j < 6; ++j) {
                            const double s = (tpsi[l] * std::conj(tpi[j])).real() -
                                             (tpi[l] * std::conj(tpsi[j])).real();
                            g(l, j) += s;
                            g(j, l) -= s;
                          }
                      });
  g *= std::pow(M_PI / grid.half_length, 3);
  g += gram_vector_part(v);
  return g;
}

}  // namespace

Mat6 tangent_gram(const TangentFrame& frame) {
  Mat6 g = Mat6::Zero();
  for (int l = 0; l < 6; ++l)
    for (int j = 0; j < 6; ++j) g(l, j) = omega(frame[l], frame[j]);
  return g;
}

Mat6 tangent_gram(const Vec3& v, const ChargeProfile& profile, const Grid& grid, double m) {
  const SpectralField rho = rho_hat_on_grid(profile, grid);
  return tangent_gram_spectral(v, rho, grid, m);
}

OmegaMatrix omega_matrix(const Vec3& v, const ChargeProfile& profile, double m) {
  const double gamma = lorentz_gamma(v);
  const double vmag = v.norm();
  profile.validate();

  // K in the v-aligned frame: diagonal with entries K_par, K_perp, K_perp.
  //   K_par  = 2 pi  int r^4 mu^2   |rhohat|^2 W dmu dr,
  //   K_perp =   pi  int r^4 (1-mu^2) |rhohat|^2 W dmu dr,
  //   W = (r^2 + m^2 + 3 (v r mu)^2) / (r^2 + m^2 - (v r mu)^2)^3.
  const double r_max = 60.0 / profile.radius + 20.0;
  const auto radial = [&](double r, bool parallel) {
    const double a = rho_hat(profile, r);
    const double r2 = r * r;
    const auto angular = [&](double mu) {
      const double kv2 = vmag * vmag * r2 * mu * mu;
      const double denom = r2 + m * m - kv2;
      const double w = (r2 + m * m + 3.0 * kv2) / (denom * denom * denom);
      return (parallel ? 2.0 * mu * mu : (1.0 - mu * mu)) * w;
    };
    return M_PI * r2 * r2 * a * a * gl_integrate(angular, -1.0, 1.0, 48);
  };
  const double k_par = refine_integrate([&](double r) { return radial(r, true); }, 0.0, r_max, 1e-8);
  const double k_perp = refine_integrate([&](double r) { return radial(r, false); }, 0.0, r_max, 1e-8);

  OmegaMatrix out;
  const Mat3 rot = aligned_frame(v);
  out.K = rot * Vec3(k_par, k_perp, k_perp).asDiagonal() * rot.transpose();
  out.omega_plus = out.K + gamma * Mat3::Identity() + gamma * gamma * gamma * v * v.transpose();
  out.full.setZero();
  out.full.block<3, 3>(0, 3) = out.omega_plus;
  out.full.block<3, 3>(3, 0) = -out.omega_plus;
  return out;
}

namespace {

struct ProjectionWorkspace {
  const Grid& grid;
  SpectralField rho;
  const SpectralPair& yhat;
  Vec3 q, p;
  double m;

  // residual G_j = Omega(Y - S(sigma), tau_j(sigma)) for the translated frame
  Eigen::Matrix<double, 6, 1> residual(const SolitonParams& sigma) const {
    const int n = grid.n;
    // per-axis translation phases e^{i k b}
    std::vector<Complex> ph[3];
    for (int ax = 0; ax < 3; ++ax) {
      ph[ax].resize(n);
      for (int mm = 0; mm < n; ++mm) ph[ax][mm] = std::polar(1.0, grid.k(mm) * sigma.b[ax]);
    }
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    const int nn = n;
    std::size_t idx = 0;
    for (int i = 0; i < nn; ++i) {
      const double ki = grid.k(i);
      for (int j = 0; j < nn; ++j) {
        const double kj = grid.k(j);
        const Complex pij = ph[0][i] * ph[1][j];
        for (int l = 0; l < nn; ++l, ++idx) {
          const double kl = grid.k(l);
          const double k2 = ki * ki + kj * kj + kl * kl;
          const auto mk = detail::soliton_modes(ki, kj, kl, k2, rho[idx], sigma.v, m);
          const Complex phase = pij * ph[2][l];
          const Complex dpsi = yhat.psi[idx] - phase * mk.psi;
          const Complex dpi = yhat.pi[idx] - phase * mk.pi;
          const double kvec[3] = {ki, kj, kl};
          for (int a = 0; a < 3; ++a) {
            const Complex ika(0.0, kvec[a]);
            const Complex tpsi_a = phase * (ika * mk.psi);
            const Complex tpi_a = phase * (ika * mk.pi);
            g[a] += (dpsi * std::conj(tpi_a)).real() - (dpi * std::conj(tpsi_a)).real();
            const Complex tpsi_b = phase * mk.dpsi_dv[a];
            const Complex tpi_b = phase * mk.dpi_dv[a];
            g[a + 3] += (dpsi * std::conj(tpi_b)).real() - (dpi * std::conj(tpsi_b)).real();
          }
        }
      }
    }
    g *= std::pow(M_PI / grid.half_length, 3);
    // particle components: Y - S has (q - b, p - p_v)
    const Vec3 dq = q - sigma.b;
    const Vec3 dp_ = p - momentum_of_velocity(sigma.v);
    const Mat3 dpdv = momentum_velocity_jacobian(sigma.v);
    for (int a = 0; a < 3; ++a) {
      g[a] += omega_vec(dq, dp_, Vec3::Unit(a), Vec3::Zero());
      g[a + 3] += omega_vec(dq, dp_, Vec3::Zero(), dpdv.col(a));
    }
    return g;
  }
};

}  // namespace

ProjectionResult project(const FullState& y, const ChargeProfile& profile, double m,
                         const ProjectOptions& opts) {
  return project(forward(y.fields), y.q, y.p, profile, m, opts);
}

ProjectionResult project(const SpectralPair& yhat, const Vec3& q, const Vec3& p,
                         const ChargeProfile& profile, double m, const ProjectOptions& opts) {
  const Grid& grid = yhat.grid();
  ProjectionWorkspace ws{grid, rho_hat_on_grid(profile, grid), yhat, q, p, m};

  SolitonParams sigma{q, velocity_of_momentum(p)};
  if (sigma.v.norm() >= opts.v_bar) throw numerical_error("project: superluminal iterate");

  // residuals scale like ||Y - S|| * ||tau||; anchor the tolerance to the
  // state and frame size
  const double scale = std::max(1e-300, energy_norm(yhat, m) + q.norm() + p.norm() + 1.0);
  const double tol = opts.rel_tol * scale;

  Eigen::Matrix<double, 6, 1> g = ws.residual(sigma);
  double res = g.cwiseAbs().maxCoeff();
  int iter = 0;
  while (res > tol) {
    if (iter >= opts.max_iterations)
      throw numerical_error("project: outside projection neighborhood (no convergence in " +
                            std::to_string(opts.max_iterations) + " iterations)");
    const Mat6 gram = tangent_gram_spectral(sigma.v, ws.rho, grid, m);
    // Newton step from G_j(sigma + d) ~ G_j - sum_l d_l Omega(tau_l, tau_j)
    const Eigen::Matrix<double, 6, 1> d = gram.transpose().partialPivLu().solve(g);
    sigma.b += d.head<3>();
    sigma.v += d.tail<3>();
    if (sigma.v.norm() >= opts.v_bar) throw numerical_error("project: superluminal iterate");
    g = ws.residual(sigma);
    res = g.cwiseAbs().maxCoeff();
    ++iter;
  }

  ProjectionResult out;
  out.sigma = sigma;
  out.newton_iters = iter;
  out.residual = res;

  // transversal part in the moving frame: Z = T_{-b}(Y) - S(0, v)
  SpectralPair zhat = ws.yhat;
  translate_inplace(zhat.psi, -sigma.b);
  translate_inplace(zhat.pi, -sigma.b);
  const SpectralPair sol = soliton_spectra(sigma.v, profile, grid, m);
  for (std::size_t i = 0; i < zhat.psi.size(); ++i) {
    zhat.psi[i] -= sol.psi[i];
    zhat.pi[i] -= sol.pi[i];
  }
  out.Z = FullState(grid);
  out.Z.fields = inverse(zhat);
  out.Z.q = q - sigma.b;
  out.Z.p = p - momentum_of_velocity(sigma.v);
  return out;
}

FullState tangent_projector(const Vec3& v, const FullState& z, const ChargeProfile& profile,
                            double m) {
  const Grid& grid = z.grid();
  const SpectralField rho = rho_hat_on_grid(profile, grid);
  const SpectralPair zhat = forward(z.fields);
  const Mat6 gram = tangent_gram_spectral(v, rho, grid, m);

  // c_l = Omega(tau_l, Z)
  Eigen::Matrix<double, 6, 1> c = Eigen::Matrix<double, 6, 1>::Zero();
  sweep_tangent_modes(grid, rho, v, m,
                      [&](std::size_t idx, const detail::SolitonModes&, const Complex* tpsi,
                          const Complex* tpi) {
                        for (int l = 0; l < 6; ++l)
                          c[l] += (tpsi[l] * std::conj(zhat.pi[idx])).real() -
                                  (tpi[l] * std::conj(zhat.psi[idx])).real();
                      });
  c *= std::pow(M_PI / grid.half_length, 3);
  const Mat3 dpdv = momentum_velocity_jacobian(v);
  for (int a = 0; a < 3; ++a) {
    c[a] += omega_vec(Vec3::Unit(a), Vec3::Zero(), z.q, z.p);
    c[a + 3] += omega_vec(Vec3::Zero(), dpdv.col(a), z.q, z.p);
  }

  const Eigen::Matrix<double, 6, 1> coef = gram.partialPivLu().solve(c);

  // assemble sum_j coef_j tau_j
  SpectralPair acc(grid);
  sweep_tangent_modes(grid, rho, v, m,
                      [&](std::size_t idx, const detail::SolitonModes&, const Complex* tpsi,
                          const Complex* tpi) {
                        Complex sp(0, 0), spi(0, 0);
                        for (int j = 0; j < 6; ++j) {
                          sp += coef[j] * tpsi[j];
                          spi += coef[j] * tpi[j];
                        }
                        acc.psi[idx] = sp;
                        acc.pi[idx] = spi;
                      });
  FullState out(grid);
  out.fields = inverse(acc);
  out.q = coef.head<3>();
  out.p = dpdv * coef.tail<3>();
  return out;
}

FullState transversal_projector(const Vec3& v, const FullState& z, const ChargeProfile& profile,
                                double m) {
  FullState pi_z = tangent_projector(v, z, profile, m);
  FullState out = z;
  axpy(-1.0, pi_z, out);
  return out;
}

}  // namespace kgs
