#include "kgs/linop.hpp"

#include <cmath>

#include "kgs/symplectic.hpp"

namespace kgs {

namespace {

Mat3 bv_matrix(const Vec3& v) {
  const double nu = std::sqrt(1.0 - v.squaredNorm());
  return nu * (Mat3::Identity() - v * v.transpose());
}

// grid version of K_ij = int k_i k_j |rhohat|^2/(k^2+m^2-(kv)^2) dk
Mat3 coupling_matrix_grid(const SpectralField& rho, const Vec3& v, double m) {
  const Grid& g = rho.grid();
  Mat3 K = Mat3::Zero();
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = g.k(l);
        const double kvec[3] = {ki, kj, kl};
        const double k2 = ki * ki + kj * kj + kl * kl;
        const double kv = ki * v[0] + kj * v[1] + kl * v[2];
        const double w = std::norm(rho[idx]) / (k2 + m * m - kv * kv);
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) K(a, b) += kvec[a] * kvec[b] * w;
      }
    }
  }
  K *= std::pow(M_PI / g.half_length, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < a; ++b) K(a, b) = K(b, a);
  return K;
}

// <Psi, grad rho> with an optional shift of rho by Q (rho(.-Q))
Vec3 field_force(const SpectralField& psi, const SpectralField& rho, const Grid& g,
                 const Vec3& shift = Vec3::Zero()) {
  const int n = g.n;
  std::vector<Complex> ph[3];
  const bool shifted = shift != Vec3::Zero();
  if (shifted)
    for (int ax = 0; ax < 3; ++ax) {
      ph[ax].resize(n);
      for (int mm = 0; mm < n; ++mm) ph[ax][mm] = std::polar(1.0, g.k(mm) * shift[ax]);
    }
  Vec3 f = Vec3::Zero();
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = g.k(l);
        Complex r = rho[idx];
        if (shifted) r *= ph[0][i] * ph[1][j] * ph[2][l];
        // <psi, d_a rho> = sum Re[psihat conj(-i k_a rhohat)] = -k_a Im[psihat conj(rhohat)]
        const double im = (psi[idx] * std::conj(r)).imag();
        f[0] -= ki * im;
        f[1] -= kj * im;
        f[2] -= kl * im;
      }
    }
  }
  return std::pow(M_PI / g.half_length, 3) * f;
}

}  // namespace

LinearizedOperator::LinearizedOperator(const Vec3& v, const Vec3& w, const ChargeProfile& profile,
                                       const Grid& grid, double m)
    : grid_(grid), m_(m), v_(v), w_(w) {
  lorentz_gamma(v);
  rho_ = rho_hat_on_grid(profile, grid);
  soliton_ = soliton_spectra(v, profile, grid, m);
  K_ = coupling_matrix_grid(rho_, v, m);
  Bv_ = bv_matrix(v);
}

FullState LinearizedOperator::apply(const FullState& x) const {
  if (!(x.grid() == grid_)) throw validation_error("apply_A: grid mismatch");
  const SpectralPair xh = forward(x.fields);
  SpectralPair rh(grid_);
  const int n = grid_.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid_.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid_.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = grid_.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const double kw = ki * w_[0] + kj * w_[1] + kl * w_[2];
        const double kq = ki * x.q[0] + kj * x.q[1] + kl * x.q[2];
        const Complex ikw(0.0, -kw);  // w.grad symbol
        rh.psi[idx] = ikw * xh.psi[idx] + xh.pi[idx];
        rh.pi[idx] = -(k2 + m_ * m_) * xh.psi[idx] + ikw * xh.pi[idx] +
                     Complex(0.0, -kq) * rho_[idx];
      }
    }
  }
  FullState out(grid_);
  out.fields = inverse(rh);
  out.q = Bv_ * x.p;
  out.p = field_force(xh.psi, rho_, grid_) - K_ * x.q;
  return out;
}

double LinearizedOperator::hamiltonian(const FullState& x) const {
  const SpectralPair xh = forward(x.fields);
  const int n = grid_.n;
  double quad = 0.0, cross = 0.0, coup = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid_.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid_.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = grid_.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const double kw = ki * w_[0] + kj * w_[1] + kl * w_[2];
        const double kq = ki * x.q[0] + kj * x.q[1] + kl * x.q[2];
        quad += std::norm(xh.pi[idx]) + (k2 + m_ * m_) * std::norm(xh.psi[idx]);
        // int Pi (w.grad Psi): Re[Pihat conj(-i kw Psihat)]
        cross -= kw * (xh.pi[idx] * std::conj(xh.psi[idx])).imag();
        // int rho Q.grad Psi: Re[rhohat conj(-i kq Psihat)]
        coup -= kq * (rho_[idx] * std::conj(xh.psi[idx])).imag();
      }
    }
  }
  const double mes = std::pow(M_PI / grid_.half_length, 3);
  return 0.5 * mes * quad + mes * cross + mes * coup + 0.5 * x.p.dot(Bv_ * x.p) +
         0.5 * x.q.dot(K_ * x.q);
}

double LinearizedOperator::hamiltonian_squares(const FullState& x) const {
  const SpectralPair xh = forward(x.fields);
  const int n = grid_.n;
  double acc = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid_.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid_.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = grid_.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const double kv = ki * v_[0] + kj * v_[1] + kl * v_[2];
        const double kq = ki * x.q[0] + kj * x.q[1] + kl * x.q[2];
        const double lam = k2 + m_ * m_ - kv * kv;  // symbol of Lam
        const Complex a = xh.pi[idx] + Complex(0.0, -kv) * xh.psi[idx];
        const Complex b =
            std::sqrt(lam) * xh.psi[idx] - Complex(0.0, -kq) * rho_[idx] / std::sqrt(lam);
        acc += std::norm(a) + std::norm(b);
      }
    }
  }
  return 0.5 * acc * std::pow(M_PI / grid_.half_length, 3) + 0.5 * x.p.dot(Bv_ * x.p);
}

double skew_symmetry_residual(const LinearizedOperator& op, const FullState& x1,
                              const FullState& x2) {
  return std::abs(omega(op.apply(x1), x2) + omega(x1, op.apply(x2)));
}

FrozenSeries frozen_evolve(const Vec3& v, const FullState& x0, double dt, double T,
                           const ChargeProfile& profile, double m, double beta,
                           int sample_every, const std::vector<double>& snapshot_times) {
  const Grid& g = x0.grid();
  LinearizedOperator op(v, v, profile, g, m);
  const SpectralField rho = rho_hat_on_grid(profile, g);

  SpectralPair F = forward(x0.fields);
  Vec3 Q = x0.q, P = x0.p;
  const Mat3& K = op.coupling_matrix();
  const Mat3& Bv = op.bv();

  const long nsteps = std::max<long>(1, std::llround(T / dt));
  const double dte = T / static_cast<double>(nsteps);
  const int cadence = sample_every > 0 ? sample_every : std::max<long>(1, nsteps / 200);

  // half-kick: Pi += tau Q.grad rho, P += tau (<Psi, grad rho> - K Q);
  // Psi and Q are constant during the kick
  const auto kick = [&](double tau) {
    const Vec3 f = field_force(F.psi, rho, g) - K * Q;
    const int n = g.n;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const double ki = g.k(i);
      for (int j = 0; j < n; ++j) {
        const double kj = g.k(j);
        for (int l = 0; l < n; ++l, ++idx) {
          const double kq = ki * Q[0] + kj * Q[1] + g.k(l) * Q[2];
          F.pi[idx] += tau * Complex(0.0, -kq) * rho[idx];
        }
      }
    }
    P += tau * f;
  };

  FrozenSeries out;
  auto next_snapshot = snapshot_times.begin();
  const auto sample = [&](long k) {
    const double t = k * dte;
    FullState x(g);
    x.fields = inverse(F);
    x.q = Q;
    x.p = P;
    FrozenSample smp;
    smp.t = t;
    smp.energy = op.hamiltonian(x);
    smp.norm_mbeta = weighted_norm(x, -beta);
    smp.Q = Q;
    smp.P = P;
    out.samples.push_back(smp);
    while (next_snapshot != snapshot_times.end() && *next_snapshot <= t + 0.5 * dte) {
      out.snapshot_t.push_back(t);
      out.snapshots.push_back(x);
      ++next_snapshot;
    }
  };

  sample(0);
  for (long k = 1; k <= nsteps; ++k) {
    kick(0.5 * dte);
    moving_frame_propagate_inplace(F, dte, v, m);
    Q += dte * Bv * P;
    kick(0.5 * dte);
    if (k % cadence == 0 || k == nsteps) sample(k);
  }
  return out;
}

RemainderSplit nonlinear_remainder(const SolitonParams& sigma, const Vec3& bdot, const Vec3& vdot,
                                   const FullState& z, const ChargeProfile& profile,
                                   const Grid& grid, double m) {
  const Vec3 v = sigma.v, w = bdot;
  lorentz_gamma(v);
  const SpectralField rho = rho_hat_on_grid(profile, grid);
  const SpectralPair zh = forward(z.fields);
  const Mat3 K = coupling_matrix_grid(rho, v, m);
  const Mat3 Bv = bv_matrix(v);
  const Mat3 dpdv = momentum_velocity_jacobian(v);
  const Vec3 pv = momentum_of_velocity(v);

  const int n = grid.n;
  std::vector<Complex> ph[3];  // e^{i k Q}
  for (int ax = 0; ax < 3; ++ax) {
    ph[ax].resize(n);
    for (int mm = 0; mm < n; ++mm) ph[ax][mm] = std::polar(1.0, grid.k(mm) * z.q[ax]);
  }

  SpectralPair t_hat(grid), n_hat(grid);
  Vec3 shifted_force = Vec3::Zero();  // <psi_v + Psi, grad rho(.-Q)>
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid.k(j);
      const Complex pij = ph[0][i] * ph[1][j];
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = grid.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        const auto mk = detail::soliton_modes(ki, kj, kl, k2, rho[idx], v, m);
        const double kw = ki * w[0] + kj * w[1] + kl * w[2];
        const double kq = ki * z.q[0] + kj * z.q[1] + kl * z.q[2];
        const Complex grad_w(0.0, -kw);
        const Complex dv_psi =
            vdot[0] * mk.dpsi_dv[0] + vdot[1] * mk.dpsi_dv[1] + vdot[2] * mk.dpsi_dv[2];
        const Complex dv_pi =
            vdot[0] * mk.dpi_dv[0] + vdot[1] * mk.dpi_dv[1] + vdot[2] * mk.dpi_dv[2];

        // transport of the full state minus motion of S(sigma(t))
        const Complex zdot_psi = (mk.pi + zh.pi[idx]) + grad_w * (mk.psi + zh.psi[idx]) - dv_psi;
        const Complex rho_shift = rho[idx] * pij * ph[2][l];
        const Complex zdot_pi = -(k2 + m * m) * (mk.psi + zh.psi[idx]) - rho_shift +
                                grad_w * (mk.pi + zh.pi[idx]) - dv_pi;

        // A_{v,w} Z, field rows
        const Complex az_psi = grad_w * zh.psi[idx] + zh.pi[idx];
        const Complex az_pi = -(k2 + m * m) * zh.psi[idx] + grad_w * zh.pi[idx] +
                              Complex(0.0, -kq) * rho[idx];

        // T = (w-v).grad psi_v - vdot.grad_v psi_v, same for pi
        const double kwv = kw - (ki * v[0] + kj * v[1] + kl * v[2]);
        t_hat.psi[idx] = Complex(0.0, -kwv) * mk.psi - dv_psi;
        t_hat.pi[idx] = Complex(0.0, -kwv) * mk.pi - dv_pi;

        n_hat.psi[idx] = zdot_psi - az_psi - t_hat.psi[idx];
        n_hat.pi[idx] = zdot_pi - az_pi - t_hat.pi[idx];

        const double im = ((mk.psi + zh.psi[idx]) * std::conj(rho_shift)).imag();
        shifted_force[0] -= ki * im;
        shifted_force[1] -= kj * im;
        shifted_force[2] -= kl * im;
      }
    }
  }
  shifted_force *= std::pow(M_PI / grid.half_length, 3);

  RemainderSplit out;
  out.T_term = FullState(grid);
  out.T_term.fields = inverse(t_hat);
  out.T_term.q = v - w;
  out.T_term.p = -dpdv * vdot;

  out.N_term = FullState(grid);
  out.N_term.fields = inverse(n_hat);
  // Zdot_Q - [A Z]_Q - T_Q and Zdot_P - [A Z]_P - T_P
  const Vec3 zdot_q = velocity_of_momentum(pv + z.p) - w;
  const Vec3 az_q = Bv * z.p;
  const Vec3 zdot_p = shifted_force - dpdv * vdot;
  const Vec3 az_p = field_force(zh.psi, rho, grid) - K * z.q;
  out.N_term.q = zdot_q - az_q - (v - w);
  out.N_term.p = zdot_p - az_p - (-dpdv * vdot);
  return out;
}

}  // namespace kgs
