#include "kgs/evolve.hpp"

#include <cmath>

#include "kgs/random_fields.hpp"
#include "kgs/symplectic.hpp"

namespace kgs {

namespace {

struct SpectralState {
  SpectralPair F;
  Vec3 q, p;
};

// per-axis shift phases e^{i k_a q_a}
struct ShiftPhase {
  std::vector<Complex> ph[3];
  ShiftPhase(const Grid& g, const Vec3& a) {
    for (int ax = 0; ax < 3; ++ax) {
      ph[ax].resize(g.n);
      for (int m = 0; m < g.n; ++m) ph[ax][m] = std::polar(1.0, g.k(m) * a[ax]);
    }
  }
};

// half-kick: pi -= tau rho(.-q), p += tau <psi, grad rho(.-q)>; psi and q are
// unchanged during the kick, so it is exact
void kick(SpectralState& s, const SpectralField& rho, double tau) {
  const Grid& g = s.F.grid();
  const ShiftPhase sp(g, s.q);
  const int n = g.n;
  Vec3 force = Vec3::Zero();
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      const Complex pij = sp.ph[0][i] * sp.ph[1][j];
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = g.k(l);
        const Complex shifted_rho = rho[idx] * pij * sp.ph[2][l];
        // <psi, d_a rho(.-q)>: Re[psihat conj(-i k_a rhohat)] = -k_a Im[psihat conj(rhohat)]
        const Complex base = s.F.psi[idx] * std::conj(shifted_rho);
        force[0] -= ki * base.imag();
        force[1] -= kj * base.imag();
        force[2] -= kl * base.imag();
        s.F.pi[idx] -= tau * shifted_rho;
      }
    }
  }
  s.p += tau * std::pow(M_PI / g.half_length, 3) * force;
}

// drift: exact free Klein-Gordon rotation of the fields and relativistic
// straight-line particle motion
void drift(SpectralState& s, double tau, double m) {
  free_kg_propagate_inplace(s.F, tau, m);
  s.q += tau * velocity_of_momentum(s.p);
}

void strang_step(SpectralState& s, const SpectralField& rho, double dt, double m) {
  kick(s, rho, 0.5 * dt);
  drift(s, dt, m);
  kick(s, rho, 0.5 * dt);
}

double hamiltonian_spectral(const SpectralState& s, double m, const SpectralField& rho) {
  const Grid& g = s.F.grid();
  const ShiftPhase sp(g, s.q);
  const int n = g.n;
  double quad = 0.0, inter = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      const Complex pij = sp.ph[0][i] * sp.ph[1][j];
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = g.k(l);
        const double k2 = ki * ki + kj * kj + kl * kl;
        quad += std::norm(s.F.pi[idx]) + (k2 + m * m) * std::norm(s.F.psi[idx]);
        inter += (s.F.psi[idx] * std::conj(rho[idx] * pij * sp.ph[2][l])).real();
      }
    }
  }
  const double mes = std::pow(M_PI / g.half_length, 3);
  return 0.5 * mes * quad + mes * inter + std::sqrt(1.0 + s.p.squaredNorm());
}

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  profile.validate();
  if (!(m > 0.0)) throw validation_error("run: mass must be positive");
  if (!(T > 0.0)) throw validation_error("run: horizon must be positive");
  if (step_size() > grid.h() / M_PI + 1e-12)
    throw validation_error("run: dt exceeds the dispersion bound h/pi");
  if (sigma0.v.squaredNorm() >= 1.0) throw validation_error("superluminal: |v| >= 1");
  if (T > wraparound_bound())
    throw validation_error("run: horizon exceeds the wraparound bound");
}

double RunConfig::wraparound_bound() const {
  // Fields propagate at unit speed and the source sweep stays inside
  // |q(0)| + t for |v| < 1, so the front sits inside
  // |q(0)| + max(R_rho, r_perturbation) + t.
  double r0 = profile.radius;
  if (perturbation.kind != PerturbationSpec::Kind::None) r0 = std::max(r0, perturbation.r0);
  return grid.half_length - sigma0.b.norm() - r0;
}

FullState StateView::to_full() const {
  FullState out(fields.grid());
  out.fields = inverse(fields);
  out.q = q;
  out.p = p;
  return out;
}

double hamiltonian(const FullState& y, double m, const ChargeProfile& profile) {
  const Grid& g = y.grid();
  SpectralState s{forward(y.fields), y.q, y.p};
  return hamiltonian_spectral(s, m, rho_hat_on_grid(profile, g));
}

FullState step(const FullState& state, double dt, double m, const ChargeProfile& profile) {
  const Grid& g = state.grid();
  SpectralState s{forward(state.fields), state.q, state.p};
  strang_step(s, rho_hat_on_grid(profile, g), dt, m);
  FullState out(g);
  out.fields = inverse(s.F);
  out.q = s.q;
  out.p = s.p;
  return out;
}

FullState initial_state(const RunConfig& config) {
  config.grid.validate();
  FullState y = soliton_state(config.sigma0, config.profile, config.grid, config.m);
  if (config.perturbation.kind == PerturbationSpec::Kind::None || config.perturbation.amplitude == 0.0)
    return y;

  // moving-frame transversal perturbation, rescaled to the requested size
  const PerturbationSpec& ps = config.perturbation;
  FullState z(config.grid);
  z.fields = random_bump_pair(config.grid, ps.seed, ps.r0, ps.k_max, Vec3::Zero(), ps.modes);
  z = transversal_projector(config.sigma0.v, z, config.profile, config.m);

  FullState sol_frame(config.grid);
  sol_frame.fields = inverse(soliton_spectra(config.sigma0.v, config.profile, config.grid, config.m));
  sol_frame.p = momentum_of_velocity(config.sigma0.v);
  const double target = ps.amplitude * weighted_norm(sol_frame, config.beta);
  const double znorm = weighted_norm(z, config.beta);
  if (znorm == 0.0) throw numerical_error("initial_state: empty perturbation");
  const double c = target / znorm;
  z.fields.psi *= c;
  z.fields.pi *= c;
  z.q *= c;
  z.p *= c;

  const FullState zlab = translate_fields(z, config.sigma0.b);
  y.fields.psi += zlab.fields.psi;
  y.fields.pi += zlab.fields.pi;
  y.q += z.q;
  y.p += z.p;
  return y;
}

TrajectoryRecord run(const RunConfig& config, const SampleObserver& observer) {
  config.validate();
  const Grid& g = config.grid;
  const SpectralField rho = rho_hat_on_grid(config.profile, g);

  const FullState y0 = initial_state(config);
  SpectralState s{forward(y0.fields), y0.q, y0.p};

  const double dt0 = config.step_size();
  const long nsteps = std::max<long>(1, std::llround(config.T / dt0));
  const double dt = config.T / static_cast<double>(nsteps);
  const int cadence = config.sample_every > 0
                          ? config.sample_every
                          : std::max<long>(1, nsteps / 200);

  TrajectoryRecord rec;
  rec.wraparound_bound = config.wraparound_bound();
  auto next_snapshot = config.snapshot_times.begin();

  const auto sample = [&](long k) {
    const double t = k * dt;
    rec.t.push_back(t);
    const double H = hamiltonian_spectral(s, config.m, rho);
    if (!std::isfinite(H) || !s.q.allFinite() || !s.p.allFinite())
      throw numerical_error("run: blow-up detected");
    rec.energy.push_back(H);
    rec.q.push_back(s.q);
    rec.p.push_back(s.p);
    const double sp = velocity_of_momentum(s.p).norm();
    rec.speed.push_back(sp);
    rec.max_speed = std::max(rec.max_speed, sp);
    if (observer) observer(StateView{t, s.F, s.q, s.p});
    while (next_snapshot != config.snapshot_times.end() &&
           *next_snapshot <= t + 0.5 * dt) {
      FullState snap(g);
      snap.fields = inverse(s.F);
      snap.q = s.q;
      snap.p = s.p;
      rec.snapshot_t.push_back(t);
      rec.snapshots.push_back(std::move(snap));
      ++next_snapshot;
    }
  };

  sample(0);
  for (long k = 1; k <= nsteps; ++k) {
    strang_step(s, rho, dt, config.m);
    if (k % cadence == 0 || k == nsteps) sample(k);
  }
  return rec;
}

void free_kg_propagate_inplace(SpectralPair& f, double t, double m) {
  const Grid& g = f.grid();
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = g.k(l);
        const double w = std::sqrt(ki * ki + kj * kj + kl * kl + m * m);
        const double c = std::cos(w * t), sn = std::sin(w * t);
        const Complex psi = f.psi[idx], pi = f.pi[idx];
        f.psi[idx] = c * psi + sn / w * pi;
        f.pi[idx] = -w * sn * psi + c * pi;
      }
    }
  }
}

FieldPair free_kg_propagate(const FieldPair& f, double t, double m) {
  SpectralPair fh = forward(f);
  free_kg_propagate_inplace(fh, t, m);
  return inverse(fh);
}

void moving_frame_propagate_inplace(SpectralPair& f, double t, const Vec3& v, double m) {
  lorentz_gamma(v);
  free_kg_propagate_inplace(f, t, m);
  // [W(t)F](x) = [W0(t)F](x + vt): multiply by e^{-i k.(vt)}
  translate_inplace(f.psi, -v * t);
  translate_inplace(f.pi, -v * t);
}

FieldPair moving_frame_propagate(const FieldPair& f, double t, const Vec3& v, double m) {
  SpectralPair fh = forward(f);
  moving_frame_propagate_inplace(fh, t, v, m);
  return inverse(fh);
}

std::vector<double> local_decay_probe(const FieldPair& f0, const Vec3& v, double m, double beta,
                                      const std::vector<double>& times, double support_radius) {
  const Grid& g = f0.grid();
  const double bound = (g.half_length - support_radius) / (1.0 + v.norm());
  for (double t : times)
    if (t > bound) throw validation_error("local_decay_probe: time beyond wraparound bound");
  const SpectralPair f0h = forward(f0);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    SpectralPair ft = f0h;
    moving_frame_propagate_inplace(ft, t, v, m);
    out.push_back(weighted_norm(inverse(ft), -beta));
  }
  return out;
}

}  // namespace kgs
