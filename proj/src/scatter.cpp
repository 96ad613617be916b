#include "kgs/scatter.hpp"

#include <cmath>

#include "kgs/linop.hpp"

namespace kgs {

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double t0,
                   double t1) {
  if (t.size() != y.size()) throw validation_error("fit_decay: length mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(y[i] > 0.0)) throw validation_error("fit_decay: nonpositive value in window");
    const double x = std::log(1.0 + t[i]);
    const double z = std::log(y[i]);
    sx += x;
    sy += z;
    sxx += x * x;
    sxy += x * z;
    syy += z * z;
    ++n;
  }
  if (n < 2) throw validation_error("fit_decay: empty window");
  const double det = n * sxx - sx * sx;
  DecayFit fit;
  fit.t0 = t0;
  fit.t1 = t1;
  fit.exponent = (n * sxy - sx * sy) / det;
  fit.amplitude = std::exp((sy - fit.exponent * sx) / n);
  const double ssr = syy - sy * sy / n - fit.exponent * (sxy - sx * sy / n);
  const double sst = syy - sy * sy / n;
  fit.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  return fit;
}

namespace {

// centered differences of the modulation parameters; one-sided at the ends
void fill_rates(DecompositionSeries& s) {
  const std::size_t n = s.t.size();
  s.cdot.resize(n);
  s.vdot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i == 0) ? 0 : i - 1;
    const std::size_t b = (i + 1 == n) ? i : i + 1;
    const double dt = s.t[b] - s.t[a];
    const Vec3 bdot = (s.sigma[b].b - s.sigma[a].b) / dt;
    s.cdot[i] = bdot - s.sigma[i].v;
    s.vdot[i] = (s.sigma[b].v - s.sigma[a].v) / dt;
  }
}

}  // namespace

DecompositionSeries decompose_trajectory(const TrajectoryRecord& traj,
                                         const ChargeProfile& profile, double m, double beta) {
  if (traj.snapshots.empty()) throw validation_error("decompose_trajectory: no snapshots stored");
  DecompositionSeries out;
  std::vector<FullState> zs;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    ProjectionResult pr = project(traj.snapshots[i], profile, m);
    out.t.push_back(traj.snapshot_t[i]);
    out.sigma.push_back(pr.sigma);
    out.z_norm_mbeta.push_back(weighted_norm(pr.Z, -beta));
    out.orth_residual.push_back(pr.residual);
    zs.push_back(std::move(pr.Z));
  }
  fill_rates(out);
  const Grid& g = traj.snapshots.front().grid();
  out.n_norm_beta.resize(out.t.size());
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    const RemainderSplit rs = nonlinear_remainder(out.sigma[i], out.cdot[i] + out.sigma[i].v,
                                                  out.vdot[i], zs[i], profile, g, m);
    out.n_norm_beta[i] = weighted_norm(rs.N_term, beta);
  }
  return out;
}

DecompositionSeries decompose_run(const RunConfig& config, TrajectoryRecord& traj_out,
                                  int project_every) {
  config.validate();
  DecompositionSeries out;
  std::vector<SolitonParams> sigmas;
  // sliding window of transversal parts for the remainder evaluation
  std::vector<FullState> z_window;
  std::vector<std::size_t> z_index;
  long count = 0;

  const Grid& g = config.grid;
  std::vector<double> n_partial;

  const SampleObserver obs = [&](const StateView& view) {
    if (count++ % project_every != 0) return;
    ProjectionResult pr = project(view.fields, view.q, view.p, config.profile, config.m);
    out.t.push_back(view.t);
    out.sigma.push_back(pr.sigma);
    out.z_norm_mbeta.push_back(weighted_norm(pr.Z, -config.beta));
    out.orth_residual.push_back(pr.residual);
    z_window.push_back(std::move(pr.Z));
    z_index.push_back(out.t.size() - 1);
    // remainder at sample i needs sigma at i-1 and i+1; evaluate lazily
    if (z_window.size() == 3) {
      const std::size_t i = z_index[1];
      const double dt = out.t[i + 1] - out.t[i - 1];
      const Vec3 bdot = (out.sigma[i + 1].b - out.sigma[i - 1].b) / dt;
      const Vec3 vdot = (out.sigma[i + 1].v - out.sigma[i - 1].v) / dt;
      const RemainderSplit rs = nonlinear_remainder(out.sigma[i], bdot, vdot, z_window[1],
                                                    config.profile, g, config.m);
      n_partial.push_back(weighted_norm(rs.N_term, config.beta));
      z_window.erase(z_window.begin());
      z_index.erase(z_index.begin());
    }
  };

  traj_out = run(config, obs);
  // pad the endpoint remainders with the nearest interior value
  out.n_norm_beta.assign(out.t.size(), 0.0);
  for (std::size_t i = 0; i + 2 < out.t.size(); ++i) out.n_norm_beta[i + 1] = n_partial[i];
  if (out.t.size() >= 3) {
    out.n_norm_beta.front() = n_partial.front();
    out.n_norm_beta.back() = n_partial.back();
  }
  fill_rates(out);
  return out;
}

Asymptotics extract_asymptotics(const TrajectoryRecord& traj) {
  const std::size_t n = traj.t.size();
  if (n < 4) throw validation_error("extract_asymptotics: trajectory too short");
  const double T = traj.t.back();

  const auto v_at = [&](std::size_t i) { return velocity_of_momentum(traj.p[i]); };
  std::size_t i34 = 0;
  while (i34 + 1 < n && traj.t[i34] < 0.75 * T) ++i34;

  Asymptotics out;
  out.v_plus = v_at(n - 1);
  out.v_cauchy = (out.v_plus - v_at(i34)).norm();

  // a+ from least squares on q(t) - v+ t over the tail window [3T/4, T]
  Vec3 acc = Vec3::Zero();
  std::size_t cnt = 0;
  for (std::size_t i = i34; i < n; ++i) {
    acc += traj.q[i] - out.v_plus * traj.t[i];
    ++cnt;
  }
  out.a_plus = acc / static_cast<double>(cnt);
  out.a_residual_t34 = (traj.q[i34] - out.v_plus * traj.t[i34] - out.a_plus).norm();
  out.a_residual_t = (traj.q[n - 1] - out.v_plus * traj.t[n - 1] - out.a_plus).norm();
  return out;
}

OutgoingWave outgoing_wave(const TrajectoryRecord& traj, const ChargeProfile& profile, double m) {
  if (traj.snapshots.empty()) throw validation_error("outgoing_wave: no snapshots stored");
  OutgoingWave out;
  std::vector<SpectralPair> d;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const FullState& y = traj.snapshots[i];
    const double t = traj.snapshot_t[i];
    // accompanying soliton at v(t) = qdot(t), centered at q(t)
    const Vec3 v = velocity_of_momentum(y.p);
    SpectralPair sol = soliton_spectra(v, profile, y.grid(), m);
    translate_inplace(sol.psi, y.q);
    translate_inplace(sol.pi, y.q);
    SpectralPair diff = forward(y.fields);
    for (std::size_t k = 0; k < diff.psi.size(); ++k) {
      diff.psi[k] -= sol.psi[k];
      diff.pi[k] -= sol.pi[k];
    }
    free_kg_propagate_inplace(diff, -t, m);
    out.t.push_back(t);
    d.push_back(std::move(diff));
  }
  const SpectralPair& last = d.back();
  out.psi_plus = inverse(last);
  for (std::size_t i = 0; i < d.size(); ++i) {
    SpectralPair rem = d[i];
    for (std::size_t k = 0; k < rem.psi.size(); ++k) {
      rem.psi[k] -= last.psi[k];
      rem.pi[k] -= last.pi[k];
    }
    out.remainder_norm.push_back(f_norm(inverse(rem)));
    out.d_norm.push_back(f_norm(inverse(d[i])));
  }
  return out;
}

EnergyBudget energy_budget(const TrajectoryRecord& traj, const OutgoingWave& wave,
                           const Asymptotics& asym, const ChargeProfile& profile, double m) {
  if (traj.energy.empty()) throw validation_error("energy_budget: empty trajectory");
  EnergyBudget out;
  out.total = traj.energy.front();
  const Grid& g = wave.psi_plus.grid();
  out.soliton = hamiltonian(soliton_state({Vec3::Zero(), asym.v_plus}, profile, g, m), m, profile);
  const double en = energy_norm(wave.psi_plus, m);
  out.free_wave = 0.5 * en * en;
  out.residual = out.total - out.soliton - out.free_wave;
  out.residual_rel = std::abs(out.residual) / std::max(std::abs(out.total), 1e-300);
  return out;
}

}  // namespace kgs
