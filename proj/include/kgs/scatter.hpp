#pragma once

// Trajectory post-processing: symplectic decomposition along a run,
// transversal-decay fitting, asymptotic data (v+, a+, Psi+) and the energy
// budget of the scattering record.

#include <optional>
#include <vector>

#include "kgs/evolve.hpp"
#include "kgs/symplectic.hpp"

namespace kgs {

struct DecayFit {
  double t0 = 0.0, t1 = 0.0;
  double exponent = 0.0;   // slope of log y vs log(1+t)
  double amplitude = 0.0;  // y ~ amplitude (1+t)^exponent
  double r2 = 0.0;
};

/// Least-squares power-law fit of a positive series on [t0, t1].
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double t0,
                   double t1);

struct DecompositionSeries {
  std::vector<double> t;
  std::vector<SolitonParams> sigma;
  std::vector<double> z_norm_mbeta;   // ||Z(t)||_{-beta}, moving frame
  std::vector<double> orth_residual;  // max_j |Omega(Z, tau_j)| at the solution
  std::vector<Vec3> cdot, vdot;       // rates by centered differences
  std::vector<double> n_norm_beta;    // ||N(t)||_beta from the remainder split
};

/// Project every stored snapshot of a trajectory.
DecompositionSeries decompose_trajectory(const TrajectoryRecord& traj,
                                         const ChargeProfile& profile, double m, double beta);

/// Run the configured simulation, projecting at the sampling cadence; fills
/// the trajectory record (with snapshots at config.snapshot_times) alongside.
DecompositionSeries decompose_run(const RunConfig& config, TrajectoryRecord& traj_out,
                                  int project_every = 1);

struct Asymptotics {
  Vec3 v_plus, a_plus;
  double v_cauchy;       // |v(T) - v(3T/4)|
  double a_residual_t34; // |q - v+ t - a+| at 3T/4
  double a_residual_t;   // ... at T
};

Asymptotics extract_asymptotics(const TrajectoryRecord& traj);

struct OutgoingWave {
  FieldPair psi_plus;                  // D(T) = W0(-T)(F(T) - F_{v(T)}(T))
  std::vector<double> t;               // snapshot times
  std::vector<double> remainder_norm;  // ||D(t) - Psi+||_F
  std::vector<double> d_norm;          // ||D(t)||_F
};

/// Requires field snapshots in the record (uses v(t) = qdot(t) = v(p(t))).
OutgoingWave outgoing_wave(const TrajectoryRecord& traj, const ChargeProfile& profile, double m);

struct EnergyBudget {
  double total;        // H(Y(0))
  double soliton;      // H(S(sigma)) at v = v+
  double free_wave;    // free-field energy of Psi+
  double residual;     // total - soliton - free_wave
  double residual_rel; // |residual| / |total|
};

EnergyBudget energy_budget(const TrajectoryRecord& traj, const OutgoingWave& wave,
                           const Asymptotics& asym, const ChargeProfile& profile, double m);

}  // namespace kgs
