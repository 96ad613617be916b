#pragma once

// Time integration of the coupled Klein-Gordon/particle system
//   psidot = pi,   pidot = Lap psi - m^2 psi - rho(x - q),
//   qdot = p/sqrt(1+p^2),   pdot = <psi, grad rho(x - q)>,
// by Strang splitting: half-kick of (pi, p), exact spectral free flight of
// the fields plus relativistic particle drift, half-kick. The coupling terms
// are evaluated in k-space through the shift phase e^{ik.q}, so the state is
// kept spectral during a run. Also the free and shifted Klein-Gordon groups
// W0(t), W(t) and the weighted-norm decay probe.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kgs/charge.hpp"
#include "kgs/fields.hpp"
#include "kgs/soliton.hpp"

namespace kgs {

struct PerturbationSpec {
  enum class Kind { None, TransversalBump };
  Kind kind = Kind::None;
  std::uint64_t seed = 1;
  double amplitude = 0.0;  // target ||Z0||_beta relative to ||S(sigma0)||_beta
  double r0 = 4.0;         // support radius of the bump, in the moving frame
  double k_max = 1.5;      // wavenumber content
  int modes = 6;
};

struct RunConfig {
  Grid grid;
  double m = 1.0;
  ChargeProfile profile;
  double dt = 0.0;  // <= 0 selects h/4
  double T = 5.0;
  SolitonParams sigma0;
  PerturbationSpec perturbation;
  double beta = 2.0;
  int sample_every = 0;  // samples every k-th step; 0 selects ~max(1, steps/200)
  std::vector<double> snapshot_times;

  double step_size() const { return dt > 0.0 ? dt : grid.h() / 4.0; }
  void validate() const;
  /// Time horizon before emitted waves can wrap around the periodic box.
  double wraparound_bound() const;
};

struct TrajectoryRecord {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<Vec3> q, p;
  std::vector<double> speed;  // |qdot|
  std::vector<double> snapshot_t;
  std::vector<FullState> snapshots;
  double max_speed = 0.0;
  double wraparound_bound = 0.0;
};

/// Read-only view of the integrator state handed to per-sample observers.
struct StateView {
  double t;
  const SpectralPair& fields;
  Vec3 q, p;
  FullState to_full() const;
};
using SampleObserver = std::function<void(const StateView&)>;

/// Hamiltonian (grid quadrature): 1/2 int(pi^2+|grad psi|^2+m^2 psi^2)
/// + int psi rho(.-q) + sqrt(1+p^2).
double hamiltonian(const FullState& y, double m, const ChargeProfile& profile);

/// One Strang step (x-space convenience wrapper; runs transform round trips).
FullState step(const FullState& state, double dt, double m, const ChargeProfile& profile);

/// Initial state of a run: soliton at sigma0 plus the (symplectically
/// transversal, rescaled) perturbation.
FullState initial_state(const RunConfig& config);

TrajectoryRecord run(const RunConfig& config, const SampleObserver& observer = nullptr);

// ---- linear groups ----

/// W0(t): free Klein-Gordon group, exact in k-space.
FieldPair free_kg_propagate(const FieldPair& f, double t, double m);
void free_kg_propagate_inplace(SpectralPair& f, double t, double m);

/// W(t): [W(t)F](x) = [W0(t)F](x + vt).
FieldPair moving_frame_propagate(const FieldPair& f, double t, const Vec3& v, double m);
void moving_frame_propagate_inplace(SpectralPair& f, double t, const Vec3& v, double m);

/// ||W(t)F0||_{-beta} at the given times; support_radius bounds the data so
/// the wraparound horizon (L - r0)/(1+|v|) can be enforced.
std::vector<double> local_decay_probe(const FieldPair& f0, const Vec3& v, double m, double beta,
                                      const std::vector<double>& times, double support_radius);

}  // namespace kgs
