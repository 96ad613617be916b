#include "kgs/random_fields.hpp"

#include <cmath>

namespace kgs {

ScalarField random_bump(const Grid& grid, Rng& rng, double r0, double k_max, const Vec3& center,
                        int modes) {
  grid.validate();
  if (!(r0 > 0.0)) throw validation_error("random_bump: r0 must be positive");
  std::vector<Vec3> kappa(modes);
  std::vector<double> amp(modes), phase(modes);
  for (int s = 0; s < modes; ++s) {
    kappa[s] = Vec3(rng.uniform(-k_max, k_max), rng.uniform(-k_max, k_max),
                    rng.uniform(-k_max, k_max));
    amp[s] = rng.uniform(-1.0, 1.0);
    phase[s] = rng.uniform(0.0, 2.0 * M_PI);
  }
  ScalarField out(grid);
  std::size_t idx = 0;
  for (int i = 0; i < grid.n; ++i) {
    const double dx = grid.x(i) - center[0];
    for (int j = 0; j < grid.n; ++j) {
      const double dy = grid.x(j) - center[1];
      for (int l = 0; l < grid.n; ++l, ++idx) {
        const double dz = grid.x(l) - center[2];
        const double r2 = (dx * dx + dy * dy + dz * dz) / (r0 * r0);
        if (r2 >= 1.0) continue;
        const double env = (1.0 - r2) * (1.0 - r2) * (1.0 - r2);
        double s = 0.0;
        for (int mo = 0; mo < modes; ++mo)
          s += amp[mo] * std::cos(kappa[mo][0] * dx + kappa[mo][1] * dy + kappa[mo][2] * dz +
                                  phase[mo]);
        out[idx] = env * s;
      }
    }
  }
  return out;
}

FieldPair random_bump_pair(const Grid& grid, std::uint64_t seed, double r0, double k_max,
                           const Vec3& center, int modes) {
  Rng rng(seed);
  FieldPair out(grid);
  out.psi = random_bump(grid, rng, r0, k_max, center, modes);
  out.pi = random_bump(grid, rng, r0, k_max, center, modes);
  return out;
}

}  // namespace kgs
