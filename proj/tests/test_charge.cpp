#include <doctest.h>

#include <cmath>

#include "kgs/charge.hpp"
#include "kgs/quadrature.hpp"
#include "kgs/random_fields.hpp"

using namespace kgs;

namespace {

// Independent oracle: the defining 3D integral (2pi)^{-3/2} int e^{ikx} rho dx
// evaluated as a full volume quadrature in spherical coordinates (no use of
// the 1D sin-kernel reduction).
double rho_hat_oracle_3d(const ChargeProfile& p, const Vec3& k) {
  const int nr = 64, nmu = 64, nphi = 64;
  const GaussRule& gr = gauss_legendre(nr);
  const GaussRule& gm = gauss_legendre(nmu);
  double acc = 0.0;
  for (int a = 0; a < nr; ++a) {
    const double r = 0.5 * p.radius * (gr.x[a] + 1.0);
    const double wr = 0.5 * p.radius * gr.w[a];
    const double rho1 = p.rho1(r);
    for (int b = 0; b < nmu; ++b) {
      const double mu = gm.x[b];
      const double st = std::sqrt(1.0 - mu * mu);
      for (int c = 0; c < nphi; ++c) {
        const double phi = 2.0 * M_PI * c / nphi;
        const Vec3 x(r * mu, r * st * std::cos(phi), r * st * std::sin(phi));
        acc += wr * gm.w[b] * (2.0 * M_PI / nphi) * std::cos(k.dot(x)) * rho1 * r * r;
      }
    }
  }
  return acc / two_pi_pow_3_2;
}

const ChargeProfile kDefault{};  // quartic bump, A = 1, R = 2

}  // namespace

TEST_CASE("rho_hat at k = 0 is the scaled total charge") {
  CHECK(rho_hat(kDefault, 0.0) ==
        doctest::Approx(kDefault.total_charge() / two_pi_pow_3_2).epsilon(1e-14));
  // frozen from the closed form 4 pi A R^3 (8/105) (2pi)^{-3/2}
  CHECK(rho_hat(kDefault, 0.0) == doctest::Approx(0.48632963706079413).epsilon(1e-13));
}

TEST_CASE("rho_hat is real, even, and radial") {
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const Vec3 k(rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-8, 8));
    CHECK(rho_hat(kDefault, k) == doctest::Approx(rho_hat(kDefault, Vec3(-k))).epsilon(1e-15));
    CHECK(rho_hat(kDefault, k) == doctest::Approx(rho_hat(kDefault, k.norm())).epsilon(1e-15));
  }
}

TEST_CASE("rho_hat matches the 3D defining-integral oracle") {
  // frozen oracle value at |k| = 1 (A = 1, R = 2)
  CHECK(rho_hat(kDefault, 1.0) == doctest::Approx(3.875937937981727e-01).epsilon(1e-8));
  for (const double k : {0.5, 2.7, 7.9}) {
    const double oracle = rho_hat_oracle_3d(kDefault, Vec3(0.0, 0.0, k));
    CHECK(rho_hat(kDefault, k) == doctest::Approx(oracle).epsilon(1e-8));
  }
  // off-axis wavevector through the Vec3 overload
  const Vec3 k(0.3, 0.4, 0.5);
  CHECK(rho_hat(kDefault, k) == doctest::Approx(rho_hat_oracle_3d(kDefault, k)).epsilon(1e-8));
}

TEST_CASE("amplitude scaling is exact") {
  ChargeProfile scaled = kDefault;
  scaled.amplitude = -3.25;
  for (const double k : {0.0, 0.7, 3.3})
    CHECK(rho_hat(scaled, k) == doctest::Approx(-3.25 * rho_hat(kDefault, k)).epsilon(1e-15));
}

TEST_CASE("tabulated profile reproduces the closed-form bump") {
  ChargeProfile tab;
  tab.kind = ProfileKind::Tabulated;
  tab.radius = 2.0;
  const int M = 4001;
  for (int i = 0; i < M; ++i) {
    const double r = 2.0 * i / (M - 1);
    tab.radial_samples.push_back(std::pow(1.0 - r * r / 4.0, 2));
  }
  for (const double k : {0.0, 1.0, 2.7})
    CHECK(rho_hat(tab, k) == doctest::Approx(rho_hat(kDefault, k)).epsilon(1e-5));
}

TEST_CASE("profile validation") {
  ChargeProfile bad = kDefault;
  bad.radius = -1.0;
  CHECK_THROWS_AS(rho_hat(bad, 1.0), validation_error);
  ChargeProfile tab;
  tab.kind = ProfileKind::Tabulated;
  tab.radial_samples = {1.0, std::nan("")};
  CHECK_THROWS_AS(tab.validate(), validation_error);
}

TEST_CASE("wiener check passes near k = 0 for a nonnegative bump") {
  const WienerReport rep = wiener_check(kDefault, 1.0, 101);
  CHECK(rep.pass);
  CHECK(rep.rho_hat0 > 0.0);
  CHECK(rep.min_abs > 1e-3 * rep.rho_hat0);
}

TEST_CASE("wiener check detects the Fourier zeros of the ball indicator") {
  ChargeProfile ball;
  ball.kind = ProfileKind::Ball;
  ball.radius = 2.0;
  const WienerReport rep = wiener_check(ball, 20.0, 4001);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_abs < rep.threshold);
  // the minimum sits on a zero of sin(s) - s cos(s)
  const double s = rep.argmin * ball.radius;
  CHECK(std::abs(std::sin(s) - s * std::cos(s)) < 1e-6);
}

TEST_CASE("wiener scan minimum agrees with a dense rescan") {
  const WienerReport rep = wiener_check(kDefault, 20.0, 4001);
  double dense = std::abs(rho_hat(kDefault, 0.0));
  double argmin = 0.0;
  const int n = 400001;
  for (int i = 1; i < n; ++i) {
    const double k = 20.0 * i / (n - 1);
    const double a = std::abs(rho_hat(kDefault, k));
    if (a < dense) {
      dense = a;
      argmin = k;
    }
  }
  // the quartic bump transform has a true zero inside [0, 20]
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_abs <= dense + 1e-15);
  CHECK(rep.argmin == doctest::Approx(argmin).epsilon(1e-4));
}

TEST_CASE("rho_on_grid: symmetry, zero amplitude, discrete mass") {
  const Grid g{64, 16.0};
  SUBCASE("even under x -> -x up to grid indexing") {
    const ScalarField f = rho_on_grid(kDefault, g, Vec3::Zero());
    for (int i = 1; i < g.n; ++i)
      CHECK(f[g.index(i, 3, 5)] ==
            doctest::Approx(f[g.index(g.n - i, g.n - 3, g.n - 5)]).epsilon(1e-14));
  }
  SUBCASE("zero amplitude gives the zero field") {
    ChargeProfile off = kDefault;
    off.amplitude = 0.0;
    const ScalarField f = rho_on_grid(off, g, Vec3(1.0, 2.0, 3.0));
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i]);
    CHECK(s == 0.0);
  }
  SUBCASE("discrete integral matches the radial quadrature to O(h^2)") {
    const ScalarField f = rho_on_grid(kDefault, g, Vec3(0.25, -1.0, 2.0));
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
    s *= std::pow(g.h(), 3);
    CHECK(s == doctest::Approx(kDefault.total_charge()).epsilon(2e-3));
  }
  SUBCASE("support leaving the box errors") {
    CHECK_THROWS_WITH_AS(rho_on_grid(kDefault, g, Vec3(15.0, 0.0, 0.0)),
                         doctest::Contains("support clipped"), validation_error);
  }
}
