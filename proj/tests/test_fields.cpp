#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "kgs/charge.hpp"
#include "kgs/fields.hpp"
#include "kgs/random_fields.hpp"

using namespace kgs;

namespace {

const Grid kGrid{64, 16.0};

ScalarField gaussian(const Grid& g, double s, const Vec3& c = Vec3::Zero()) {
  ScalarField f(g);
  std::size_t idx = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int l = 0; l < g.n; ++l, ++idx) {
        const Vec3 x(g.x(i), g.x(j), g.x(l));
        f[idx] = std::exp(-(x - c).squaredNorm() / (2.0 * s * s));
      }
  return f;
}

ScalarField grid_mode(const Grid& g, int mi, int mj, int ml) {
  // cos(k.x) for an exactly representable wavenumber
  ScalarField f(g);
  const double ki = mi * M_PI / g.half_length, kj = mj * M_PI / g.half_length,
               kl = ml * M_PI / g.half_length;
  std::size_t idx = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int l = 0; l < g.n; ++l, ++idx)
        f[idx] = std::cos(ki * g.x(i) + kj * g.x(j) + kl * g.x(l));
  return f;
}

}  // namespace

TEST_CASE("grid wavenumbers cover (pi/L) {-N/2 .. N/2-1}") {
  const Grid g{8, 2.0};
  g.validate();
  CHECK(g.h() == doctest::Approx(0.5));
  std::vector<double> ks;
  for (int m = 0; m < 8; ++m) ks.push_back(g.k(m));
  std::sort(ks.begin(), ks.end());
  for (int i = 0; i < 8; ++i) CHECK(ks[i] == doctest::Approx((i - 4) * M_PI / 2.0));
  CHECK_THROWS_AS((Grid{7, 2.0}.validate()), validation_error);
  CHECK_THROWS_AS((Grid{8, -1.0}.validate()), validation_error);
}

TEST_CASE("transform round trip is the identity") {
  Rng rng(7);
  ScalarField f = random_bump(kGrid, rng, 6.0, 2.0);
  const ScalarField back = inverse(forward(f));
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    err = std::max(err, std::abs(back[i] - f[i]));
    scale = std::max(scale, std::abs(f[i]));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("constant and single-mode fields concentrate in the right bins") {
  SUBCASE("constant field") {
    ScalarField f(kGrid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.5;
    const SpectralField fh = forward(f);
    double off = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i)
      if (i != 0) off = std::max(off, std::abs(fh[i]));
    CHECK(std::abs(fh[0]) > 1.0);
    CHECK(off <= 1e-12 * std::abs(fh[0]));
  }
  SUBCASE("pure mode lands on its two conjugate bins") {
    const ScalarField f = grid_mode(kGrid, 3, 0, 0);
    const SpectralField fh = forward(f);
    const std::size_t hit = kGrid.index(3, 0, 0);
    const std::size_t hitc = kGrid.index(kGrid.n - 3, 0, 0);
    double off = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i)
      if (i != hit && i != hitc) off = std::max(off, std::abs(fh[i]));
    CHECK(std::abs(fh[hit]) > 1.0);
    CHECK(off <= 1e-12 * std::abs(fh[hit]));
  }
}

TEST_CASE("grid transform of the sampled charge approximates rho_hat") {
  const ChargeProfile p{};
  // x-space sampling carries an O(h^2)-type alias error that shrinks under
  // refinement
  const Grid fine{128, 16.0};
  const SpectralField rc = forward(rho_on_grid(p, kGrid, Vec3::Zero()));
  const SpectralField rf = forward(rho_on_grid(p, fine, Vec3::Zero()));
  for (const int m : {0, 1, 3, 7}) {
    const double k = kGrid.k(m);
    const double exact = rho_hat(p, k);
    const double ec = std::abs(rc[kGrid.index(m, 0, 0)].real() - exact);
    const double ef = std::abs(rf[fine.index(m, 0, 0)].real() - exact);
    CHECK(ec < 5e-3 * std::abs(rho_hat(p, 0.0)));
    CHECK(ef < 0.35 * ec + 1e-12);
    CHECK(std::abs(rc[kGrid.index(m, 0, 0)].imag()) < 1e-12);
  }
  // the band-limited realization reproduces rho_hat exactly at grid modes
  const SpectralField rb = rho_hat_on_grid(p, kGrid);
  for (const int m : {0, 1, 3, 7})
    CHECK(rb[kGrid.index(m, 0, 0)].real() ==
          doctest::Approx(rho_hat(p, kGrid.k(m))).epsilon(1e-15));
}

TEST_CASE("spectral derivative of a grid mode is exact") {
  const Grid g{32, 8.0};
  const double k3 = 3.0 * M_PI / g.half_length;
  const ScalarField f = grid_mode(g, 3, 0, 0);
  const ScalarField df = derivative(f, 0);
  // d/dx cos(kx) = -k sin(kx)
  std::size_t idx = 0;
  double err = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int l = 0; l < g.n; ++l, ++idx)
        err = std::max(err, std::abs(df[idx] + k3 * std::sin(k3 * g.x(i))));
  CHECK(err < 1e-12);
}

TEST_CASE("integration by parts on the periodic grid") {
  FieldPair f = random_bump_pair(kGrid, 11, 6.0, 1.5);
  FieldPair gpair = random_bump_pair(kGrid, 12, 6.0, 1.5, Vec3(2.0, -1.0, 0.5));
  for (int ax = 0; ax < 3; ++ax) {
    const double lhs = dot(derivative(f.psi, ax), gpair.psi);
    const double rhs = -dot(f.psi, derivative(gpair.psi, ax));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("Parseval identity") {
  const FieldPair f = random_bump_pair(kGrid, 21, 6.0, 1.5);
  const FieldPair g = random_bump_pair(kGrid, 22, 5.0, 1.5, Vec3(1.0, 1.0, -2.0));
  const double grid_ip = dot(f.psi, g.psi);
  const double spec_ip = spectral_dot(forward(f.psi), forward(g.psi));
  CHECK(grid_ip == doctest::Approx(spec_ip).epsilon(1e-10));
  CHECK(dot(f.psi, f.psi) >= 0.0);
  CHECK(dot(f.psi, g.psi) == doctest::Approx(dot(g.psi, f.psi)).epsilon(1e-14));
}

TEST_CASE("translate is exact for band-limited data and composes") {
  const ScalarField f = gaussian(kGrid, 1.5, Vec3(1.0, 0.0, -2.0));
  const Vec3 a(1.25, -0.5, 2.0);
  const ScalarField fa = translate(f, a);
  const ScalarField back = translate(fa, -a);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(back[i] - f[i]));
  CHECK(err < 1e-11);
  // a grid-multiple translation is an exact index shift, for any data
  Rng rng(5);
  const ScalarField rough = random_bump(kGrid, rng, 5.0, 1.5);
  const ScalarField fh = translate(rough, Vec3(kGrid.h(), 0.0, 0.0));
  double err2 = 0.0;
  for (int i = 1; i < kGrid.n; ++i)
    err2 = std::max(err2,
                    std::abs(fh[kGrid.index(i, 10, 20)] - rough[kGrid.index(i - 1, 10, 20)]));
  CHECK(err2 < 1e-9);
}

TEST_CASE("weighted norms") {
  SUBCASE("alpha = 0 is the plain H1 (+) L2 norm plus vector parts") {
    FullState y(kGrid);
    y.fields.psi = gaussian(kGrid, 1.5);
    y.fields.pi = gaussian(kGrid, 1.5);
    y.q = Vec3(3.0, 0.0, 0.0);
    y.p = Vec3(0.0, 4.0, 0.0);
    // frozen radial-quadrature oracle: 2 ||psi|| + ||grad psi|| for s = 1.5
    CHECK(weighted_norm(y.fields, 0.0) == doctest::Approx(1.220979919397579e+01).epsilon(1e-8));
    CHECK(weighted_norm(y, 0.0) ==
          doctest::Approx(1.220979919397579e+01 + 3.0 + 4.0).epsilon(1e-8));
  }
  SUBCASE("Gaussian with alpha = 2 matches the adaptive quadrature oracle") {
    // the grid quadrature of the weighted integrand converges O(h^4) in the
    // |x| cusp of the weight; h = 1/6 puts it below the 1e-6 target
    const Grid fine{192, 16.0};
    FieldPair f(fine);
    f.psi = gaussian(fine, 1.5);
    f.pi = gaussian(fine, 1.5);
    CHECK(weighted_norm(f, 2.0) == doctest::Approx(1.195202025960177e+02).epsilon(1e-6));
  }
  SUBCASE("homogeneity") {
    FieldPair f(kGrid);
    f.psi = gaussian(kGrid, 1.2);
    f.pi = gaussian(kGrid, 2.0, Vec3(1, 1, 1));
    const double base = weighted_norm(f, 1.0);
    f.psi *= -2.5;
    f.pi *= -2.5;
    CHECK(weighted_norm(f, 1.0) == doctest::Approx(2.5 * base).epsilon(1e-13));
  }
  SUBCASE("monotone in alpha") {
    FieldPair f = random_bump_pair(kGrid, 31, 5.0, 1.5, Vec3(0.5, 0.0, -1.0));
    double prev = weighted_norm(f, -2.0);
    for (const double alpha : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
      const double cur = weighted_norm(f, alpha);
      CHECK(cur >= prev * (1.0 - 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("energy norm is invariant under the free flow normalization") {
  const FieldPair f = random_bump_pair(kGrid, 44, 5.0, 1.5);
  CHECK(energy_norm(f, 1.0) == doctest::Approx(energy_norm(forward(f), 1.0)).epsilon(1e-12));
}

TEST_CASE("snapshot round trip") {
  Rng rng(9);
  const ScalarField a = random_bump(kGrid, rng, 4.0, 1.0);
  const ScalarField b = random_bump(kGrid, rng, 4.0, 1.0);
  const std::string path = "/tmp/kgs_test_snapshot.kgsnap";
  write_snapshot(path, {&a, &b}, 1.25);
  const auto [fields, time] = read_snapshot(path);
  REQUIRE(fields.size() == 2);
  CHECK(time == 1.25);
  CHECK(fields[0].grid() == kGrid);
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    err = std::max(err, std::abs(fields[1][i] - b[i]));
  CHECK(err == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("grid mismatch is rejected") {
  ScalarField a(kGrid.n == 64 ? Grid{64, 16.0} : kGrid);
  ScalarField b(Grid{32, 16.0});
  CHECK_THROWS_AS(dot(a, b), validation_error);
}
