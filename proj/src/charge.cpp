#include "kgs/charge.hpp"

#include <cmath>

#include "kgs/quadrature.hpp"

namespace kgs {

namespace {

// J(s) = int_0^1 u (1-u^2)^2 sin(su) du / s
//      = 8 (s^3 cos s - 6 s^2 sin s - 15 s cos s + 15 sin s) / s^7,
// so that rhohat(k) = (2pi)^{-3/2} 4 pi A R^3 J(kR) for the quartic bump.
// The closed form loses all digits for small s; switch to the Taylor series.
double bump_kernel(double s) {
  if (std::abs(s) < 1.0) {
    const double s2 = s * s;
    double term = 8.0 / 105.0, sum = term;
    // series: 8/105 - 4 s^2/945 + s^4/10395 - s^6/810810 + s^8/97297200 - ...
    static const double c[] = {-4.0 / 945.0, 1.0 / 10395.0, -1.0 / 810810.0,
                               1.0 / 97297200.0, -1.0 / 16540524000.0};
    double p = 1.0;
    for (double ci : c) {
      p *= s2;
      sum += ci * p;
    }
    return sum;
  }
  const double s2 = s * s;
  return 8.0 * ((s2 - 15.0) * s * std::cos(s) + (15.0 - 6.0 * s2) * std::sin(s)) / (s2 * s2 * s2 * s);
}

// (sin s - s cos s)/s^3 with its small-s limit 1/3.
double ball_kernel(double s) {
  if (std::abs(s) < 1e-2) {
    const double s2 = s * s;
    return 1.0 / 3.0 - s2 / 30.0 + s2 * s2 / 840.0;
  }
  return (std::sin(s) - s * std::cos(s)) / (s * s * s);
}

double tabulated_radial_integral(const ChargeProfile& p, double k) {
  // int_0^R r sin(kr) rho1(r) dr with linear interpolation between samples
  const auto f = [&](double r) { return (k == 0.0 ? r : std::sin(k * r)) * r * p.rho1(r); };
  const int panels = std::max<int>(16, static_cast<int>(std::abs(k) * p.radius));
  return gl_composite(f, 0.0, p.radius, panels, 8);
}

}  // namespace

double ChargeProfile::rho1(double r) const {
  if (r >= radius) return 0.0;
  switch (kind) {
    case ProfileKind::QuarticBump: {
      const double u = 1.0 - (r * r) / (radius * radius);
      return amplitude * u * u;
    }
    case ProfileKind::Ball:
      return amplitude;
    case ProfileKind::Tabulated: {
      if (radial_samples.size() < 2) throw validation_error("profile: need >= 2 radial samples");
      const double t = r / radius * (radial_samples.size() - 1);
      const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(t), radial_samples.size() - 2);
      const double frac = t - j;
      return amplitude * ((1.0 - frac) * radial_samples[j] + frac * radial_samples[j + 1]);
    }
  }
  return 0.0;
}

void ChargeProfile::validate() const {
  if (!(radius > 0.0)) throw validation_error("profile: support radius must be positive");
  if (!std::isfinite(amplitude)) throw validation_error("profile: amplitude not finite");
  if (kind == ProfileKind::Tabulated) {
    if (radial_samples.size() < 2) throw validation_error("profile: need >= 2 radial samples");
    for (double s : radial_samples)
      if (!std::isfinite(s)) throw validation_error("profile: non-finite radial sample");
  }
}

double ChargeProfile::total_charge() const {
  validate();
  switch (kind) {
    case ProfileKind::QuarticBump:
      // 4 pi A R^3 int_0^1 u^2 (1-u^2)^2 du = 4 pi A R^3 * 8/105
      return 4.0 * M_PI * amplitude * radius * radius * radius * (8.0 / 105.0);
    case ProfileKind::Ball:
      return 4.0 / 3.0 * M_PI * amplitude * radius * radius * radius;
    case ProfileKind::Tabulated:
      return 4.0 * M_PI * gl_composite([&](double r) { return r * r * rho1(r); }, 0.0, radius, 32, 8);
  }
  return 0.0;
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "quartic_bump") return ProfileKind::QuarticBump;
  if (s == "ball") return ProfileKind::Ball;
  if (s == "tabulated") return ProfileKind::Tabulated;
  throw validation_error("profile: unknown kind '" + s + "'");
}

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::QuarticBump: return "quartic_bump";
    case ProfileKind::Ball: return "ball";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "?";
}

double rho_hat(const ChargeProfile& profile, double kmag) {
  profile.validate();
  const double k = std::abs(kmag);
  const double R = profile.radius, A = profile.amplitude;
  const double R3 = R * R * R;
  switch (profile.kind) {
    case ProfileKind::QuarticBump:
      return 4.0 * M_PI * A * R3 * bump_kernel(k * R) / two_pi_pow_3_2;
    case ProfileKind::Ball:
      return 4.0 * M_PI * A * R3 * ball_kernel(k * R) / two_pi_pow_3_2;
    case ProfileKind::Tabulated:
      if (k == 0.0)
        return profile.total_charge() / two_pi_pow_3_2;
      return 4.0 * M_PI / k * tabulated_radial_integral(profile, k) / two_pi_pow_3_2;
  }
  return 0.0;
}

WienerReport wiener_check(const ChargeProfile& profile, double k_max, int n,
                          double rel_threshold) {
  profile.validate();
  if (!(k_max > 0.0) || n < 2) throw validation_error("wiener_check: need k_max > 0 and n >= 2");
  WienerReport rep;
  rep.rho_hat0 = rho_hat(profile, 0.0);
  rep.threshold = rel_threshold * std::abs(rep.rho_hat0);

  const double dk = k_max / (n - 1);
  double best = std::abs(rep.rho_hat0), best_k = 0.0;
  for (int i = 1; i < n; ++i) {
    const double k = i * dk;
    const double a = std::abs(rho_hat(profile, k));
    if (a < best) {
      best = a;
      best_k = k;
    }
  }

  // golden-section refinement of |rhohat| around the scan minimum, so that a
  // true zero between scan points is actually detected
  double a = std::max(0.0, best_k - dk), b = std::min(k_max, best_k + dk);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = std::abs(rho_hat(profile, x1)), f2 = std::abs(rho_hat(profile, x2));
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = std::abs(rho_hat(profile, x1));
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = std::abs(rho_hat(profile, x2));
    }
  }
  const double xr = 0.5 * (a + b), fr = std::abs(rho_hat(profile, xr));
  if (fr < best) {
    best = fr;
    best_k = xr;
  }

  rep.min_abs = best;
  rep.argmin = best_k;
  rep.pass = best > rep.threshold;
  return rep;
}

SpectralField rho_hat_on_grid(const ChargeProfile& profile, const Grid& grid) {
  profile.validate();
  grid.validate();
  SpectralField out(grid);
  const int n = grid.n;
  // table of rho_hat over the radial range of the k-grid, cubic interpolation
  // would be possible but the closed forms are cheap enough to evaluate per
  // magnitude directly
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = grid.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = grid.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        if (i == n / 2 || j == n / 2 || l == n / 2) continue;  // Nyquist planes
        const double kl = grid.k(l);
        out[idx] = rho_hat(profile, std::sqrt(ki * ki + kj * kj + kl * kl));
      }
    }
  }
  return out;
}

ScalarField rho_on_grid(const ChargeProfile& profile, const Grid& grid, const Vec3& center) {
  profile.validate();
  grid.validate();
  const double margin = grid.half_length - profile.radius;
  for (int a = 0; a < 3; ++a)
    if (std::abs(center[a]) > margin)
      throw validation_error("rho_on_grid: support clipped by the box");
  ScalarField out(grid);
  std::size_t idx = 0;
  for (int i = 0; i < grid.n; ++i) {
    const double dx = grid.x(i) - center[0];
    for (int j = 0; j < grid.n; ++j) {
      const double dy = grid.x(j) - center[1];
      for (int l = 0; l < grid.n; ++l, ++idx) {
        const double dz = grid.x(l) - center[2];
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        out[idx] = profile.rho1(r);
      }
    }
  }
  return out;
}

}  // namespace kgs
