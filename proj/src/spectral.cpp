#include "kgs/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kgs/quadrature.hpp"

namespace kgs {

namespace {

double gamma_of(double vmag) {
  if (!(std::abs(vmag) < 1.0)) throw validation_error("superluminal: |v| >= 1");
  return 1.0 / std::sqrt(1.0 - vmag * vmag);
}

// Angular integrals over the direction sphere in u-coordinates
//   u1 = nu k1 - |v| omega / nu, u23 = k23,
// where Dhat_0 = u^2 - R2 and dk = du/nu. Returns
//   s^2 * (int k_j^2 |rhohat(|k|)|^2 dOmega)  for j = par and perp
// at radius s = |u|; the phi integral is analytic.
struct UShell {
  double a;     // |v| omega / nu
  double nu;
  const ChargeProfile* profile;

  // angular rule: rhohat(|k(s,mu)|) oscillates ~ s R_rho times across mu
  int nodes(double s) const {
    const int want = 48 + static_cast<int>(s * profile->radius);
    return std::min(512, (want + 15) & ~15);
  }

  Eigen::Vector2d operator()(double s) const {
    const GaussRule& r = gauss_legendre(nodes(s));
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double mu = r.x[i];
      const double k1 = (s * mu + a) / nu;
      const double kt2 = s * s * (1.0 - mu * mu);  // k2^2 + k3^2
      const double rh = rho_hat(*profile, std::sqrt(k1 * k1 + kt2));
      const double w = rh * rh;
      acc += r.w[i] * Eigen::Vector2d(2.0 * M_PI * k1 * k1 * w, M_PI * kt2 * w);
    }
    return s * s * acc;
  }

  // with the complex denominator (s^2 - R2 + eps^2) + 2 i eps b(k), b = |v|k1 + omega,
  // which never vanishes for eps > 0
  Eigen::Vector4d complex_shell(double s, double omega, double eps, double R2) const {
    const GaussRule& r = gauss_legendre(nodes(s));
    Eigen::Vector4d acc = Eigen::Vector4d::Zero();
    const double c_re = s * s - R2 + eps * eps;
    const double vmag = a * nu / (omega == 0.0 ? 1.0 : omega);  // recover |v|; a = |v| omega/nu
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double mu = r.x[i];
      const double k1 = (s * mu + a) / nu;
      const double kt2 = s * s * (1.0 - mu * mu);
      const double rh = rho_hat(*profile, std::sqrt(k1 * k1 + kt2));
      const double w = rh * rh;
      const Complex denom(c_re, 2.0 * eps * (vmag * k1 + omega));
      const Complex par = 2.0 * M_PI * k1 * k1 * w / denom;
      const Complex perp = M_PI * kt2 * w / denom;
      acc += r.w[i] * Eigen::Vector4d(par.real(), par.imag(), perp.real(), perp.imag());
    }
    return s * s * acc;
  }
};

// worklist-adaptive quadrature for vector integrands with a narrow complex
// ridge: repeatedly bisect the interval with the largest 16- vs 2x16-node
// discrepancy until the total estimated error meets the tolerance
template <typename F>
Eigen::Vector4d adapt_integrate(const F& f, double a, double b, double tol) {
  const GaussRule& r = gauss_legendre(16);
  const auto quad = [&](double lo, double hi) {
    Eigen::Vector4d q = Eigen::Vector4d::Zero();
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < r.x.size(); ++i) q += r.w[i] * f(mid + half * r.x[i]);
    return (q * half).eval();
  };
  struct Seg {
    double a, b, err;
    Eigen::Vector4d q;
  };
  const auto make = [&](double lo, double hi) {
    Seg s;
    s.a = lo;
    s.b = hi;
    const Eigen::Vector4d coarse = quad(lo, hi);
    const double mid = 0.5 * (lo + hi);
    s.q = quad(lo, mid) + quad(mid, hi);
    s.err = (s.q - coarse).cwiseAbs().maxCoeff();
    return s;
  };
  std::vector<Seg> segs;
  const int init = 16;
  for (int i = 0; i < init; ++i)
    segs.push_back(make(a + (b - a) * i / init, a + (b - a) * (i + 1) / init));
  const auto total_err = [&]() {
    double e = 0.0;
    for (const Seg& s : segs) e += s.err;
    return e;
  };
  while (segs.size() < 6000 && total_err() > tol) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].err > segs[worst].err) worst = i;
    const Seg old = segs[worst];
    const double mid = 0.5 * (old.a + old.b);
    segs[worst] = make(old.a, mid);
    segs.push_back(make(mid, old.b));
  }
  if (total_err() > tol) throw numerical_error("spectral: adaptive quadrature did not converge");
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (const Seg& s : segs) acc += s.q;
  return acc;
}

Eigen::Vector2d refine_vec(const std::function<Eigen::Vector2d(double)>& f, double a, double b,
                           double rel_tol) {
  int panels = 8;
  const auto eval = [&](int np) {
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    const GaussRule& r = gauss_legendre(16);
    const double dx = (b - a) / np;
    for (int p = 0; p < np; ++p) {
      const double mid = a + (p + 0.5) * dx, half = 0.5 * dx;
      for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]) * half;
    }
    return acc;
  };
  Eigen::Vector2d prev = eval(panels);
  for (int d = 0; d < 9; ++d) {
    panels *= 2;
    const Eigen::Vector2d cur = eval(panels);
    const double scale = std::max(cur.cwiseAbs().maxCoeff(), 1e-300);
    if ((cur - prev).cwiseAbs().maxCoeff() <= rel_tol * scale) return cur;
    prev = cur;
  }
  throw numerical_error("spectral: quadrature did not converge");
}

// H(i omega + 0) through the u-coordinate representation
//   H_jj = (1/nu) int G_j(s) / (s^2 - R2) ds,   R2 = (omega^2 - mu^2)/nu^2.
CVec3 h_on_axis(double omega, double vmag, const ChargeProfile& profile, double m) {
  const double gamma = gamma_of(vmag);
  const double nu = 1.0 / gamma, mu = m * nu;
  const UShell shell{vmag * omega / nu, nu, &profile};
  const double s_span = nu * (250.0 / profile.radius) + 10.0 * m;
  const double s_max = std::abs(shell.a) + s_span;
  const double R2 = (omega * omega - mu * mu) / (nu * nu);

  Eigen::Vector2d re;
  Eigen::Vector2d im = Eigen::Vector2d::Zero();
  if (R2 < 0.0) {
    // spectral gap: denominator s^2 + |R2| > 0
    re = refine_vec([&](double s) -> Eigen::Vector2d { return shell(s) / (s * s - R2); },
                    0.0, s_max, 1e-10);
  } else if (R2 == 0.0) {
    // branch point: G_j(s)/s^2 is smooth
    re = refine_vec(
        [&](double s) -> Eigen::Vector2d { return shell(s) / std::max(s * s, 1e-300); }, 0.0,
        s_max, 1e-10);
  } else {
    const double R = std::sqrt(R2);
    // principal value: 1/(s^2-R^2) = (1/2R)(1/(s-R) - 1/(s+R)); the 1/(s-R)
    // part over [0,2R] by symmetric folding, the rest is regular
    const auto folded = [&](double t) -> Eigen::Vector2d {
      return (shell(R + t) - shell(R - t)) / t;
    };
    const Eigen::Vector2d pv_win = refine_vec(folded, 0.0, R, 1e-10);
    const auto outer = [&](double s) -> Eigen::Vector2d {
      return shell(s) / (s - R) - shell(s) / (s + R);
    };
    const Eigen::Vector2d tail = s_max > 2.0 * R
                                     ? refine_vec(outer, 2.0 * R, std::max(s_max, 2.5 * R), 1e-10)
                                     : Eigen::Vector2d::Zero();
    const auto second = [&](double s) -> Eigen::Vector2d { return -shell(s) / (s + R); };
    const Eigen::Vector2d sec = refine_vec(second, 0.0, 2.0 * R, 1e-10);
    re = (pv_win + tail + sec) / (2.0 * R);
    // Plemelj term: -sign(omega) pi/(2R) G_j(R)
    im = -(omega >= 0.0 ? 1.0 : -1.0) * M_PI / (2.0 * R) * shell(R);
  }
  re /= nu;
  im /= nu;
  return CVec3(Complex(re[0], im[0]), Complex(re[1], im[1]), Complex(re[1], im[1]));
}

// H(lambda) for Re lambda > 0: u-coordinate representation with the complex
// denominator; handles the near-singular shell of small Re lambda
CVec3 h_off_axis(Complex lambda, double vmag, const ChargeProfile& profile, double m) {
  const double eps = lambda.real(), omega = lambda.imag();
  if (eps < 0.0) throw validation_error("H_matrix: Re lambda must be >= 0");
  const double gamma = gamma_of(vmag);
  const double nu = 1.0 / gamma, mu = m * nu;
  const UShell shell{vmag * omega / nu, nu, &profile};
  const double s_max = std::abs(shell.a) + nu * (250.0 / profile.radius) + 10.0 * m +
                       4.0 * std::abs(lambda);
  const double R2 = (omega * omega - mu * mu) / (nu * nu);

  const auto f = [&](double s) -> Eigen::Vector4d {
    return shell.complex_shell(s, omega, eps, R2);
  };
  // coarse scale estimate, then adaptive refinement to 1e-9 relative
  Eigen::Vector4d probe = Eigen::Vector4d::Zero();
  const GaussRule& r = gauss_legendre(16);
  for (std::size_t i = 0; i < r.x.size(); ++i)
    probe += r.w[i] * f(0.5 * s_max * (r.x[i] + 1.0));
  const double scale = std::max(probe.cwiseAbs().maxCoeff() * 0.5 * s_max, 1e-12);
  Eigen::Vector4d acc = adapt_integrate(f, 0.0, s_max, 1e-9 * scale);
  acc /= nu;
  return CVec3(Complex(acc[0], acc[1]), Complex(acc[2], acc[3]), Complex(acc[2], acc[3]));
}

}  // namespace}  // namespace

Complex kappa(Complex lambda, double vmag, double m) {
  const double gamma = gamma_of(vmag);
  const double mu = m / gamma;
  if (lambda.real() != 0.0) return gamma * std::sqrt(lambda * lambda + mu * mu);
  // limit from Re lambda > 0
  const double omega = lambda.imag();
  if (std::abs(omega) <= mu) return gamma * std::sqrt(mu * mu - omega * omega);
  const double root = gamma * std::sqrt(omega * omega - mu * mu);
  return Complex(0.0, omega > 0.0 ? root : -root);
}

Complex green_function(Complex lambda, const Vec3& v, double m, const Vec3& y) {
  const double vmag = v.norm();
  const double gamma = gamma_of(vmag);
  double y1, yperp2;
  if (vmag > 0.0) {
    y1 = v.dot(y) / vmag;
    yperp2 = y.squaredNorm() - y1 * y1;
  } else {
    y1 = y[0];
    yperp2 = y[1] * y[1] + y[2] * y[2];
  }
  const double yt1 = gamma * y1;
  const double ytn = std::sqrt(yt1 * yt1 + yperp2);
  if (ytn == 0.0) throw validation_error("green_function: singular at y = 0");
  const Complex kap = kappa(lambda, vmag, m);
  const Complex kap1 = gamma * vmag * lambda;
  return std::exp(-kap * ytn - kap1 * yt1) / (4.0 * M_PI * ytn);
}

Vec3 K_matrix(double vmag, const ChargeProfile& profile, double m) {
  gamma_of(vmag);
  profile.validate();
  const double r_max = 60.0 / profile.radius + 20.0 * m;
  const auto entry = [&](bool parallel) {
    const auto radial = [&](double r) {
      const double rh = rho_hat(profile, r);
      const double r2 = r * r;
      const auto angular = [&](double mu) {
        const double denom = r2 + m * m - vmag * vmag * r2 * mu * mu;
        return (parallel ? 2.0 * M_PI * r2 * mu * mu : M_PI * r2 * (1.0 - mu * mu)) / denom;
      };
      return r2 * rh * rh * gl_integrate(angular, -1.0, 1.0, 48);
    };
    return refine_integrate(radial, 0.0, r_max, 1e-10);
  };
  const double par = entry(true), perp = entry(false);
  return Vec3(par, perp, perp);
}

CVec3 H_matrix(Complex lambda, double vmag, const ChargeProfile& profile, double m) {
  profile.validate();
  if (lambda.real() == 0.0) return h_on_axis(lambda.imag(), vmag, profile, m);
  return h_off_axis(lambda, vmag, profile, m);
}

Vec3 im_H_surface(double omega, double vmag, const ChargeProfile& profile, double m) {
  const double gamma = gamma_of(vmag);
  const double nu = 1.0 / gamma, mu = m * nu;
  if (!(std::abs(omega) > mu)) throw validation_error("im_H_surface: need |omega| > mu");
  const double R = std::sqrt(omega * omega - mu * mu) / nu;
  // parametrize T_omega by the u-sphere of radius R; surface element and
  // |grad Dhat_0| cancel to (R/(2 nu)) dOmega
  const UShell shell{vmag * omega / nu, nu, &profile};
  const Eigen::Vector2d g = shell(R);  // = R^2 * angular integrals
  const double sgn = omega >= 0.0 ? 1.0 : -1.0;
  const double c = -sgn * M_PI / (2.0 * R * nu);
  return Vec3(c * g[0], c * g[1], c * g[1]);
}

ResolventSample M_matrix(Complex lambda, double vmag, const ChargeProfile& profile, double m) {
  const double nu2 = 1.0 - vmag * vmag;
  const double nu = std::sqrt(nu2);
  ResolventSample out;
  out.lambda = lambda;
  out.kappa = kappa(lambda, vmag, m);
  out.K = K_matrix(vmag, profile, m);
  out.H = H_matrix(lambda, vmag, profile, m);

  const Vec3 bdiag(nu * nu2, nu, nu);  // B_v in the aligned frame
  out.M.setZero();
  for (int j = 0; j < 3; ++j) {
    out.M(j, j) = lambda;
    out.M(j + 3, j + 3) = lambda;
    out.M(j, j + 3) = -bdiag[j];
    out.M(j + 3, j) = out.K[j] - out.H[j];
  }
  out.detM = out.M.determinant();
  out.detM_factored = 1.0;
  for (int j = 0; j < 3; ++j)
    out.detM_factored *= lambda * lambda + bdiag[j] * (out.K[j] - out.H[j]);
  return out;
}

double appendix_b_value(double big_m, double r, double omega) {
  if (!(big_m > 0.0) || !(std::abs(r) < big_m) || omega == 0.0 ||
      !(std::abs(omega) <= big_m - std::abs(r)))
    throw validation_error("appendix_b: parameters outside the admissible range");
  const auto inv = [](double x) {
    return x == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / x;
  };
  const double rp = r + omega, rm = r - omega;
  return inv(big_m - rp) + inv(big_m - rm) - 2.0 * inv(big_m - r) +
         inv(big_m + rp) + inv(big_m + rm) - 2.0 * inv(big_m + r);
}

bool appendix_b_check(double big_m, double r, double omega) {
  return appendix_b_value(big_m, r, omega) > 0.0;
}

PuiseuxFit puiseux_fit(double vmag, const ChargeProfile& profile, double m, int side,
                       double window, int points_per_side) {
  if (side != 1 && side != -1) throw validation_error("puiseux_fit: side must be +1 or -1");
  const double gamma = gamma_of(vmag);
  const double mu = m / gamma;
  const double w = std::min(window, 0.4 * mu);
  const double branch = side * mu;

  std::vector<double> omegas;
  for (int i = 1; i <= points_per_side; ++i) {
    const double d = w * i / points_per_side;
    omegas.push_back(branch - side * d);  // inside the gap
    omegas.push_back(branch + side * d);  // beyond it
  }

  // half-power coordinate: s(omega) = kappa(i omega + 0)/gamma
  std::vector<Complex> svals;
  std::vector<CMat6> minv;
  double scale = 0.0;
  for (double om : omegas) {
    svals.push_back(kappa(Complex(0.0, om), vmag, m) / gamma);
    const ResolventSample rs = M_matrix(Complex(0.0, om), vmag, profile, m);
    minv.push_back(rs.M.inverse());
    scale = std::max(scale, minv.back().cwiseAbs().maxCoeff());
  }

  // entrywise complex least squares against the basis [1, s(omega)]
  const std::size_t np = omegas.size();
  Eigen::Matrix2cd A = Eigen::Matrix2cd::Zero();
  A(0, 0) = Complex(static_cast<double>(np), 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    A(0, 1) += svals[i];
    A(1, 1) += std::conj(svals[i]) * svals[i];
  }
  A(1, 0) = std::conj(A(0, 1));

  PuiseuxFit fit;
  fit.branch_omega = branch;
  fit.R0.setZero();
  fit.R1.setZero();
  double rss = 0.0;
  std::size_t count = 0;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      Eigen::Vector2cd rhs = Eigen::Vector2cd::Zero();
      for (std::size_t i = 0; i < np; ++i) {
        rhs[0] += minv[i](a, b);
        rhs[1] += std::conj(svals[i]) * minv[i](a, b);
      }
      const Eigen::Vector2cd coef = A.fullPivLu().solve(rhs);
      fit.R0(a, b) = coef[0];
      fit.R1(a, b) = coef[1];
      for (std::size_t i = 0; i < np; ++i) {
        rss += std::norm(minv[i](a, b) - coef[0] - coef[1] * svals[i]);
        ++count;
      }
    }
  }
  fit.residual = std::sqrt(rss / count) / std::max(scale, 1e-300);
  fit.halfpower_norm = fit.R1.norm();
  return fit;
}

}  // namespace kgs
