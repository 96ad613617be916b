#pragma once

// Gauss-Legendre rules and small adaptive drivers used by the k-space
// quadratures (Omega matrix, K, H, surface integrals).

#include <functional>
#include <vector>

namespace kgs {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

/// Integrate f over [a,b] with an n-point rule.
template <typename F>
double gl_integrate(F&& f, double a, double b, int n) {
  const GaussRule& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

/// Composite rule with npanel panels.
template <typename F>
double gl_composite(F&& f, double a, double b, int npanel, int n) {
  double s = 0.0;
  const double dx = (b - a) / npanel;
  for (int p = 0; p < npanel; ++p) s += gl_integrate(f, a + p * dx, a + (p + 1) * dx, n);
  return s;
}

/// Panel-doubling refinement until the relative change drops below rel_tol.
double refine_integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_doublings = 10);

}  // namespace kgs
