#pragma once

// Periodic-box grid, spectral transforms and field algebra.
//
// The box is [-L,L)^3 with N points per axis (N even), spacing h = 2L/N.
// Wavenumbers per axis are k = (pi/L)*m with m in {-N/2,...,N/2-1}, stored
// in FFT order. The discrete transform carries the continuum normalization
//   fhat(k) = (2pi)^{-3/2} h^3 sum_x e^{+ik.x} f(x),
// so that the grid transform of a sampled charge density approximates its
// continuum Fourier transform, and the inverse uses the dual measure
// (pi/L)^3 (2pi)^{-3/2} sum_k e^{-ik.x}. Round trip is the identity.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "kgs/types.hpp"

namespace kgs {

struct Grid {
  int n = 64;            // points per axis, even
  double half_length = 16.0;  // L; box is [-L, L)^3

  double h() const { return 2.0 * half_length / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double x(int i) const { return -half_length + i * h(); }
  // wavenumber of FFT index m (0 <= m < n)
  double k(int m) const {
    const int mm = (m < n / 2) ? m : m - n;
    return mm * M_PI / half_length;
  }
  std::size_t index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n + j) * n + l;
  }
  void validate() const;
  bool operator==(const Grid&) const = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid_(g), v_(g.size(), 0.0) {}
  ScalarField(const Grid& g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);

 private:
  Grid grid_;
  std::vector<double> v_;
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid_(g), c_(g.size(), Complex(0, 0)) {}

  const Grid& grid() const { return grid_; }
  Complex* data() { return c_.data(); }
  const Complex* data() const { return c_.data(); }
  Complex& operator[](std::size_t i) { return c_[i]; }
  const Complex& operator[](std::size_t i) const { return c_[i]; }
  std::size_t size() const { return c_.size(); }

 private:
  Grid grid_;
  std::vector<Complex> c_;
};

SpectralField forward(const ScalarField& f);
ScalarField inverse(const SpectralField& f);

struct FieldPair {
  ScalarField psi, pi;
  FieldPair() = default;
  explicit FieldPair(const Grid& g) : psi(g), pi(g) {}
  const Grid& grid() const { return psi.grid(); }
};

struct SpectralPair {
  SpectralField psi, pi;
  SpectralPair() = default;
  explicit SpectralPair(const Grid& g) : psi(g), pi(g) {}
  const Grid& grid() const { return psi.grid(); }
};

SpectralPair forward(const FieldPair& f);
FieldPair inverse(const SpectralPair& f);

/// Phase point Y = (psi, pi, q, p).
struct FullState {
  FieldPair fields;
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  FullState() = default;
  explicit FullState(const Grid& g) : fields(g) {}
  const Grid& grid() const { return fields.grid(); }
};

// ---- algebra (grid quadrature h^3 sum) ----

double dot(const ScalarField& a, const ScalarField& b);
double norm_l2(const ScalarField& a);
void axpy(double a, const ScalarField& x, ScalarField& y);  // y += a*x
void axpy(double a, const FullState& x, FullState& y);

/// <fhat, ghat> under the dual measure; equals dot(f, g) by discrete Parseval.
double spectral_dot(const SpectralField& a, const SpectralField& b);

ScalarField derivative(const ScalarField& f, int axis);
void derivative_inplace(SpectralField& f, int axis);  // multiply by -i k_axis

/// Exact spectral translation f(. - a).
ScalarField translate(const ScalarField& f, const Vec3& a);
FullState translate_fields(const FullState& y, const Vec3& a);
void translate_inplace(SpectralField& f, const Vec3& a);  // multiply by e^{+ik.a}

// ---- weighted Sobolev norms, (1+|x-center|)^alpha weights ----
// ||psi||_{s,alpha} = ||(1+|x|)^alpha psi||_{H^s} with ||u||_{H^1} = ||u|| + ||grad u||.

double weighted_norm(const FieldPair& f, double alpha, const Vec3& center = Vec3::Zero());
double weighted_norm(const FullState& y, double alpha, const Vec3& center = Vec3::Zero());

/// ||F||_F = ||psi||_{H^1} + ||pi||_{L^2} (alpha = 0).
double f_norm(const FieldPair& f);

/// sqrt( sum_k (k^2+m^2)|psihat|^2 + |pihat|^2 ); invariant of the free flow.
double energy_norm(const FieldPair& f, double m);
double energy_norm(const SpectralPair& f, double m);

// ---- binary field snapshots ----
// 64-byte header (magic "KGSNAP01", int64 N, float64 L, int64 field count,
// float64 time, zero padding), then count * N^3 float64 little-endian values,
// row-major with z fastest.

void write_snapshot(const std::string& path, const std::vector<const ScalarField*>& fields,
                    double time);
std::pair<std::vector<ScalarField>, double> read_snapshot(const std::string& path);

}  // namespace kgs
