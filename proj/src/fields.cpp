#include "kgs/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

namespace kgs {

void Grid::validate() const {
  if (n < 2 || n % 2 != 0) throw validation_error("grid: N must be even and >= 2");
  if (!(half_length > 0.0)) throw validation_error("grid: L must be positive");
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
  if (v_.size() != g.size()) throw validation_error("field: value count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw validation_error("field: grid mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw validation_error("field: grid mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}
ScalarField& ScalarField::operator*=(double c) {
  for (double& x : v_) x *= c;
  return *this;
}

namespace {

// FFTW plan cache per (N, sign). Plans are created unaligned so they can be
// executed on any buffer; creation is serialized (FFTW planner is not
// thread-safe), execution via fftw_execute_dft is.
std::mutex plan_mutex;

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Complex> tmp(static_cast<std::size_t>(n) * n * n);
  fftw_plan p = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(tmp.data()),
                                 reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache[key] = p;
  return p;
}

void execute(int n, int sign, Complex* buf) {
  fftw_plan p = get_plan(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf), reinterpret_cast<fftw_complex*>(buf));
}

// (-1)^{m1+m2+m3} phase from the box offset x_0 = (-L,-L,-L).
inline double offset_sign(int i, int j, int l) { return ((i + j + l) & 1) ? -1.0 : 1.0; }

}  // namespace

SpectralField forward(const ScalarField& f) {
  const Grid& g = f.grid();
  g.validate();
  SpectralField out(g);
  const int n = g.n;
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = Complex(f[i], 0.0);
  execute(n, FFTW_BACKWARD, out.data());  // e^{+2pi i m.i/N}
  const double scale = std::pow(g.h(), 3) / two_pi_pow_3_2;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l, ++idx) out[idx] *= scale * offset_sign(i, j, l);
  return out;
}

ScalarField inverse(const SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n;
  std::vector<Complex> buf(f.data(), f.data() + f.size());
  const double scale = std::pow(M_PI / g.half_length, 3) / two_pi_pow_3_2;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l, ++idx) buf[idx] *= scale * offset_sign(i, j, l);
  execute(n, FFTW_FORWARD, buf.data());  // e^{-2pi i m.i/N}
  ScalarField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
  return out;
}

SpectralPair forward(const FieldPair& f) {
  SpectralPair out;
  out.psi = forward(f.psi);
  out.pi = forward(f.pi);
  return out;
}

FieldPair inverse(const SpectralPair& f) {
  FieldPair out;
  out.psi = inverse(f.psi);
  out.pi = inverse(f.pi);
  return out;
}

double dot(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw validation_error("dot: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * std::pow(a.grid().h(), 3);
}

double norm_l2(const ScalarField& a) { return std::sqrt(dot(a, a)); }

void axpy(double c, const ScalarField& x, ScalarField& y) {
  if (!(x.grid() == y.grid())) throw validation_error("axpy: grid mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

void axpy(double c, const FullState& x, FullState& y) {
  axpy(c, x.fields.psi, y.fields.psi);
  axpy(c, x.fields.pi, y.fields.pi);
  y.q += c * x.q;
  y.p += c * x.p;
}

double spectral_dot(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw validation_error("spectral_dot: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s * std::pow(M_PI / a.grid().half_length, 3);
}

void derivative_inplace(SpectralField& f, int axis) {
  const Grid& g = f.grid();
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l, ++idx) {
        const int m = (axis == 0) ? i : (axis == 1) ? j : l;
        f[idx] *= Complex(0.0, -g.k(m));
      }
    }
  }
}

ScalarField derivative(const ScalarField& f, int axis) {
  SpectralField fh = forward(f);
  derivative_inplace(fh, axis);
  return inverse(fh);
}

void translate_inplace(SpectralField& f, const Vec3& a) {
  const Grid& g = f.grid();
  const int n = g.n;
  // e^{i k.a} factorizes over axes
  std::vector<Complex> ph[3];
  for (int ax = 0; ax < 3; ++ax) {
    ph[ax].resize(n);
    for (int m = 0; m < n; ++m) ph[ax][m] = std::polar(1.0, g.k(m) * a[ax]);
  }
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex pij = ph[0][i] * ph[1][j];
      for (int l = 0; l < n; ++l, ++idx) f[idx] *= pij * ph[2][l];
    }
}

ScalarField translate(const ScalarField& f, const Vec3& a) {
  SpectralField fh = forward(f);
  translate_inplace(fh, a);
  return inverse(fh);
}

FullState translate_fields(const FullState& y, const Vec3& a) {
  FullState out = y;
  out.fields.psi = translate(y.fields.psi, a);
  out.fields.pi = translate(y.fields.pi, a);
  return out;
}

namespace {

double h1_norm(const ScalarField& f) {
  SpectralField fh = forward(f);
  double l2 = 0.0, grad2 = 0.0;
  const Grid& g = f.grid();
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double kl = g.k(l);
        const double a = std::norm(fh[idx]);
        l2 += a;
        grad2 += (ki * ki + kj * kj + kl * kl) * a;
      }
    }
  }
  const double mes = std::pow(M_PI / g.half_length, 3);
  return std::sqrt(l2 * mes) + std::sqrt(grad2 * mes);
}

}  // namespace

double weighted_norm(const FieldPair& f, double alpha, const Vec3& center) {
  // ||w psi|| + ||w |grad psi|| + ||w pi||: the gradient is taken spectrally
  // on the smooth field and weighted afterwards (equivalent H^1_alpha norm;
  // the weight itself has a cusp at the center and must not be
  // differentiated).
  const Grid& g = f.grid();
  SpectralField ph = forward(f.psi);
  ScalarField gmag2(g);
  for (int ax = 0; ax < 3; ++ax) {
    SpectralField d = ph;
    derivative_inplace(d, ax);
    const ScalarField dx = inverse(d);
    for (std::size_t i = 0; i < gmag2.size(); ++i) gmag2[i] += dx[i] * dx[i];
  }
  std::size_t idx = 0;
  double wpsi2 = 0.0, wgrad2 = 0.0, wpi2 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double dxx = g.x(i) - center[0];
    for (int j = 0; j < g.n; ++j) {
      const double dy = g.x(j) - center[1];
      for (int l = 0; l < g.n; ++l, ++idx) {
        const double dz = g.x(l) - center[2];
        const double r = std::sqrt(dxx * dxx + dy * dy + dz * dz);
        const double w2 = std::pow(1.0 + r, 2.0 * alpha);
        wpsi2 += w2 * f.psi[idx] * f.psi[idx];
        wgrad2 += w2 * gmag2[idx];
        wpi2 += w2 * f.pi[idx] * f.pi[idx];
      }
    }
  }
  const double mes = std::pow(g.h(), 3);
  return std::sqrt(wpsi2 * mes) + std::sqrt(wgrad2 * mes) + std::sqrt(wpi2 * mes);
}

double weighted_norm(const FullState& y, double alpha, const Vec3& center) {
  return weighted_norm(y.fields, alpha, center) + y.q.norm() + y.p.norm();
}

double f_norm(const FieldPair& f) { return h1_norm(f.psi) + norm_l2(f.pi); }

double energy_norm(const SpectralPair& f, double m) {
  const Grid& g = f.grid();
  const int n = g.n;
  double e = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double ki = g.k(i);
    for (int j = 0; j < n; ++j) {
      const double kj = g.k(j);
      for (int l = 0; l < n; ++l, ++idx) {
        const double k2 = ki * ki + kj * kj + g.k(l) * g.k(l);
        e += (k2 + m * m) * std::norm(f.psi[idx]) + std::norm(f.pi[idx]);
      }
    }
  }
  return std::sqrt(e * std::pow(M_PI / g.half_length, 3));
}

double energy_norm(const FieldPair& f, double m) { return energy_norm(forward(f), m); }

// ---- snapshots ----

namespace {
constexpr char kMagic[8] = {'K', 'G', 'S', 'N', 'A', 'P', '0', '1'};
}

void write_snapshot(const std::string& path, const std::vector<const ScalarField*>& fields,
                    double time) {
  if (fields.empty()) throw validation_error("snapshot: no fields");
  const Grid& g = fields.front()->grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw numerical_error("snapshot: cannot open " + path);
  char header[64] = {};
  std::memcpy(header, kMagic, 8);
  const std::int64_t n = g.n, count = static_cast<std::int64_t>(fields.size());
  const double L = g.half_length;
  std::memcpy(header + 8, &n, 8);
  std::memcpy(header + 16, &L, 8);
  std::memcpy(header + 24, &count, 8);
  std::memcpy(header + 32, &time, 8);
  out.write(header, 64);
  for (const ScalarField* f : fields) {
    if (!(f->grid() == g)) throw validation_error("snapshot: grid mismatch");
    out.write(reinterpret_cast<const char*>(f->data()), static_cast<std::streamsize>(f->size() * 8));
  }
}

std::pair<std::vector<ScalarField>, double> read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw numerical_error("snapshot: cannot open " + path);
  char header[64];
  in.read(header, 64);
  if (in.gcount() != 64 || std::memcmp(header, kMagic, 8) != 0)
    throw numerical_error("snapshot: bad header in " + path);
  std::int64_t n, count;
  double L, time;
  std::memcpy(&n, header + 8, 8);
  std::memcpy(&L, header + 16, 8);
  std::memcpy(&count, header + 24, 8);
  std::memcpy(&time, header + 32, 8);
  Grid g{static_cast<int>(n), L};
  g.validate();
  std::vector<ScalarField> fields;
  for (std::int64_t c = 0; c < count; ++c) {
    ScalarField f(g);
    in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(f.size() * 8));
    if (static_cast<std::size_t>(in.gcount()) != f.size() * 8)
      throw numerical_error("snapshot: truncated file " + path);
    fields.push_back(std::move(f));
  }
  return {std::move(fields), time};
}

}  // namespace kgs
