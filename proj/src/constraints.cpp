#include "hlim/constraints.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hlim/errors.hpp"

namespace hlim {

HorizontalField &HorizontalField::operator+=(const HorizontalField &o) {
  h1 += o.h1;
  h2 += o.h2;
  return *this;
}

HorizontalField &HorizontalField::operator-=(const HorizontalField &o) {
  h1 -= o.h1;
  h2 -= o.h2;
  return *this;
}

HorizontalField &HorizontalField::operator*=(double s) {
  h1 *= s;
  h2 *= s;
  return *this;
}

HorizontalField &HorizontalField::axpy(double s, const HorizontalField &o) {
  h1.axpy(s, o.h1);
  h2.axpy(s, o.h2);
  return *this;
}

VectorState VectorState::zeros(const GridPtr &grid) {
  return {SpectralField(grid), SpectralField(grid), SpectralField(grid)};
}

VectorState &VectorState::operator+=(const VectorState &o) {
  h1 += o.h1;
  h2 += o.h2;
  v += o.v;
  return *this;
}

VectorState &VectorState::operator-=(const VectorState &o) {
  h1 -= o.h1;
  h2 -= o.h2;
  v -= o.v;
  return *this;
}

VectorState &VectorState::operator*=(double s) {
  h1 *= s;
  h2 *= s;
  v *= s;
  return *this;
}

VectorState &VectorState::axpy(double s, const VectorState &o) {
  h1.axpy(s, o.h1);
  h2.axpy(s, o.h2);
  v.axpy(s, o.v);
  return *this;
}

VectorState operator+(VectorState a, const VectorState &b) { return a += b; }
VectorState operator-(VectorState a, const VectorState &b) { return a -= b; }
VectorState operator*(double s, VectorState a) { return a *= s; }

SpectralField parity_project(const SpectralField &f, ParityClass cls) {
  const Grid &g = f.grid();
  const double sign = cls == ParityClass::even_in_z ? 1.0 : -1.0;
  SpectralField out(f.grid_ptr());
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      for (int i3 = 0; i3 < g.n3(); ++i3, ++idx)
        out[idx] = 0.5 * (f[idx] + sign * f[g.z_mirror_index(i1, i2, i3)]);
  return out;
}

double parity_defect(const SpectralField &f, ParityClass cls) {
  SpectralField d = f;
  d -= parity_project(f, cls);
  return l2_norm(d);
}

void enforce_parity(VectorState &s) {
  s.h1 = parity_project(s.h1, ParityClass::even_in_z);
  s.h2 = parity_project(s.h2, ParityClass::even_in_z);
  s.v = parity_project(s.v, ParityClass::odd_in_z);
}

double max_parity_defect(const VectorState &s) {
  return std::max({parity_defect(s.h1, ParityClass::even_in_z), parity_defect(s.h2, ParityClass::even_in_z),
                   parity_defect(s.v, ParityClass::odd_in_z)});
}

SpectralField horizontal_divergence(const HorizontalField &h) {
  require_same_grid(h.h1, h.h2, "horizontal_divergence");
  const Grid &g = h.h1.grid();
  SpectralField out(h.h1.grid_ptr());
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      for (int i3 = 0; i3 < g.n3(); ++i3, ++idx)
        out[idx] = Complex{0.0, 1.0} * (g.kx()[i1] * h.h1[idx] + g.ky()[i2] * h.h2[idx]);
  return out;
}

SpectralField divergence(const VectorState &s) {
  require_same_grid(s.h1, s.v, "divergence");
  SpectralField out = horizontal_divergence({s.h1, s.h2});
  out += partial_derivative(s.v, Axis::z);
  return out;
}

double divergence_max_norm(const VectorState &s) { return divergence(s).max_abs(); }

SpectralField leray_potential(const VectorState &g, double eps) {
  return anisotropic_poisson_solve(divergence(g), eps);
}

VectorState anisotropic_leray_project(const VectorState &g, double eps) {
  const SpectralField phi = leray_potential(g, eps);
  const Grid &grid = phi.grid();
  VectorState out = g;
  const double inv_eps2 = 1.0 / (eps * eps);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < grid.n1(); ++i1)
    for (int i2 = 0; i2 < grid.n2(); ++i2)
      for (int i3 = 0; i3 < grid.n3(); ++i3, ++idx) {
        const Complex iphi = Complex{0.0, 1.0} * phi[idx];
        out.h1[idx] -= grid.kx()[i1] * iphi;
        out.h2[idx] -= grid.ky()[i2] * iphi;
        out.v[idx] -= inv_eps2 * grid.kz()[i3] * iphi;
      }
  return out;
}

double barotropic_defect(const HorizontalField &h) {
  const SpectralField div = horizontal_divergence(h);
  const Grid &g = div.grid();
  double mean_part = 0.0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      mean_part = std::max(mean_part, std::abs(div[g.index(i1, i2, 0)]));
  const double scale = div.max_abs();
  return scale > 0.0 ? mean_part / scale : 0.0;
}

SpectralField hydrostatic_reconstruct(const HorizontalField &h) {
  const double defect = barotropic_defect(h);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "hydrostatic_reconstruct: vertical mean of div_H h is not zero (relative defect " << defect << ")";
    throw ValidationError(os.str());
  }
  SpectralField g = horizontal_divergence(h);
  g *= -1.0;
  const Grid &grid = g.grid();
  SpectralField v(g.grid_ptr());
  for (int i1 = 0; i1 < grid.n1(); ++i1)
    for (int i2 = 0; i2 < grid.n2(); ++i2) {
      Complex sum{0.0, 0.0};
      for (int i3 = 0; i3 < grid.n3(); ++i3) {
        const double kz = grid.kz()[i3];
        if (kz == 0.0)
          continue;
        const std::size_t idx = grid.index(i1, i2, i3);
        v[idx] = g[idx] / Complex{0.0, kz};
        sum += v[idx];
      }
      v[grid.index(i1, i2, 0)] = -sum;
    }
  return v;
}

HorizontalField barotropic_project(const HorizontalField &h) {
  require_same_grid(h.h1, h.h2, "barotropic_project");
  HorizontalField out = h;
  const Grid &g = h.h1.grid();
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const double kx = g.kx()[i1], ky = g.ky()[i2];
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0)
        continue;
      const std::size_t idx = g.index(i1, i2, 0);
      const Complex d = (kx * out.h1[idx] + ky * out.h2[idx]) / k2;
      out.h1[idx] -= kx * d;
      out.h2[idx] -= ky * d;
    }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool lexicographically_positive(int m1, int m2, int m3) {
  return m1 > 0 || (m1 == 0 && (m2 > 0 || (m2 == 0 && m3 > 0)));
}

SpectralField random_band(std::uint64_t seed, int k1, int k2, int k3, double m0, const GridPtr &grid) {
  const Grid &g = *grid;
  if (2 * k1 >= g.n1() || 2 * k2 >= g.n2() || 2 * k3 >= g.n3())
    throw ValidationError("random field: band exceeds grid resolution");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid);
  const double inv_m02 = 1.0 / (m0 * m0);
  for (int m1 = -k1; m1 <= k1; ++m1)
    for (int m2 = -k2; m2 <= k2; ++m2)
      for (int m3 = -k3; m3 <= k3; ++m3) {
        if (!lexicographically_positive(m1, m2, m3))
          continue;
        const double re = normal(rng);
        const double im = normal(rng);
        const double w = std::exp(-(m1 * m1 + m2 * m2 + m3 * m3) * inv_m02) / std::sqrt(2.0);
        const Complex c{w * re, w * im};
        f.at_mode(m1, m2, m3) = c;
        f.at_mode(-m1, -m2, -m3) = std::conj(c);
      }
  return f;
}

double rms(const HorizontalField &h) {
  double s = 0.0;
  for (const auto &c : h.h1.coeffs())
    s += std::norm(c);
  for (const auto &c : h.h2.coeffs())
    s += std::norm(c);
  return std::sqrt(0.5 * s);
}

HorizontalField random_horizontal(std::uint64_t seed, const SpectrumParams &sp, const GridPtr &grid) {
  const Grid &g = *grid;
  const int k1 = g.n1() / 3, k2 = g.n2() / 3, k3 = g.n3() / 3;
  HorizontalField h{random_band(splitmix64(seed), k1, k2, k3, sp.m0, grid),
                    random_band(splitmix64(seed + 1), k1, k2, k3, sp.m0, grid)};
  h.h1 = parity_project(h.h1, ParityClass::even_in_z);
  h.h2 = parity_project(h.h2, ParityClass::even_in_z);
  h = barotropic_project(h);
  const double r = rms(h);
  if (r > 0.0)
    h *= sp.amplitude / r;
  else
    h *= 0.0;
  return h;
}

} // namespace

SpectralField random_band_limited(std::uint64_t seed, int max_mode, double m0, const GridPtr &grid) {
  return random_band(splitmix64(seed), max_mode, max_mode, max_mode, m0, grid);
}

InitialData generate_initial_data(std::uint64_t seed, const SpectrumParams &spectrum, const GridPtr &grid) {
  if (!std::isfinite(spectrum.amplitude) || !std::isfinite(spectrum.m0) || !(spectrum.m0 > 0.0))
    throw ValidationError("initial data: spectrum amplitude and m0 must be finite, m0 > 0");
  InitialData d;
  d.a_h = random_horizontal(4 * seed, spectrum, grid);
  d.b_h = random_horizontal(4 * seed + 2, spectrum, grid);
  d.a3 = hydrostatic_reconstruct(d.a_h);
  d.b3 = hydrostatic_reconstruct(d.b_h);
  return d;
}

} // namespace hlim
