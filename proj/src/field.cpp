#include "hlim/field.hpp"

#include <cmath>
#include <string>

#include "hlim/errors.hpp"

namespace hlim {

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->size(), Complex{0.0, 0.0}) {}

SpectralField::SpectralField(GridPtr grid, CoeffVector coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->size())
    throw ValidationError("spectral field: coefficient count does not match grid");
}

void require_same_grid(const SpectralField &a, const SpectralField &b, const char *where) {
  if (a.empty() || b.empty() || !same_grid(a.grid(), b.grid()))
    throw ValidationError(std::string(where) + ": grid mismatch");
}

SpectralField &SpectralField::operator+=(const SpectralField &o) {
  require_same_grid(*this, o, "field +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField &SpectralField::operator-=(const SpectralField &o) {
  require_same_grid(*this, o, "field -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField &SpectralField::operator*=(double s) {
  for (auto &c : coeffs_)
    c *= s;
  return *this;
}

SpectralField &SpectralField::operator*=(Complex s) {
  for (auto &c : coeffs_)
    c *= s;
  return *this;
}

SpectralField &SpectralField::axpy(double s, const SpectralField &o) {
  require_same_grid(*this, o, "field axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto &c : coeffs_)
    m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::all_finite() const noexcept {
  for (const auto &c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      return false;
  return true;
}

SpectralField operator+(SpectralField a, const SpectralField &b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField &b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

RealField::RealField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RealField::RealField(GridPtr grid, RealVector values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw ValidationError("real field: value count does not match grid");
}

double lattice_x(const Grid &g, int i1) { return i1 * g.dx(); }
double lattice_y(const Grid &g, int i2) { return i2 * g.dy(); }
double lattice_z(const Grid &g, int i3) {
  const double z = i3 * g.dz();
  return z >= 1.0 ? z - 2.0 : z;
}

RealField RealField::from_function(GridPtr grid, const std::function<double(double, double, double)> &f) {
  RealField out(grid);
  const Grid &g = *grid;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      for (int i3 = 0; i3 < g.n3(); ++i3)
        out[g.index(i1, i2, i3)] = f(lattice_x(g, i1), lattice_y(g, i2), lattice_z(g, i3));
  return out;
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

} // namespace hlim
