#pragma once

#include <functional>
#include <utility>

#include "hlim/grid.hpp"

namespace hlim {

/// Fourier coefficients of one real scalar on a Grid. coeff(0) is the mean.
class SpectralField {
public:
  SpectralField() = default;
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, CoeffVector coeffs);

  const Grid &grid() const noexcept { return *grid_; }
  const GridPtr &grid_ptr() const noexcept { return grid_; }
  bool empty() const noexcept { return !grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  CoeffVector &coeffs() noexcept { return coeffs_; }
  const CoeffVector &coeffs() const noexcept { return coeffs_; }

  Complex &operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex &operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  Complex &at_mode(int m1, int m2, int m3) { return coeffs_[grid_->mode_index(m1, m2, m3)]; }
  const Complex &at_mode(int m1, int m2, int m3) const { return coeffs_[grid_->mode_index(m1, m2, m3)]; }

  SpectralField zeros_like() const { return SpectralField(grid_); }

  SpectralField &operator+=(const SpectralField &o);
  SpectralField &operator-=(const SpectralField &o);
  SpectralField &operator*=(double s);
  SpectralField &operator*=(Complex s);
  /// this += s * o
  SpectralField &axpy(double s, const SpectralField &o);

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

private:
  GridPtr grid_;
  CoeffVector coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField &b);
SpectralField operator-(SpectralField a, const SpectralField &b);
SpectralField operator*(double s, SpectralField a);

/// Throws ValidationError when the two fields live on different grids.
void require_same_grid(const SpectralField &a, const SpectralField &b, const char *where);

/// Values of one real scalar on the collocation lattice
/// x_j = j l1/n1, y_j = j l2/n2, z_k = k dz (taken mod 2 into [-1,1)).
class RealField {
public:
  RealField() = default;
  explicit RealField(GridPtr grid);
  RealField(GridPtr grid, RealVector values);

  static RealField from_function(GridPtr grid, const std::function<double(double, double, double)> &f);

  const Grid &grid() const noexcept { return *grid_; }
  const GridPtr &grid_ptr() const noexcept { return grid_; }
  RealVector &values() noexcept { return values_; }
  const RealVector &values() const noexcept { return values_; }
  double &operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  double max_abs() const noexcept;

private:
  GridPtr grid_;
  RealVector values_;
};

/// Lattice coordinates, with z reported in [-1, 1).
double lattice_x(const Grid &g, int i1);
double lattice_y(const Grid &g, int i2);
double lattice_z(const Grid &g, int i3);

} // namespace hlim
