#pragma once

#include <cstdint>

#include "hlim/spectral.hpp"

namespace hlim {

enum class ParityClass { even_in_z, odd_in_z };

/// Horizontal pair (h1, h2) of a vector field.
struct HorizontalField {
  SpectralField h1;
  SpectralField h2;

  HorizontalField &operator+=(const HorizontalField &o);
  HorizontalField &operator-=(const HorizontalField &o);
  HorizontalField &operator*=(double s);
  HorizontalField &axpy(double s, const HorizontalField &o);
};

/// Three-component field: horizontal pair plus vertical component.
struct VectorState {
  SpectralField h1;
  SpectralField h2;
  SpectralField v;

  static VectorState zeros(const GridPtr &grid);
  HorizontalField horizontal() const { return {h1, h2}; }

  VectorState &operator+=(const VectorState &o);
  VectorState &operator-=(const VectorState &o);
  VectorState &operator*=(double s);
  VectorState &axpy(double s, const VectorState &o);
};

VectorState operator+(VectorState a, const VectorState &b);
VectorState operator-(VectorState a, const VectorState &b);
VectorState operator*(double s, VectorState a);

/// Even: average with the z-mirrored mode; odd: antisymmetric average.
SpectralField parity_project(const SpectralField &f, ParityClass cls);
/// ||f - parity_project(f, cls)||_2
double parity_defect(const SpectralField &f, ParityClass cls);

/// Horizontal fields even, vertical field odd.
void enforce_parity(VectorState &s);
double max_parity_defect(const VectorState &s);

/// grad_H . h + d_z v, spectrally.
SpectralField divergence(const VectorState &s);
SpectralField horizontal_divergence(const HorizontalField &h);
/// Largest coefficient modulus of the divergence.
double divergence_max_norm(const VectorState &s);

/// Remove (grad_H phi, eps^-2 d_z phi) with (Laplacian_H + eps^-2 d_zz) phi
/// equal to the divergence of g.
VectorState anisotropic_leray_project(const VectorState &g, double eps);
/// The potential removed by anisotropic_leray_project.
SpectralField leray_potential(const VectorState &g, double eps);

/// Vertical component v with d_z v = -div_H h and v(x, y, 0) = 0.
/// Throws ValidationError when the z-mean of div_H h is not zero to 1e-10
/// relative to the size of div_H h.
SpectralField hydrostatic_reconstruct(const HorizontalField &h);

/// max |z-mean of div_H h| relative to max |div_H h| (0 for a zero field).
double barotropic_defect(const HorizontalField &h);

/// 2D Leray projection of the z-mean of h; z-varying content unchanged.
HorizontalField barotropic_project(const HorizontalField &h);

/// Gaussian-weighted random spectrum for initial data.
struct SpectrumParams {
  double amplitude = 1.0;
  /// Decay scale m0 in exp(-|m|^2 / m0^2), |m| in integer mode units.
  double m0 = 2.0;
};

struct InitialData {
  HorizontalField a_h;
  HorizontalField b_h;
  SpectralField a3;
  SpectralField b3;
};

/// Deterministic in `seed`. Horizontal fields are real, band-limited to the
/// 2/3 band, even in z, barotropically projected; verticals are their
/// hydrostatic reconstructions.
InitialData generate_initial_data(std::uint64_t seed, const SpectrumParams &spectrum, const GridPtr &grid);

/// Real, zero-mean random field with coefficients on |m_i| <= max_mode,
/// generated in a grid-independent order so the same seed gives the same
/// continuum function on any grid that resolves the band.
SpectralField random_band_limited(std::uint64_t seed, int max_mode, double m0, const GridPtr &grid);

} // namespace hlim
