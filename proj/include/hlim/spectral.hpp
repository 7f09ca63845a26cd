#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hlim/field.hpp"

namespace hlim {

/// Real lattice values to Fourier coefficients, normalized so that
/// coeff(0) is the lattice mean. Rejects non-finite input, naming the first
/// offending lattice index.
SpectralField forward_transform(const RealField &f);

/// Coefficients back to lattice values. The input is assumed to be
/// conjugate-symmetric; only the real part of the synthesis is kept.
RealField inverse_transform(const SpectralField &f);

/// Two real fields through one complex transform.
std::pair<SpectralField, SpectralField> forward_transform_pair(const RealField &f, const RealField &g);
std::pair<RealField, RealField> inverse_transform_pair(const SpectralField &f, const SpectralField &g);

/// Multiply coefficients by i k_axis.
SpectralField partial_derivative(const SpectralField &f, Axis axis);

/// 2/3 rule: zero every coefficient with |m_i| > n_i/3 on any axis.
SpectralField dealias(const SpectralField &f);
void dealias_in_place(SpectralField &f);

/// Solve (Laplacian_H + eps^-2 d_zz) phi = rhs with zero-mean gauge.
/// Throws ValidationError if rhs has a mean above 1e-10 of its norm.
SpectralField anisotropic_poisson_solve(const SpectralField &rhs, double eps);

/// Apply (Laplacian_H + eps^-2 d_zz) spectrally; used to check residuals.
SpectralField anisotropic_laplacian(const SpectralField &f, double eps);

enum class VerticalWeight { full, none };

/// Diffusion rate of one mode: kx^2 + ky^2 (+ eps^(alpha-2) kz^2 when the
/// vertical term is on).
struct DiffusionOperator {
  double eps = 1.0;
  double alpha = 2.0;
  VerticalWeight vertical = VerticalWeight::full;

  void validate() const;
  double vertical_coefficient() const;
};

/// Backward-Euler diffusion sub-step: divide each coefficient by
/// 1 + dt (kx^2 + ky^2 + eps^(alpha-2) kz^2). `dt == 0` is the identity.
SpectralField implicit_diffusion_step(const SpectralField &f, double dt, double eps, double alpha,
                                      VerticalWeight vertical_weight);

/// In-place variants used by the solvers.
void apply_backward_euler(SpectralField &f, double dt, const DiffusionOperator &op);
/// Crank-Nicolson: multiply by (1 - dt/2 rate) / (1 + dt/2 rate).
void apply_crank_nicolson(SpectralField &f, double dt, const DiffusionOperator &op);
/// result = (1 + dt/2 rate)^-1 f
void apply_half_implicit(SpectralField &f, double dt, const DiffusionOperator &op);
/// result = (1 - dt/2 rate) f
void apply_half_explicit(SpectralField &f, double dt, const DiffusionOperator &op);

/// Volume-weighted L2 inner product over the box, by Parseval.
double inner_product(const SpectralField &f, const SpectralField &g);
double l2_norm(const SpectralField &f);
/// ||d_axis f||_2^2 without forming the derivative.
double derivative_l2_squared(const SpectralField &f, Axis axis);

// Snapshot files: 8-byte magic, u32 n1 n2 n3, f64 l1 l2, then n1*n2*n3
// interleaved (re, im) f64 in storage order. Little-endian throughout.
inline constexpr char kSnapshotMagic[9] = "HLIMFLD1";

std::vector<std::uint8_t> encode_snapshot(const SpectralField &f);
SpectralField decode_snapshot(const std::vector<std::uint8_t> &bytes);
void write_snapshot(const std::filesystem::path &path, const SpectralField &f);
SpectralField read_snapshot(const std::filesystem::path &path);

} // namespace hlim
