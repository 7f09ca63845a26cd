#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hlim/state.hpp"

namespace hlim {

double norm_l2(const SpectralField &f);
/// H1^2 = L2^2 + sum over the three axes of ||d f||_2^2.
double norm_h1(const SpectralField &f);
/// ||grad_H f||_2^2
double grad_h_l2_squared(const SpectralField &f);

/// ||A~||^2 + ||B~||^2 + eps^2 ||A3||^2 + eps^2 ||B3||^2
double elsasser_energy(const ElsasserState &s, double eps);

/// Integrand of the dissipation term of the SHMHD energy inequality:
/// ||grad_H A~||^2 + eps^(alpha-2) ||d_z A~||^2 + eps^2 ||grad_H A3||^2
/// + eps^alpha ||d_z A3||^2, plus the same for B.
double elsasser_dissipation(const ElsasserState &s, double eps, double alpha);

double pehm_energy(const PehmState &s);
double pehm_dissipation(const PehmState &s);

struct DiagnosticsRecord {
  double t = 0.0;
  double e_l2 = 0.0;
  /// Running time integral of the dissipation integrand (without the 2).
  double dissipation_accum = 0.0;
  std::vector<double> h1_norms;
  double parity_defect = 0.0;
  double div_defect = 0.0;
};

DiagnosticsRecord shmhd_record(const ElsasserState &s, double eps, double alpha, double dissipation_accum);
DiagnosticsRecord pehm_record(const PehmState &s, double dissipation_accum);

struct LedgerReport {
  bool pass = true;
  /// max over samples of (lhs - rhs) / rhs, lhs = E(t) + 2 int D, rhs = E(0).
  double max_excess = 0.0;
  /// max over samples of |lhs - rhs| / rhs.
  double max_residual = 0.0;
  /// lhs(t) non-increasing up to the slack.
  bool monotone = true;
};

/// Verdict PASS iff E(t) + 2 int_0^t D <= E(0) (1 + slack) at every sample.
LedgerReport energy_ledger(std::span<const DiagnosticsRecord> records, double slack = 1e-4);

struct DiffRecord {
  double t = 0.0;
  double d_l2 = 0.0;
  /// Instantaneous difference dissipation integrand.
  double d_diss = 0.0;
  double d_diss_accum = 0.0;
  std::optional<double> d_h1;
};

/// Weighted difference norms between an SHMHD state and a PEHM state at
/// the same time. PEHM verticals are diagnosed hydrostatically first.
DiffRecord difference_metrics(const ElsasserState &s_eps, const PehmState &s_lim, double eps, double alpha,
                              bool h1_mode = false);

/// Accumulate d_diss_accum by the trapezoid rule along a sampled series.
void accumulate_difference_dissipation(std::vector<DiffRecord> &series);

struct TrilinearReport {
  double lhs = 0.0;
  double rhs_a = 0.0;
  double rhs_b = 0.0;
  double implied_c = 0.0;
};

/// Evaluates int_M (int |f| dz)(int |g h| dz) dx dy on the lattice and the
/// two constant-free bounds built from ||.||_2 and ||grad_H .||_2.
TrilinearReport trilinear_check(const SpectralField &f, const SpectralField &g, const SpectralField &h);

/// min(2, alpha - 2); alpha must exceed 2.
double gamma_of_alpha(double alpha);

} // namespace hlim
