#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hlim/diagnostics.hpp"

namespace hlim {

struct PehmParams {
  double dt = 1e-3;
  double t_end = 0.5;
  bool dealias_on = true;
  bool nonlinear_on = true;

  void validate() const;
};

/// (A3, B3) reconstructed from the horizontal fields.
std::pair<SpectralField, SpectralField> diagnose_vertical(const PehmState &s);

struct SurfacePressure {
  /// Applied pressure, from the vertical mean of the A~ equation.
  SpectralField p;
  /// Monitor: the same solve sourced by the B~ equation.
  SpectralField p_from_b;
  /// ||p - p_from_b|| / max(||p||, ||p_from_b||), 0 when both vanish.
  double discrepancy = 0.0;
};

/// Solve Laplacian_H p = -div_H <(B . grad) A~>_z with zero mean. Throws
/// ConsistencyError if the B~-sourced pressure disagrees by more than 1e-6.
SurfacePressure surface_pressure_solve(const PehmState &s, bool dealias_on = true);

/// One step: Heun on -(B . grad) A~ and -(A . grad) B~ with verticals
/// re-diagnosed per stage and the surface pressure removed per stage,
/// Crank-Nicolson on the horizontal Laplacian only, then barotropic and
/// parity projection.
PehmState step(const PehmState &s, const PehmParams &p);

class PehmSolver {
public:
  PehmSolver(PehmState s0, PehmParams params);

  void advance(double dt);
  void advance() { advance(params_.dt); }

  const PehmState &state() const noexcept { return state_; }
  const PehmParams &params() const noexcept { return params_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  double dissipation_accum() const noexcept { return dissipation_accum_; }
  double max_pressure_discrepancy() const noexcept { return max_discrepancy_; }
  std::size_t cfl_warnings() const noexcept { return cfl_warnings_; }
  DiagnosticsRecord record() const;

private:
  PehmState state_;
  PehmParams params_;
  std::size_t steps_ = 0;
  double dissipation_accum_ = 0.0;
  double max_discrepancy_ = 0.0;
  std::size_t cfl_warnings_ = 0;
};

struct PehmTrajectory {
  std::vector<DiagnosticsRecord> records;
  PehmState final_state;
  double max_pressure_discrepancy = 0.0;
  std::size_t cfl_warnings = 0;
};

using PehmObserver = std::function<void(const PehmState &, const DiagnosticsRecord &)>;

PehmTrajectory run(const PehmState &s0, const PehmParams &p, int sample_every, const PehmObserver &observer = {});

} // namespace hlim
