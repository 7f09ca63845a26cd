#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hlim/diagnostics.hpp"

namespace hlim {

/// Scaled horizontal-viscous MHD parameters. Viscosity and magnetic
/// diffusivity are normalized to mu = k = 1 and nu = sigma = eps^alpha.
struct ShmhdParams {
  double eps = 0.1;
  double alpha = 3.0;
  double dt = 1e-3;
  double t_end = 0.5;
  bool dealias_on = true;
  /// Off turns the run into pure anisotropic diffusion.
  bool nonlinear_on = true;

  void validate() const;
};

/// a = u + b, b_els = u - b, componentwise.
std::pair<VectorState, VectorState> elsasser_from_primitive(const VectorState &u, const VectorState &b);
/// u = (a + b_els) / 2, b = (a - b_els) / 2.
std::pair<VectorState, VectorState> primitive_from_elsasser(const VectorState &a, const VectorState &b_els);

struct Tendency {
  VectorState ta;
  VectorState tb;
  /// Largest pointwise |A| or |B| seen while forming the products.
  double max_speed = 0.0;
};

/// ta = -(B . grad) A, tb = -(A . grad) B, formed pseudo-spectrally.
///
/// The products are assembled in flux form, -d_j (B_j A_i) and
/// -d_j (A_j B_i), which share one set of nine physical products and equal
/// the advective form whenever A and B are divergence-free (every solver
/// state is). Products are dealiased once when `dealias_on`.
Tendency nonlinear_tendency(const ElsasserState &s, bool dealias_on = true);

/// One IMEX step: Heun for the nonlinear terms, Crank-Nicolson for the
/// anisotropic diffusion, anisotropic Leray projection on every stage,
/// parity projection at the end.
ElsasserState step(const ElsasserState &s, const ShmhdParams &p);

/// Zero-mean pressure whose gradient the projection removes from the
/// instantaneous nonlinear tendency of a.
SpectralField pressure_diagnose(const ElsasserState &s, const ShmhdParams &p);

/// Stateful integrator: owns the state, counts steps and accumulates the
/// dissipation integral with the midpoint rule matched to Crank-Nicolson.
class ShmhdSolver {
public:
  ShmhdSolver(ElsasserState s0, ShmhdParams params);

  /// Advance by `dt` (defaults to params.dt). Throws SolverBlowup.
  void advance(double dt);
  void advance() { advance(params_.dt); }

  const ElsasserState &state() const noexcept { return state_; }
  const ShmhdParams &params() const noexcept { return params_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  double dissipation_accum() const noexcept { return dissipation_accum_; }
  std::size_t cfl_warnings() const noexcept { return cfl_warnings_; }
  DiagnosticsRecord record() const;

private:
  ElsasserState state_;
  ShmhdParams params_;
  std::size_t steps_ = 0;
  double dissipation_accum_ = 0.0;
  std::size_t cfl_warnings_ = 0;
};

struct ShmhdTrajectory {
  std::vector<DiagnosticsRecord> records;
  ElsasserState final_state;
  std::size_t cfl_warnings = 0;
};

using ShmhdObserver = std::function<void(const ElsasserState &, const DiagnosticsRecord &)>;

/// Step from s0.t to p.t_end, recording diagnostics at the start, every
/// `sample_every` steps and at the end. A shorter final step lands exactly on
/// t_end.
ShmhdTrajectory run(const ElsasserState &s0, const ShmhdParams &p, int sample_every,
                    const ShmhdObserver &observer = {});

/// Number of steps and the length of the last one to go from t0 to t_end.
struct StepPlan {
  std::size_t steps = 0;
  double last_dt = 0.0;
};
StepPlan plan_steps(double t0, double t_end, double dt);

/// dt * max speed / min spacing; a value above 0.5 triggers a CFL warning.
double cfl_number(const Grid &g, double dt, double max_speed);

} // namespace hlim
