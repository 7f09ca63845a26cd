#include "hlim/pehm.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "hlim/errors.hpp"
#include "hlim/shmhd.hpp"

namespace hlim {

void PehmParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ValidationError("pehm: dt must be positive");
  if (!std::isfinite(t_end))
    throw ValidationError("pehm: t_end must be finite");
}

std::pair<SpectralField, SpectralField> diagnose_vertical(const PehmState &s) {
  return {hydrostatic_reconstruct(s.a_h), hydrostatic_reconstruct(s.b_h)};
}

namespace {

// Zero-mean solution of Laplacian_H p = div_H <t>_z; only kz = 0 modes.
SpectralField surface_solve(const HorizontalField &t) {
  const Grid &g = t.h1.grid();
  SpectralField p(t.h1.grid_ptr());
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const double kx = g.kx()[i1], ky = g.ky()[i2];
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0)
        continue;
      const std::size_t idx = g.index(i1, i2, 0);
      const Complex div = Complex{0.0, 1.0} * (kx * t.h1[idx] + ky * t.h2[idx]);
      p[idx] = div / (-k2);
    }
  return p;
}

SurfacePressure pressure_from_tendencies(const HorizontalField &ta, const HorizontalField &tb) {
  SurfacePressure sp{surface_solve(ta), surface_solve(tb), 0.0};
  const double na = l2_norm(sp.p), nb = l2_norm(sp.p_from_b);
  const double scale = std::max(na, nb);
  if (scale > 0.0) {
    SpectralField d = sp.p;
    d -= sp.p_from_b;
    sp.discrepancy = l2_norm(d) / scale;
  }
  if (sp.discrepancy > 1e-6) {
    std::ostringstream os;
    os << "pehm: surface pressure sources disagree (relative discrepancy " << sp.discrepancy << ")";
    throw ConsistencyError(os.str());
  }
  return sp;
}

void subtract_gradient(HorizontalField &h, const SpectralField &p) {
  const Grid &g = p.grid();
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const std::size_t idx = g.index(i1, i2, 0);
      const Complex ip = Complex{0.0, 1.0} * p[idx];
      h.h1[idx] -= g.kx()[i1] * ip;
      h.h2[idx] -= g.ky()[i2] * ip;
    }
}

struct PehmTendency {
  HorizontalField ta;
  HorizontalField tb;
  double discrepancy = 0.0;
  double max_speed = 0.0;
};

PehmTendency pehm_tendency(const PehmState &s, const PehmParams &p) {
  const GridPtr &gp = s.grid();
  if (!p.nonlinear_on)
    return {{SpectralField(gp), SpectralField(gp)}, {SpectralField(gp), SpectralField(gp)}, 0.0, 0.0};
  const ElsasserState full = lift_to_elsasser(s);
  Tendency n = nonlinear_tendency(full, p.dealias_on);
  PehmTendency out{{std::move(n.ta.h1), std::move(n.ta.h2)}, {std::move(n.tb.h1), std::move(n.tb.h2)}, 0.0,
                   n.max_speed};
  const SurfacePressure sp = pressure_from_tendencies(out.ta, out.tb);
  subtract_gradient(out.ta, sp.p);
  subtract_gradient(out.tb, sp.p);
  out.discrepancy = sp.discrepancy;
  return out;
}

void for_each_component(PehmState &s, const std::function<void(SpectralField &)> &fn) {
  fn(s.a_h.h1);
  fn(s.a_h.h2);
  fn(s.b_h.h1);
  fn(s.b_h.h2);
}

const DiffusionOperator kHorizontal{1.0, 2.0, VerticalWeight::none};

struct StepResult {
  PehmState state;
  double discrepancy = 0.0;
  double max_speed = 0.0;
};

StepResult imex_step(const PehmState &s, const PehmParams &p, double dt) {
  const PehmTendency n0 = pehm_tendency(s, p);

  PehmState stage{s.a_h, s.b_h, s.t + dt};
  stage.a_h.axpy(dt, n0.ta);
  stage.b_h.axpy(dt, n0.tb);
  for_each_component(stage, [&](SpectralField &f) { apply_backward_euler(f, dt, kHorizontal); });
  stage.a_h = barotropic_project(stage.a_h);
  stage.b_h = barotropic_project(stage.b_h);

  const PehmTendency n1 = pehm_tendency(stage, p);

  PehmState next{s.a_h, s.b_h, s.t + dt};
  for_each_component(next, [&](SpectralField &f) { apply_half_explicit(f, dt, kHorizontal); });
  next.a_h.axpy(0.5 * dt, n0.ta).axpy(0.5 * dt, n1.ta);
  next.b_h.axpy(0.5 * dt, n0.tb).axpy(0.5 * dt, n1.tb);
  for_each_component(next, [&](SpectralField &f) { apply_half_implicit(f, dt, kHorizontal); });
  next.a_h = barotropic_project(next.a_h);
  next.b_h = barotropic_project(next.b_h);
  for_each_component(next, [](SpectralField &f) { f = parity_project(f, ParityClass::even_in_z); });
  return {std::move(next), std::max(n0.discrepancy, n1.discrepancy), std::max(n0.max_speed, n1.max_speed)};
}

bool finite(const PehmState &s) {
  return s.a_h.h1.all_finite() && s.a_h.h2.all_finite() && s.b_h.h1.all_finite() && s.b_h.h2.all_finite();
}

double max_norm(const PehmState &s) {
  return std::max({s.a_h.h1.max_abs(), s.a_h.h2.max_abs(), s.b_h.h1.max_abs(), s.b_h.h2.max_abs()});
}

} // namespace

SurfacePressure surface_pressure_solve(const PehmState &s, bool dealias_on) {
  const Tendency n = nonlinear_tendency(lift_to_elsasser(s), dealias_on);
  return pressure_from_tendencies({n.ta.h1, n.ta.h2}, {n.tb.h1, n.tb.h2});
}

PehmState step(const PehmState &s, const PehmParams &p) {
  p.validate();
  auto r = imex_step(s, p, p.dt);
  if (!finite(r.state))
    throw SolverBlowup(1, max_norm(r.state), "pehm: non-finite field after step 1");
  return std::move(r.state);
}

PehmSolver::PehmSolver(PehmState s0, PehmParams params) : state_(std::move(s0)), params_(params) {
  params_.validate();
}

void PehmSolver::advance(double dt) {
  ++steps_;
  StepResult r;
  try {
    r = imex_step(state_, params_, dt);
  } catch (const SolverBlowup &e) {
    std::ostringstream os;
    os << e.what() << " at step " << steps_ << " (t = " << state_.t + dt << ")";
    throw SolverBlowup(steps_, e.max_norm(), os.str());
  }
  if (!finite(r.state)) {
    std::ostringstream os;
    os << "pehm: non-finite field at step " << steps_ << " (t = " << r.state.t << ", max |coeff| = "
       << max_norm(r.state) << ")";
    throw SolverBlowup(steps_, max_norm(r.state), os.str());
  }
  max_discrepancy_ = std::max(max_discrepancy_, r.discrepancy);
  const double cfl = cfl_number(state_.a_h.h1.grid(), dt, r.max_speed);
  if (cfl > 0.5) {
    if (cfl_warnings_ == 0)
      std::cerr << "warning: pehm step " << steps_ << " CFL number " << cfl << " exceeds 0.5\n";
    ++cfl_warnings_;
  }
  PehmState mid{state_.a_h, state_.b_h, 0.0};
  mid.a_h += r.state.a_h;
  mid.b_h += r.state.b_h;
  mid.a_h *= 0.5;
  mid.b_h *= 0.5;
  dissipation_accum_ += dt * pehm_dissipation(mid);
  state_ = std::move(r.state);
}

DiagnosticsRecord PehmSolver::record() const { return pehm_record(state_, dissipation_accum_); }

PehmTrajectory run(const PehmState &s0, const PehmParams &p, int sample_every, const PehmObserver &observer) {
  p.validate();
  if (sample_every < 1)
    throw ValidationError("pehm run: sample_every must be >= 1");
  PehmSolver solver(s0, p);
  PehmTrajectory traj;
  auto sample = [&]() {
    traj.records.push_back(solver.record());
    if (observer)
      observer(solver.state(), traj.records.back());
  };
  sample();
  const StepPlan plan = plan_steps(s0.t, p.t_end, p.dt);
  for (std::size_t k = 1; k <= plan.steps; ++k) {
    solver.advance(k == plan.steps ? plan.last_dt : p.dt);
    if (k % static_cast<std::size_t>(sample_every) == 0 || k == plan.steps)
      sample();
  }
  traj.final_state = solver.state();
  traj.max_pressure_discrepancy = solver.max_pressure_discrepancy();
  traj.cfl_warnings = solver.cfl_warnings();
  return traj;
}

} // namespace hlim
