#include "hlim/shmhd.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "hlim/errors.hpp"

namespace hlim {

void ShmhdParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ValidationError("shmhd: eps must be positive");
  if (!(alpha >= 2.0) || !std::isfinite(alpha))
    throw ValidationError("shmhd: alpha must be >= 2");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ValidationError("shmhd: dt must be positive");
  if (!std::isfinite(t_end))
    throw ValidationError("shmhd: t_end must be finite");
}

std::pair<VectorState, VectorState> elsasser_from_primitive(const VectorState &u, const VectorState &b) {
  require_same_grid(u.h1, b.h1, "elsasser_from_primitive");
  return {u + b, u - b};
}

std::pair<VectorState, VectorState> primitive_from_elsasser(const VectorState &a, const VectorState &b_els) {
  require_same_grid(a.h1, b_els.h1, "primitive_from_elsasser");
  return {0.5 * (a + b_els), 0.5 * (a - b_els)};
}

Tendency nonlinear_tendency(const ElsasserState &s, bool dealias_on) {
  const GridPtr &gp = s.grid();
  const Grid &g = *gp;
  auto [a1, a2] = inverse_transform_pair(s.a.h1, s.a.h2);
  auto [a3, b3] = inverse_transform_pair(s.a.v, s.b.v);
  auto [b1, b2] = inverse_transform_pair(s.b.h1, s.b.h2);
  const RealField *A[3] = {&a1, &a2, &a3};
  const RealField *B[3] = {&b1, &b2, &b3};

  const std::size_t n = g.size();
  double max_speed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sa = a1[i] * a1[i] + a2[i] * a2[i] + a3[i] * a3[i];
    const double sb = b1[i] * b1[i] + b2[i] * b2[i] + b3[i] * b3[i];
    max_speed = std::max(max_speed, std::max(sa, sb));
  }
  max_speed = std::sqrt(max_speed);
  if (!std::isfinite(max_speed) || max_speed > 1e150)
    throw SolverBlowup(0, max_speed, "non-finite or overflowing velocity in the nonlinear term");

  // prod[i][j] = B_j A_i
  std::vector<RealField> prod;
  prod.reserve(10);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      RealField p(gp);
      const RealField &ai = *A[i];
      const RealField &bj = *B[j];
      for (std::size_t q = 0; q < n; ++q)
        p[q] = bj[q] * ai[q];
      prod.push_back(std::move(p));
    }
  prod.emplace_back(gp);

  std::vector<SpectralField> hat(10);
  for (int k = 0; k < 10; k += 2) {
    auto pr = forward_transform_pair(prod[k], prod[k + 1]);
    hat[k] = std::move(pr.first);
    hat[k + 1] = std::move(pr.second);
  }
  if (dealias_on)
    for (int k = 0; k < 9; ++k)
      dealias_in_place(hat[k]);

  Tendency out{VectorState::zeros(gp), VectorState::zeros(gp), max_speed};
  SpectralField *ta[3] = {&out.ta.h1, &out.ta.h2, &out.ta.v};
  SpectralField *tb[3] = {&out.tb.h1, &out.tb.h2, &out.tb.v};
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      for (int i3 = 0; i3 < g.n3(); ++i3, ++idx) {
        const double k[3] = {g.kx()[i1], g.ky()[i2], g.kz()[i3]};
        for (int i = 0; i < 3; ++i) {
          Complex da{0.0, 0.0}, db{0.0, 0.0};
          for (int j = 0; j < 3; ++j) {
            da += k[j] * hat[3 * i + j][idx];
            db += k[j] * hat[3 * j + i][idx];
          }
          (*ta[i])[idx] = Complex{0.0, -1.0} * da;
          (*tb[i])[idx] = Complex{0.0, -1.0} * db;
        }
      }
  return out;
}

namespace {

DiffusionOperator diffusion_of(const ShmhdParams &p) { return {p.eps, p.alpha, VerticalWeight::full}; }

void for_each_component(VectorState &s, const std::function<void(SpectralField &)> &fn) {
  fn(s.h1);
  fn(s.h2);
  fn(s.v);
}

Tendency tendency_or_zero(const ElsasserState &s, const ShmhdParams &p) {
  if (p.nonlinear_on)
    return nonlinear_tendency(s, p.dealias_on);
  return {VectorState::zeros(s.grid()), VectorState::zeros(s.grid()), 0.0};
}

struct StepResult {
  ElsasserState state;
  double max_speed = 0.0;
};

StepResult imex_step(const ElsasserState &s, const ShmhdParams &p, double dt) {
  const DiffusionOperator op = diffusion_of(p);
  const Tendency n0 = tendency_or_zero(s, p);

  // Predictor: backward Euler over the full step.
  ElsasserState stage{s.a, s.b, s.t + dt};
  stage.a.axpy(dt, n0.ta);
  stage.b.axpy(dt, n0.tb);
  for_each_component(stage.a, [&](SpectralField &f) { apply_backward_euler(f, dt, op); });
  for_each_component(stage.b, [&](SpectralField &f) { apply_backward_euler(f, dt, op); });
  stage.a = anisotropic_leray_project(stage.a, p.eps);
  stage.b = anisotropic_leray_project(stage.b, p.eps);

  const Tendency n1 = tendency_or_zero(stage, p);

  // Corrector: Crank-Nicolson on diffusion, trapezoid on the nonlinear terms.
  ElsasserState next{s.a, s.b, s.t + dt};
  for_each_component(next.a, [&](SpectralField &f) { apply_half_explicit(f, dt, op); });
  for_each_component(next.b, [&](SpectralField &f) { apply_half_explicit(f, dt, op); });
  next.a.axpy(0.5 * dt, n0.ta).axpy(0.5 * dt, n1.ta);
  next.b.axpy(0.5 * dt, n0.tb).axpy(0.5 * dt, n1.tb);
  for_each_component(next.a, [&](SpectralField &f) { apply_half_implicit(f, dt, op); });
  for_each_component(next.b, [&](SpectralField &f) { apply_half_implicit(f, dt, op); });
  next.a = anisotropic_leray_project(next.a, p.eps);
  next.b = anisotropic_leray_project(next.b, p.eps);
  enforce_parity(next.a);
  enforce_parity(next.b);
  return {std::move(next), std::max(n0.max_speed, n1.max_speed)};
}

bool finite(const ElsasserState &s) {
  return s.a.h1.all_finite() && s.a.h2.all_finite() && s.a.v.all_finite() && s.b.h1.all_finite() &&
         s.b.h2.all_finite() && s.b.v.all_finite();
}

double max_norm(const ElsasserState &s) {
  return std::max({s.a.h1.max_abs(), s.a.h2.max_abs(), s.a.v.max_abs(), s.b.h1.max_abs(), s.b.h2.max_abs(),
                   s.b.v.max_abs()});
}

} // namespace

ElsasserState step(const ElsasserState &s, const ShmhdParams &p) {
  p.validate();
  auto r = imex_step(s, p, p.dt);
  if (!finite(r.state))
    throw SolverBlowup(1, max_norm(r.state), "shmhd: non-finite field after step 1");
  return std::move(r.state);
}

SpectralField pressure_diagnose(const ElsasserState &s, const ShmhdParams &p) {
  p.validate();
  const Tendency n = tendency_or_zero(s, p);
  return parity_project(leray_potential(n.ta, p.eps), ParityClass::even_in_z);
}

double cfl_number(const Grid &g, double dt, double max_speed) {
  return dt * max_speed / std::min({g.dx(), g.dy(), g.dz()});
}

StepPlan plan_steps(double t0, double t_end, double dt) {
  StepPlan plan;
  const double span = t_end - t0;
  if (!(span > 0.0))
    return plan;
  const double ratio = span / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    plan.steps = static_cast<std::size_t>(nearest);
    plan.last_dt = dt;
  } else {
    plan.steps = static_cast<std::size_t>(std::ceil(ratio));
    plan.last_dt = span - (plan.steps - 1) * dt;
  }
  return plan;
}

ShmhdSolver::ShmhdSolver(ElsasserState s0, ShmhdParams params) : state_(std::move(s0)), params_(params) {
  params_.validate();
}

void ShmhdSolver::advance(double dt) {
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
    os << "shmhd: non-finite field at step " << steps_ << " (t = " << r.state.t << ", max |coeff| = "
       << max_norm(r.state) << ")";
    throw SolverBlowup(steps_, max_norm(r.state), os.str());
  }
  const double cfl = cfl_number(state_.a.h1.grid(), dt, r.max_speed);
  if (cfl > 0.5) {
    if (cfl_warnings_ == 0)
      std::cerr << "warning: shmhd step " << steps_ << " CFL number " << cfl << " exceeds 0.5\n";
    ++cfl_warnings_;
  }
  ElsasserState mid{0.5 * (state_.a + r.state.a), 0.5 * (state_.b + r.state.b), 0.0};
  dissipation_accum_ += dt * elsasser_dissipation(mid, params_.eps, params_.alpha);
  state_ = std::move(r.state);
}

DiagnosticsRecord ShmhdSolver::record() const {
  return shmhd_record(state_, params_.eps, params_.alpha, dissipation_accum_);
}

ShmhdTrajectory run(const ElsasserState &s0, const ShmhdParams &p, int sample_every, const ShmhdObserver &observer) {
  p.validate();
  if (sample_every < 1)
    throw ValidationError("shmhd run: sample_every must be >= 1");
  ShmhdSolver solver(s0, p);
  ShmhdTrajectory traj;
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
  traj.cfl_warnings = solver.cfl_warnings();
  return traj;
}

} // namespace hlim
