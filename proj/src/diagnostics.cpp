#include "hlim/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hlim/errors.hpp"

namespace hlim {

ElsasserState lift_to_elsasser(const PehmState &s) {
  ElsasserState out;
  out.a = {s.a_h.h1, s.a_h.h2, hydrostatic_reconstruct(s.a_h)};
  out.b = {s.b_h.h1, s.b_h.h2, hydrostatic_reconstruct(s.b_h)};
  out.t = s.t;
  return out;
}

double norm_l2(const SpectralField &f) { return l2_norm(f); }

double grad_h_l2_squared(const SpectralField &f) {
  return derivative_l2_squared(f, Axis::x) + derivative_l2_squared(f, Axis::y);
}

double norm_h1(const SpectralField &f) {
  const double l2 = l2_norm(f);
  return std::sqrt(l2 * l2 + grad_h_l2_squared(f) + derivative_l2_squared(f, Axis::z));
}

namespace {

double sq(double x) { return x * x; }

double horizontal_energy(const SpectralField &f) { return sq(l2_norm(f)); }

// ||grad_H f||^2 + w ||d_z f||^2
double anisotropic_gradient(const SpectralField &f, double vertical_weight) {
  return grad_h_l2_squared(f) + vertical_weight * derivative_l2_squared(f, Axis::z);
}

double vector_dissipation(const VectorState &s, double eps, double alpha) {
  const double w = std::pow(eps, alpha - 2.0);
  return anisotropic_gradient(s.h1, w) + anisotropic_gradient(s.h2, w) +
         eps * eps * grad_h_l2_squared(s.v) + std::pow(eps, alpha) * derivative_l2_squared(s.v, Axis::z);
}

double h1_squared(const SpectralField &f) { return sq(norm_h1(f)); }

} // namespace

double elsasser_energy(const ElsasserState &s, double eps) {
  return horizontal_energy(s.a.h1) + horizontal_energy(s.a.h2) + horizontal_energy(s.b.h1) +
         horizontal_energy(s.b.h2) + eps * eps * (horizontal_energy(s.a.v) + horizontal_energy(s.b.v));
}

double elsasser_dissipation(const ElsasserState &s, double eps, double alpha) {
  return vector_dissipation(s.a, eps, alpha) + vector_dissipation(s.b, eps, alpha);
}

double pehm_energy(const PehmState &s) {
  return horizontal_energy(s.a_h.h1) + horizontal_energy(s.a_h.h2) + horizontal_energy(s.b_h.h1) +
         horizontal_energy(s.b_h.h2);
}

double pehm_dissipation(const PehmState &s) {
  return grad_h_l2_squared(s.a_h.h1) + grad_h_l2_squared(s.a_h.h2) + grad_h_l2_squared(s.b_h.h1) +
         grad_h_l2_squared(s.b_h.h2);
}

DiagnosticsRecord shmhd_record(const ElsasserState &s, double eps, double alpha, double dissipation_accum) {
  (void)alpha;
  DiagnosticsRecord r;
  r.t = s.t;
  r.e_l2 = elsasser_energy(s, eps);
  r.dissipation_accum = dissipation_accum;
  r.h1_norms = {norm_h1(s.a.h1), norm_h1(s.a.h2), norm_h1(s.a.v), norm_h1(s.b.h1), norm_h1(s.b.h2), norm_h1(s.b.v)};
  r.parity_defect = std::max(max_parity_defect(s.a), max_parity_defect(s.b));
  r.div_defect = std::max(divergence_max_norm(s.a), divergence_max_norm(s.b));
  return r;
}

DiagnosticsRecord pehm_record(const PehmState &s, double dissipation_accum) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.e_l2 = pehm_energy(s);
  r.dissipation_accum = dissipation_accum;
  r.h1_norms = {norm_h1(s.a_h.h1), norm_h1(s.a_h.h2), norm_h1(s.b_h.h1), norm_h1(s.b_h.h2)};
  const ParityClass even = ParityClass::even_in_z;
  r.parity_defect = std::max({parity_defect(s.a_h.h1, even), parity_defect(s.a_h.h2, even),
                              parity_defect(s.b_h.h1, even), parity_defect(s.b_h.h2, even)});
  // The reconstruction only exists when the barotropic constraint holds, so
  // the divergence monitor here is the barotropic defect.
  r.div_defect = std::max(barotropic_defect(s.a_h), barotropic_defect(s.b_h));
  return r;
}

LedgerReport energy_ledger(std::span<const DiagnosticsRecord> records, double slack) {
  LedgerReport rep;
  if (records.empty())
    return rep;
  const double rhs = records.front().e_l2;
  const double tiny = std::numeric_limits<double>::min();
  double prev = rhs;
  for (const auto &r : records) {
    const double lhs = r.e_l2 + 2.0 * r.dissipation_accum;
    if (lhs > rhs * (1.0 + slack) + tiny)
      rep.pass = false;
    if (lhs > prev + slack * rhs + tiny)
      rep.monotone = false;
    if (rhs > 0.0) {
      rep.max_excess = std::max(rep.max_excess, (lhs - rhs) / rhs);
      rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / rhs);
    }
    prev = lhs;
  }
  return rep;
}

DiffRecord difference_metrics(const ElsasserState &s_eps, const PehmState &s_lim, double eps, double alpha,
                              bool h1_mode) {
  if (!(eps > 0.0))
    throw ValidationError("difference_metrics: eps must be positive");
  require_same_grid(s_eps.a.h1, s_lim.a_h.h1, "difference_metrics");
  if (std::abs(s_eps.t - s_lim.t) > 1e-12 * std::max(1.0, std::abs(s_eps.t))) {
    std::ostringstream os;
    os << "difference_metrics: time mismatch (" << s_eps.t << " vs " << s_lim.t << ")";
    throw ValidationError(os.str());
  }
  const ElsasserState lim = lift_to_elsasser(s_lim);
  const VectorState u = s_eps.a - lim.a;
  const VectorState v = s_eps.b - lim.b;

  DiffRecord r;
  r.t = s_eps.t;
  const double e2 = eps * eps;
  r.d_l2 = horizontal_energy(u.h1) + horizontal_energy(u.h2) + horizontal_energy(v.h1) + horizontal_energy(v.h2) +
           e2 * (horizontal_energy(u.v) + horizontal_energy(v.v));
  r.d_diss = vector_dissipation(u, eps, alpha) + vector_dissipation(v, eps, alpha);
  if (h1_mode)
    r.d_h1 = h1_squared(u.h1) + h1_squared(u.h2) + h1_squared(v.h1) + h1_squared(v.h2) +
             e2 * (h1_squared(u.v) + h1_squared(v.v));
  return r;
}

void accumulate_difference_dissipation(std::vector<DiffRecord> &series) {
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0)
      acc += 0.5 * (series[i].t - series[i - 1].t) * (series[i].d_diss + series[i - 1].d_diss);
    series[i].d_diss_accum = acc;
  }
}

TrilinearReport trilinear_check(const SpectralField &f, const SpectralField &g, const SpectralField &h) {
  require_same_grid(f, g, "trilinear_check");
  require_same_grid(f, h, "trilinear_check");
  const Grid &grid = f.grid();
  const RealField fr = inverse_transform(f);
  auto [gr, hr] = inverse_transform_pair(g, h);

  const double dz = grid.dz();
  double lhs = 0.0;
  for (int i1 = 0; i1 < grid.n1(); ++i1)
    for (int i2 = 0; i2 < grid.n2(); ++i2) {
      double int_f = 0.0, int_gh = 0.0;
      for (int i3 = 0; i3 < grid.n3(); ++i3) {
        const std::size_t idx = grid.index(i1, i2, i3);
        int_f += std::abs(fr[idx]);
        int_gh += std::abs(gr[idx] * hr[idx]);
      }
      lhs += (int_f * dz) * (int_gh * dz);
    }
  lhs *= grid.dx() * grid.dy();

  auto factor = [](const SpectralField &q) {
    const double n = l2_norm(q);
    return std::sqrt(n) * (std::sqrt(n) + std::sqrt(std::sqrt(grad_h_l2_squared(q))));
  };
  const double nf = l2_norm(f), ng_f = factor(g), nh = l2_norm(h);

  TrilinearReport rep;
  rep.lhs = lhs;
  rep.rhs_a = factor(f) * nh * ng_f;
  rep.rhs_b = nf * ng_f * factor(h);
  const double rhs = std::min(rep.rhs_a, rep.rhs_b);
  if (lhs == 0.0)
    rep.implied_c = 0.0;
  else
    rep.implied_c = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
  return rep;
}

double gamma_of_alpha(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    std::ostringstream os;
    os << "gamma_of_alpha: alpha = " << alpha << " outside (2, inf)";
    throw ValidationError(os.str());
  }
  return std::min(2.0, alpha - 2.0);
}

} // namespace hlim
