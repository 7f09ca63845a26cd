#include <algorithm>
#include <cmath>
#include <random>

#include "hlim/sweep.hpp"

namespace hlim {

bool VerifyReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.pass; });
}

namespace {

struct Check {
  std::string name;
  double threshold;
  double worst = 0.0;

  void observe(double v) {
    if (std::isnan(v) || v > worst)
      worst = std::isnan(v) ? v : std::max(worst, v);
  }
  CheckResult result() const { return {name, worst, threshold, worst < threshold}; }
};

double rel(double num, double den) { return den > 0.0 ? num / den : num; }

RealField random_lattice(std::uint64_t seed, const GridPtr &grid) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField f(grid);
  for (auto &x : f.values())
    x = u(rng);
  return f;
}

double lattice_l2(const RealField &f) {
  double s = 0.0;
  for (double x : f.values())
    s += x * x;
  return std::sqrt(s * f.grid().spec().volume() / static_cast<double>(f.size()));
}

double max_diff(const RealField &a, const RealField &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_coeff_diff(const SpectralField &a, const SpectralField &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Largest |v| on the z = 0 plane.
double surface_trace(const SpectralField &v) {
  const RealField r = inverse_transform(v);
  const Grid &g = v.grid();
  double m = 0.0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      m = std::max(m, std::abs(r[g.index(i1, i2, 0)]));
  return m;
}

} // namespace

VerifyReport run_constraint_battery(const GridSpec &spec, const SpectrumParams &spectrum, int states,
                                    std::uint64_t first_seed) {
  spec.validate();
  const GridPtr grid = Grid::make(spec);
  const int band = std::min({spec.n1, spec.n2, spec.n3}) / 3;

  Check round_trip{"transform round-trip (rel. max)", 1e-12};
  Check parseval{"Parseval (rel.)", 1e-12};
  Check dealias_idem{"dealias idempotence (max)", 1e-15};
  Check poisson{"anisotropic Poisson residual (rel. max)", 1e-11};
  Check leray_div{"Leray projection divergence (rel. max)", 1e-10};
  Check leray_idem{"Leray projection idempotence (rel. max)", 1e-12};
  Check init_div{"initial-state divergence (max)", 1e-10};
  Check parity{"initial-state parity defect", 1e-10};
  Check parity_idem{"parity projection idempotence and orthogonality", 1e-12};
  Check deriv_parity{"d/dz maps even to odd (parity defect, rel.)", 1e-12};
  Check trace{"hydrostatic trace v(z=0) (rel. max)", 1e-11};
  Check baro{"barotropic defect", 1e-10};
  Check snapshot{"snapshot round-trip (max)", 1e-15};

  for (int k = 0; k < states; ++k) {
    const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(k);

    const RealField r = random_lattice(seed, grid);
    const SpectralField rc = forward_transform(r);
    round_trip.observe(rel(max_diff(inverse_transform(rc), r), r.max_abs()));
    parseval.observe(rel(std::abs(l2_norm(rc) - lattice_l2(r)), lattice_l2(r)));
    const SpectralField d1 = dealias(rc);
    dealias_idem.observe(max_coeff_diff(dealias(d1), d1));

    VectorState g{random_band_limited(4 * seed + 101, band, 4.0, grid),
                  random_band_limited(4 * seed + 102, band, 4.0, grid),
                  random_band_limited(4 * seed + 103, band, 4.0, grid)};
    const SpectralField rhs = divergence(g);
    for (double eps : {1.0, 0.1, 0.025}) {
      const SpectralField phi = anisotropic_poisson_solve(rhs, eps);
      poisson.observe(rel(max_coeff_diff(anisotropic_laplacian(phi, eps), rhs), rhs.max_abs()));
      const VectorState pg = anisotropic_leray_project(g, eps);
      leray_div.observe(rel(divergence_max_norm(pg), rhs.max_abs()));
      const VectorState ppg = anisotropic_leray_project(pg, eps);
      const double scale = std::max({pg.h1.max_abs(), pg.h2.max_abs(), pg.v.max_abs()});
      leray_idem.observe(rel(std::max({max_coeff_diff(ppg.h1, pg.h1), max_coeff_diff(ppg.h2, pg.h2),
                                       max_coeff_diff(ppg.v, pg.v)}),
                             scale));
    }

    for (ParityClass cls : {ParityClass::even_in_z, ParityClass::odd_in_z}) {
      const SpectralField p = parity_project(rc, cls);
      SpectralField resid = rc;
      resid -= p;
      const double n = l2_norm(rc);
      parity_idem.observe(rel(max_coeff_diff(parity_project(p, cls), p), p.max_abs()));
      parity_idem.observe(rel(std::abs(inner_product(resid, p)), n * n));
    }
    const SpectralField even = parity_project(rc, ParityClass::even_in_z);
    const SpectralField dz = partial_derivative(even, Axis::z);
    deriv_parity.observe(rel(parity_defect(dz, ParityClass::odd_in_z), l2_norm(dz)));

    const InitialData init = generate_initial_data(seed, spectrum, grid);
    const double amp = std::max(spectrum.amplitude, 1e-300);
    for (const auto *pair : {&init.a_h, &init.b_h}) {
      const SpectralField &v = pair == &init.a_h ? init.a3 : init.b3;
      const VectorState s{pair->h1, pair->h2, v};
      init_div.observe(divergence_max_norm(s) / amp);
      parity.observe(max_parity_defect(s) / amp);
      baro.observe(barotropic_defect(*pair));
      const SpectralField rebuilt = hydrostatic_reconstruct(*pair);
      trace.observe(rel(surface_trace(rebuilt), std::max(inverse_transform(rebuilt).max_abs(), 1e-300)));
      snapshot.observe(max_coeff_diff(decode_snapshot(encode_snapshot(v)), v));
    }
  }

  VerifyReport report;
  report.states = states;
  for (const Check *c : {&round_trip, &parseval, &dealias_idem, &poisson, &leray_div, &leray_idem, &init_div,
                         &parity, &parity_idem, &deriv_parity, &trace, &baro, &snapshot})
    report.checks.push_back(c->result());
  return report;
}

} // namespace hlim
