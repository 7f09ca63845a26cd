#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hlim/constraints.hpp"
#include "hlim/errors.hpp"

using namespace hlim;
using std::numbers::pi;

namespace {

GridPtr unit_grid(int n = 8) { return Grid::make({n, n, n, 1.0, 1.0}); }

SpectralField sample(const GridPtr &g, const std::function<double(double, double, double)> &f) {
  return forward_transform(RealField::from_function(g, f));
}

double max_diff(const SpectralField &a, const SpectralField &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

VectorState random_state(const GridPtr &g, std::uint64_t seed) {
  const int band = g->n1() / 3;
  return {random_band_limited(seed, band, 3.0, g), random_band_limited(seed + 1, band, 3.0, g),
          random_band_limited(seed + 2, band, 3.0, g)};
}

} // namespace

TEST_CASE("parity projection of single modes") {
  auto g = unit_grid();
  const SpectralField c = sample(g, [](double, double, double z) { return std::cos(pi * z); });
  const SpectralField s = sample(g, [](double, double, double z) { return std::sin(pi * z); });
  CHECK(max_diff(parity_project(c, ParityClass::even_in_z), c) < 1e-15);
  CHECK(parity_project(s, ParityClass::even_in_z).max_abs() < 1e-15);

  SpectralField one(g);
  one.at_mode(0, 0, 1) = 1.0;
  const SpectralField p = parity_project(one, ParityClass::even_in_z);
  CHECK(p.at_mode(0, 0, 1) == Complex(0.5));
  CHECK(p.at_mode(0, 0, -1) == Complex(0.5));

  CHECK(parity_defect(c, ParityClass::even_in_z) < 1e-15);
  CHECK(parity_defect(s, ParityClass::even_in_z) == doctest::Approx(1.0).epsilon(1e-13));
  auto g2 = Grid::make({8, 8, 8, 2.0, 3.0});
  const SpectralField s2 = sample(g2, [](double, double, double z) { return std::sin(pi * z); });
  CHECK(parity_defect(s2, ParityClass::even_in_z) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-13));
}

TEST_CASE("parity projection is an orthogonal idempotent split") {
  auto g = unit_grid(12);
  const SpectralField f = random_band_limited(5, 4, 4.0, g);
  const SpectralField e = parity_project(f, ParityClass::even_in_z);
  const SpectralField o = parity_project(f, ParityClass::odd_in_z);
  CHECK(max_diff(parity_project(e, ParityClass::even_in_z), e) < 1e-15);
  CHECK(std::abs(inner_product(f - e, e)) < 1e-12 * inner_product(f, f));
  CHECK(max_diff(e + o, f) < 1e-15);
  const double de = parity_defect(f, ParityClass::even_in_z), dodd = parity_defect(f, ParityClass::odd_in_z);
  CHECK(de * de + dodd * dodd == doctest::Approx(inner_product(f, f)).epsilon(1e-12));
}

TEST_CASE("d/dz swaps parity") {
  auto g = unit_grid(12);
  const SpectralField e = parity_project(random_band_limited(9, 4, 4.0, g), ParityClass::even_in_z);
  const SpectralField o = parity_project(random_band_limited(10, 4, 4.0, g), ParityClass::odd_in_z);
  CHECK(parity_defect(partial_derivative(e, Axis::z), ParityClass::odd_in_z) < 1e-13);
  CHECK(parity_defect(partial_derivative(o, Axis::z), ParityClass::even_in_z) < 1e-13);
}

TEST_CASE("anisotropic Leray projection") {
  auto g = Grid::make({12, 12, 12, 2 * pi, 2 * pi});
  for (double eps : {1.0, 0.2, 0.05}) {
    const VectorState s = random_state(g, 21);
    const VectorState p = anisotropic_leray_project(s, eps);
    const double scale = divergence(s).max_abs();
    CHECK(divergence_max_norm(p) < 1e-12 * scale);
    const VectorState pp = anisotropic_leray_project(p, eps);
    CHECK(max_diff(pp.h1, p.h1) < 1e-12);
    CHECK(max_diff(pp.v, p.v) < 1e-12);

    SpectralField phi = random_band_limited(40, 4, 3.0, g);
    VectorState grad{partial_derivative(phi, Axis::x), partial_derivative(phi, Axis::y),
                     (1.0 / (eps * eps)) * partial_derivative(phi, Axis::z)};
    const VectorState zero = anisotropic_leray_project(grad, eps);
    CHECK(std::max({zero.h1.max_abs(), zero.h2.max_abs(), zero.v.max_abs()}) < 1e-12 * grad.h1.max_abs());
  }
}

TEST_CASE("anisotropic Leray reduces to the 2D projection on z-independent data") {
  auto g = Grid::make({12, 12, 12, 2 * pi, 2 * pi});
  SpectralField h1 = random_band_limited(3, 4, 3.0, g), h2 = random_band_limited(4, 4, 3.0, g);
  for (SpectralField *f : {&h1, &h2})
    for (std::size_t i = 0; i < f->size(); ++i)
      if (i % 12 != 0)
        (*f)[i] = 0.0;
  const HorizontalField two_d = barotropic_project({h1, h2});
  for (double eps : {1.0, 0.1, 0.01}) {
    const VectorState p = anisotropic_leray_project({h1, h2, SpectralField(g)}, eps);
    CHECK(max_diff(p.h1, two_d.h1) < 1e-14);
    CHECK(max_diff(p.h2, two_d.h2) < 1e-14);
    CHECK(p.v.max_abs() < 1e-14);
  }
}

TEST_CASE("hydrostatic reconstruction of a single mode") {
  auto g = unit_grid(16);
  const HorizontalField h{sample(g, [](double x, double, double z) { return std::sin(2 * pi * x) * std::cos(pi * z); }),
                          SpectralField(g)};
  const RealField v = inverse_transform(hydrostatic_reconstruct(h));
  const RealField expect = RealField::from_function(
      g, [](double x, double, double z) { return -2.0 * std::cos(2 * pi * x) * std::sin(pi * z); });
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(std::abs(v[i] - expect[i]) < 1e-12);
}

TEST_CASE("hydrostatic reconstruction residual and trace") {
  auto g = Grid::make({12, 12, 12, 2 * pi, 2 * pi});
  const HorizontalField h = barotropic_project({parity_project(random_band_limited(7, 4, 3.0, g), ParityClass::even_in_z),
                                                parity_project(random_band_limited(8, 4, 3.0, g), ParityClass::even_in_z)});
  const SpectralField v = hydrostatic_reconstruct(h);
  const SpectralField div = horizontal_divergence(h);
  CHECK(max_diff(partial_derivative(v, Axis::z), -1.0 * div) < 1e-11 * div.max_abs());
  const RealField vr = inverse_transform(v);
  double trace = 0.0;
  for (int i1 = 0; i1 < 12; ++i1)
    for (int i2 = 0; i2 < 12; ++i2)
      trace = std::max(trace, std::abs(vr[g->index(i1, i2, 0)]));
  CHECK(trace < 1e-11 * vr.max_abs());
  CHECK(parity_defect(v, ParityClass::odd_in_z) < 1e-12);

  const HorizontalField divfree{partial_derivative(random_band_limited(2, 4, 3.0, g), Axis::y),
                                -1.0 * partial_derivative(random_band_limited(2, 4, 3.0, g), Axis::x)};
  CHECK(hydrostatic_reconstruct(divfree).max_abs() < 1e-13);
}

TEST_CASE("hydrostatic reconstruction inverts d/dz on odd zero-trace fields") {
  auto g = Grid::make({8, 8, 12, 1.0, 1.0});
  const SpectralField v = sample(g, [](double x, double y, double z) {
    return std::cos(2 * pi * x) * std::sin(pi * z) + std::sin(2 * pi * y) * std::sin(2 * pi * z);
  });
  // h = grad_H psi with Laplacian_H psi = -d_z v has div_H h = -d_z v.
  const SpectralField rhs = -1.0 * partial_derivative(v, Axis::z);
  const SpectralField psi = anisotropic_poisson_solve(rhs, 1e6);
  const HorizontalField h{partial_derivative(psi, Axis::x), partial_derivative(psi, Axis::y)};
  CHECK(max_diff(hydrostatic_reconstruct(h), v) < 1e-9);
}

TEST_CASE("hydrostatic reconstruction rejects a barotropic divergence") {
  auto g = unit_grid();
  const HorizontalField h{sample(g, [](double x, double, double) { return std::sin(2 * pi * x); }), SpectralField(g)};
  CHECK(barotropic_defect(h) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hydrostatic_reconstruct(h), ValidationError);
  const HorizontalField p = barotropic_project(h);
  CHECK(std::max(p.h1.max_abs(), p.h2.max_abs()) < 1e-15);
}

TEST_CASE("barotropic projection") {
  auto g = Grid::make({12, 12, 12, 2 * pi, 2 * pi});
  const HorizontalField h{random_band_limited(31, 4, 3.0, g), random_band_limited(32, 4, 3.0, g)};
  const HorizontalField p = barotropic_project(h);
  CHECK(barotropic_defect(p) < 1e-14);
  const HorizontalField pp = barotropic_project(p);
  CHECK(max_diff(pp.h1, p.h1) < 1e-15);
  SpectralField psi = random_band_limited(33, 4, 3.0, g);
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (i % 12 != 0)
      psi[i] = 0.0;
  const HorizontalField grad{partial_derivative(psi, Axis::x), partial_derivative(psi, Axis::y)};
  const HorizontalField zero = barotropic_project(grad);
  CHECK(std::max(zero.h1.max_abs(), zero.h2.max_abs()) < 1e-14);
}

TEST_CASE("seeded initial data") {
  auto g = Grid::make({16, 16, 16, 2 * pi, 2 * pi});
  const InitialData a = generate_initial_data(7, {}, g);
  const InitialData b = generate_initial_data(7, {}, g);
  CHECK(max_diff(a.a_h.h1, b.a_h.h1) == 0.0);
  CHECK(max_diff(a.b3, b.b3) == 0.0);
  const InitialData c = generate_initial_data(8, {}, g);
  CHECK(max_diff(a.a_h.h1, c.a_h.h1) > 0.0);

  for (const auto &[h, v] : {std::pair{&a.a_h, &a.a3}, std::pair{&a.b_h, &a.b3}}) {
    const VectorState s{h->h1, h->h2, *v};
    CHECK(divergence_max_norm(s) < 1e-13);
    CHECK(max_parity_defect(s) < 1e-13);
    CHECK(barotropic_defect(*h) < 1e-13);
    CHECK(h->h1.at_mode(0, 0, 0) == Complex(0.0));
    CHECK(dealias(h->h1).max_abs() == h->h1.max_abs());
  }
  const double rms = std::sqrt((inner_product(a.a_h.h1, a.a_h.h1) + inner_product(a.a_h.h2, a.a_h.h2)) /
                               (2.0 * g->spec().volume()));
  CHECK(rms == doctest::Approx(1.0).epsilon(1e-12));

  const InitialData zero = generate_initial_data(7, {0.0, 2.0}, g);
  CHECK(zero.a_h.h1.max_abs() == 0.0);
  CHECK(zero.b3.max_abs() == 0.0);
}

TEST_CASE("band-limited random fields are real and zero mean") {
  auto g = unit_grid(8);
  const SpectralField f = random_band_limited(1, 2, 2.0, g);
  CHECK(f.at_mode(0, 0, 0) == Complex(0.0));
  for (int i1 = 0; i1 < 8; ++i1)
    for (int i2 = 0; i2 < 8; ++i2)
      for (int i3 = 0; i3 < 8; ++i3)
        CHECK(std::abs(f[g->index(i1, i2, i3)] - std::conj(f[g->conjugate_index(i1, i2, i3)])) < 1e-15);
}
