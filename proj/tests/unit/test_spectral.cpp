#include <doctest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "hlim/errors.hpp"
#include "hlim/spectral.hpp"

using namespace hlim;
using std::numbers::pi;

namespace {

GridPtr unit_grid(int n1, int n2, int n3) { return Grid::make({n1, n2, n3, 1.0, 1.0}); }

RealField random_real(const GridPtr &g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  RealField f(g);
  for (auto &x : f.values())
    x = d(rng);
  return f;
}

double max_diff(const SpectralField &a, const SpectralField &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("grid spec validation") {
  CHECK_NOTHROW(GridSpec{}.validate());
  CHECK_THROWS_AS((GridSpec{0, 8, 8, 1.0, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS((GridSpec{8, 7, 8, 1.0, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS((GridSpec{8, 8, 8, -1.0, 1.0}).validate(), ValidationError);
  CHECK_THROWS_AS((GridSpec{8, 8, 8, 1.0, std::nan("")}).validate(), ValidationError);
}

TEST_CASE("wavenumbers follow FFT order with Nyquist zeroed") {
  auto g = Grid::make({8, 8, 8, 2.0, 1.0});
  CHECK(g->kx()[1] == doctest::Approx(pi));
  CHECK(g->kx()[7] == doctest::Approx(-pi));
  CHECK(g->kx()[4] == 0.0);
  CHECK(g->ky()[1] == doctest::Approx(2 * pi));
  CHECK(g->kz()[1] == doctest::Approx(pi));
  CHECK(g->kz()[6] == doctest::Approx(-2 * pi));
  CHECK(Grid::signed_mode(5, 8) == -3);
}

TEST_CASE("constant field transforms to its mean") {
  auto g = unit_grid(8, 8, 8);
  const SpectralField c = forward_transform(RealField::from_function(g, [](double, double, double) { return 2.5; }));
  CHECK(c.at_mode(0, 0, 0).real() == doctest::Approx(2.5));

  SpectralField rest = c;
  rest.at_mode(0, 0, 0) = 0.0;
  CHECK(rest.max_abs() < 1e-15);
}

TEST_CASE("sin(2 pi x / L1) has coefficients -+i/2 at m1 = +-1") {
  auto g = Grid::make({16, 8, 8, 3.0, 1.0});
  const SpectralField c =
      forward_transform(RealField::from_function(g, [](double x, double, double) { return std::sin(2 * pi * x / 3.0); }));
  CHECK(std::abs(c.at_mode(1, 0, 0) - Complex(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(c.at_mode(-1, 0, 0) - Complex(0.0, 0.5)) < 1e-14);
  SpectralField rest = c;
  rest.at_mode(1, 0, 0) = 0.0;
  rest.at_mode(-1, 0, 0) = 0.0;
  CHECK(rest.max_abs() < 1e-14);
}

TEST_CASE("round trip and Parseval on random fields") {
  for (auto spec : {GridSpec{8, 8, 8, 1.0, 1.0}, GridSpec{16, 12, 10, 2 * pi, 3.0}}) {
    auto g = Grid::make(spec);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const RealField f = random_real(g, seed);
      const SpectralField c = forward_transform(f);
      const RealField back = inverse_transform(c);
      double err = 0.0, sum = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        err = std::max(err, std::abs(back[i] - f[i]));
        sum += f[i] * f[i];
      }
      CHECK(err < 1e-12 * f.max_abs());
      const double lattice = std::sqrt(sum * spec.volume() / static_cast<double>(f.size()));
      CHECK(std::abs(l2_norm(c) - lattice) < 1e-12 * lattice);
    }
  }
}

TEST_CASE("pair transforms agree with single transforms") {
  auto g = unit_grid(8, 6, 4);
  const RealField f = random_real(g, 3), h = random_real(g, 4);
  auto [cf, ch] = forward_transform_pair(f, h);
  CHECK(max_diff(cf, forward_transform(f)) < 1e-14);
  CHECK(max_diff(ch, forward_transform(h)) < 1e-14);
  auto [rf, rh] = inverse_transform_pair(cf, ch);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(rf[i] == doctest::Approx(f[i]).epsilon(1e-12));
    CHECK(rh[i] == doctest::Approx(h[i]).epsilon(1e-12));
  }
}

TEST_CASE("non-finite lattice values are rejected with their location") {
  auto g = unit_grid(4, 4, 4);
  RealField f(g);
  f[g->index(1, 2, 3)] = std::nan("");
  try {
    (void)forward_transform(f);
    FAIL("expected ValidationError");
  } catch (const ValidationError &e) {
    CHECK(std::string(e.what()).find("(1, 2, 3)") != std::string::npos);
  }
}

TEST_CASE("derivatives of single modes") {
  auto g = unit_grid(16, 8, 16);
  const SpectralField s =
      forward_transform(RealField::from_function(g, [](double x, double, double) { return std::sin(2 * pi * x); }));
  const RealField ds = inverse_transform(partial_derivative(s, Axis::x));
  const RealField expect =
      RealField::from_function(g, [](double x, double, double) { return 2 * pi * std::cos(2 * pi * x); });
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(ds[i] == doctest::Approx(expect[i]).epsilon(1e-12).scale(1.0));

  const SpectralField c =
      forward_transform(RealField::from_function(g, [](double, double, double z) { return std::cos(pi * z); }));
  const RealField dc = inverse_transform(partial_derivative(c, Axis::z));
  const RealField expect_z =
      RealField::from_function(g, [](double, double, double z) { return -pi * std::sin(pi * z); });
  for (std::size_t i = 0; i < dc.size(); ++i)
    CHECK(std::abs(dc[i] - expect_z[i]) < 1e-12);

  const SpectralField k =
      forward_transform(RealField::from_function(g, [](double, double, double) { return 4.0; }));
  CHECK(partial_derivative(k, Axis::z).max_abs() < 1e-15);
}

TEST_CASE("dealiasing") {
  auto g = unit_grid(12, 12, 12);
  SpectralField f(g);
  f.at_mode(4, -4, 2) = 1.0;
  CHECK(max_diff(dealias(f), f) == 0.0);
  SpectralField top(g);
  top.at_mode(6, 0, 0) = 1.0;
  top.at_mode(5, 0, 0) = 1.0;
  CHECK(dealias(top).max_abs() == 0.0);
  const SpectralField r = forward_transform(random_real(g, 9));
  const SpectralField d = dealias(r);
  CHECK(max_diff(dealias(d), d) == 0.0);
  SpectralField inplace = r;
  dealias_in_place(inplace);
  CHECK(max_diff(inplace, d) == 0.0);
}

TEST_CASE("anisotropic Poisson single mode") {
  auto g = unit_grid(8, 8, 8);
  SpectralField rhs(g);
  rhs.at_mode(1, 0, 1) = 1.0;
  const SpectralField phi = anisotropic_poisson_solve(rhs, 0.1);
  CHECK(phi.at_mode(1, 0, 1).real() == doctest::Approx(-1.0 / (104.0 * pi * pi)).epsilon(1e-13));
  CHECK(phi.at_mode(1, 0, 1).real() == doctest::Approx(-9.744e-4).epsilon(1e-3));
  CHECK(anisotropic_poisson_solve(SpectralField(g), 0.3).max_abs() == 0.0);
}

TEST_CASE("anisotropic Poisson residual on random zero-mean rhs") {
  auto g = Grid::make({16, 16, 16, 2 * pi, 2 * pi});
  for (double eps : {1.0, 0.1, 0.01}) {
    SpectralField rhs = dealias(forward_transform(random_real(g, 11)));
    rhs.at_mode(0, 0, 0) = 0.0;
    const SpectralField phi = anisotropic_poisson_solve(rhs, eps);
    CHECK(max_diff(anisotropic_laplacian(phi, eps), rhs) < 1e-11 * rhs.max_abs());
    CHECK(phi.at_mode(0, 0, 0) == Complex(0.0));
  }
}

TEST_CASE("anisotropic Poisson rejects incompatible sources") {
  auto g = unit_grid(4, 4, 4);
  SpectralField rhs(g);
  rhs.at_mode(0, 0, 0) = 1.0;
  rhs.at_mode(1, 0, 0) = 1.0;
  CHECK_THROWS_AS(anisotropic_poisson_solve(rhs, 0.1), ValidationError);
  rhs.at_mode(0, 0, 0) = 1e-14;
  CHECK_NOTHROW(anisotropic_poisson_solve(rhs, 0.1));
  CHECK_THROWS_AS(anisotropic_poisson_solve(rhs, 0.0), ValidationError);
}

TEST_CASE("implicit diffusion step") {
  auto g = unit_grid(8, 8, 8);
  const SpectralField r = forward_transform(random_real(g, 5));
  CHECK(max_diff(implicit_diffusion_step(r, 0.0, 0.1, 3.0, VerticalWeight::full), r) == 0.0);

  SpectralField f(g);
  f.at_mode(1, 0, 0) = 1.0;
  const SpectralField out = implicit_diffusion_step(f, 0.1, 0.5, 3.0, VerticalWeight::full);
  CHECK(out.at_mode(1, 0, 0).real() == doctest::Approx(1.0 / (1.0 + 0.1 * 4 * pi * pi)).epsilon(1e-14));

  SpectralField v(g);
  v.at_mode(1, 0, 2) = 1.0;
  const double kh2 = 4 * pi * pi, kz2 = 4 * pi * pi;
  const double eps = 0.2;
  CHECK(implicit_diffusion_step(v, 0.1, eps, 3.0, VerticalWeight::full).at_mode(1, 0, 2).real() ==
        doctest::Approx(1.0 / (1.0 + 0.1 * (kh2 + eps * kz2))).epsilon(1e-14));
  CHECK(implicit_diffusion_step(v, 0.1, eps, 2.0, VerticalWeight::full).at_mode(1, 0, 2).real() ==
        doctest::Approx(1.0 / (1.0 + 0.1 * (kh2 + kz2))).epsilon(1e-14));
  CHECK(implicit_diffusion_step(v, 0.1, eps, 3.0, VerticalWeight::none).at_mode(1, 0, 2).real() ==
        doctest::Approx(1.0 / (1.0 + 0.1 * kh2)).epsilon(1e-14));
  CHECK_THROWS_AS(implicit_diffusion_step(v, -0.1, eps, 3.0, VerticalWeight::full), ValidationError);
  CHECK_THROWS_AS(implicit_diffusion_step(v, 0.1, eps, 1.5, VerticalWeight::full), ValidationError);
}

TEST_CASE("Crank-Nicolson factor composes from its halves") {
  auto g = unit_grid(8, 8, 8);
  const DiffusionOperator op{0.3, 4.0, VerticalWeight::full};
  const SpectralField r = forward_transform(random_real(g, 6));
  SpectralField a = r, b = r;
  apply_crank_nicolson(a, 0.01, op);
  apply_half_explicit(b, 0.01, op);
  apply_half_implicit(b, 0.01, op);
  CHECK(max_diff(a, b) < 1e-15);
  SpectralField one(g);
  one.at_mode(0, 1, 1) = 1.0;
  apply_crank_nicolson(one, 0.01, op);
  const double rate = 4 * pi * pi + 0.09 * pi * pi;
  CHECK(one.at_mode(0, 1, 1).real() == doctest::Approx((1 - 0.005 * rate) / (1 + 0.005 * rate)).epsilon(1e-14));
}

TEST_CASE("norms of simple fields") {
  auto g = Grid::make({8, 8, 8, 2.0, 3.0});
  const SpectralField c =
      forward_transform(RealField::from_function(g, [](double, double, double) { return -1.5; }));
  CHECK(l2_norm(c) == doctest::Approx(1.5 * std::sqrt(2 * 2.0 * 3.0)).epsilon(1e-14));
  const SpectralField s =
      forward_transform(RealField::from_function(g, [](double x, double, double) { return std::sin(pi * x); }));
  CHECK(l2_norm(s) * l2_norm(s) == doctest::Approx(2.0 * 3.0).epsilon(1e-13));
  CHECK(derivative_l2_squared(s, Axis::x) == doctest::Approx(pi * pi * 6.0).epsilon(1e-13));
  CHECK(derivative_l2_squared(s, Axis::y) < 1e-25);
  CHECK(inner_product(s, c) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("snapshot encoding") {
  auto g = Grid::make({6, 4, 4, 1.5, 2.5});
  SpectralField f = forward_transform(random_real(g, 12));
  const auto bytes = encode_snapshot(f);
  REQUIRE(bytes.size() == 8 + 12 + 16 + 16 * f.size());
  CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "HLIMFLD1");
  CHECK(bytes[8] == 6);
  CHECK(bytes[12] == 4);
  std::uint64_t l1bits = 0;
  for (int i = 0; i < 8; ++i)
    l1bits |= static_cast<std::uint64_t>(bytes[20 + i]) << (8 * i);
  CHECK(std::bit_cast<double>(l1bits) == 1.5);
  std::uint64_t re1 = 0;
  for (int i = 0; i < 8; ++i)
    re1 |= static_cast<std::uint64_t>(bytes[36 + 16 + i]) << (8 * i);
  CHECK(std::bit_cast<double>(re1) == f[1].real());

  const SpectralField back = decode_snapshot(bytes);
  CHECK(back.grid().spec() == g->spec());
  CHECK(max_diff(back, f) == 0.0);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad), ValidationError);
  auto shortb = bytes;
  shortb.pop_back();
  CHECK_THROWS_AS(decode_snapshot(shortb), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "hlim_snapshot_test.fld";
  write_snapshot(path, f);
  CHECK(max_diff(read_snapshot(path), f) == 0.0);
  std::filesystem::remove(path);
}
