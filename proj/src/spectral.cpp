#include "hlim/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hlim/errors.hpp"

namespace hlim {

namespace {

void check_finite(const RealField &f) {
  const Grid &g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      const std::size_t plane = static_cast<std::size_t>(g.n2()) * g.n3();
      std::ostringstream os;
      os << "forward_transform: non-finite value " << f[i] << " at lattice index (" << i / plane << ", "
         << (i / g.n3()) % g.n2() << ", " << i % g.n3() << ")";
      throw ValidationError(os.str());
    }
  }
}

template <class Fn> void for_each_mode(const Grid &g, Fn &&fn) {
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      for (int i3 = 0; i3 < g.n3(); ++i3, ++idx)
        fn(idx, i1, i2, i3);
}

double rate(const Grid &g, int i1, int i2, int i3, double vcoef) {
  const double kx = g.kx()[i1], ky = g.ky()[i2], kz = g.kz()[i3];
  return kx * kx + ky * ky + vcoef * kz * kz;
}

template <class Mult> void apply_rate_multiplier(SpectralField &f, const DiffusionOperator &op, Mult &&mult) {
  op.validate();
  const double vcoef = op.vertical_coefficient();
  const Grid &g = f.grid();
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) { f[idx] *= mult(rate(g, i1, i2, i3, vcoef)); });
}

} // namespace

SpectralField forward_transform(const RealField &f) {
  check_finite(f);
  const Grid &g = f.grid();
  CoeffVector buf(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    buf[i] = Complex{f[i], 0.0};
  g.fft_forward(buf.data());
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (auto &c : buf)
    c *= inv_n;
  return SpectralField(f.grid_ptr(), std::move(buf));
}

RealField inverse_transform(const SpectralField &f) {
  const Grid &g = f.grid();
  CoeffVector buf = f.coeffs();
  g.fft_backward(buf.data());
  RealField out(f.grid_ptr());
  for (std::size_t i = 0; i < buf.size(); ++i)
    out[i] = buf[i].real();
  return out;
}

std::pair<SpectralField, SpectralField> forward_transform_pair(const RealField &f, const RealField &g_field) {
  check_finite(f);
  check_finite(g_field);
  if (!same_grid(f.grid(), g_field.grid()))
    throw ValidationError("forward_transform_pair: grid mismatch");
  const Grid &g = f.grid();
  CoeffVector buf(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    buf[i] = Complex{f[i], g_field[i]};
  g.fft_forward(buf.data());
  const double half_inv_n = 0.5 / static_cast<double>(g.size());
  SpectralField a(f.grid_ptr()), b(f.grid_ptr());
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const Complex h = buf[idx];
    const Complex hc = std::conj(buf[g.conjugate_index(i1, i2, i3)]);
    a[idx] = (h + hc) * half_inv_n;
    b[idx] = Complex{0.0, -1.0} * (h - hc) * half_inv_n;
  });
  return {std::move(a), std::move(b)};
}

std::pair<RealField, RealField> inverse_transform_pair(const SpectralField &f, const SpectralField &g_field) {
  require_same_grid(f, g_field, "inverse_transform_pair");
  const Grid &g = f.grid();
  CoeffVector buf(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    buf[i] = f[i] + Complex{0.0, 1.0} * g_field[i];
  g.fft_backward(buf.data());
  RealField a(f.grid_ptr()), b(f.grid_ptr());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    a[i] = buf[i].real();
    b[i] = buf[i].imag();
  }
  return {std::move(a), std::move(b)};
}

SpectralField partial_derivative(const SpectralField &f, Axis axis) {
  const Grid &g = f.grid();
  SpectralField out(f.grid_ptr());
  const auto &k = g.k(axis);
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const int i = axis == Axis::x ? i1 : (axis == Axis::y ? i2 : i3);
    out[idx] = Complex{0.0, k[i]} * f[idx];
  });
  return out;
}

void dealias_in_place(SpectralField &f) {
  const Grid &g = f.grid();
  const auto &k1 = g.keep1();
  const auto &k2 = g.keep2();
  const auto &k3 = g.keep3();
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    if (!(k1[i1] && k2[i2] && k3[i3]))
      f[idx] = Complex{0.0, 0.0};
  });
}

SpectralField dealias(const SpectralField &f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

SpectralField anisotropic_poisson_solve(const SpectralField &rhs, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ValidationError("anisotropic_poisson_solve: eps must be positive");
  double norm2 = 0.0;
  for (const auto &c : rhs.coeffs())
    norm2 += std::norm(c);
  const double mean = std::abs(rhs[0]);
  if (mean > 1e-10 * std::sqrt(norm2)) {
    std::ostringstream os;
    os << "anisotropic_poisson_solve: incompatible source, mean coefficient " << mean << " (norm "
       << std::sqrt(norm2) << ")";
    throw ValidationError(os.str());
  }
  const Grid &g = rhs.grid();
  const double inv_eps2 = 1.0 / (eps * eps);
  SpectralField phi(rhs.grid_ptr());
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const double kx = g.kx()[i1], ky = g.ky()[i2], kz = g.kz()[i3];
    const double denom = -(kx * kx + ky * ky) - kz * kz * inv_eps2;
    phi[idx] = denom != 0.0 ? rhs[idx] / denom : Complex{0.0, 0.0};
  });
  return phi;
}

SpectralField anisotropic_laplacian(const SpectralField &f, double eps) {
  const Grid &g = f.grid();
  const double inv_eps2 = 1.0 / (eps * eps);
  SpectralField out(f.grid_ptr());
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const double kx = g.kx()[i1], ky = g.ky()[i2], kz = g.kz()[i3];
    out[idx] = f[idx] * (-(kx * kx + ky * ky) - kz * kz * inv_eps2);
  });
  return out;
}

void DiffusionOperator::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ValidationError("diffusion: eps must be positive");
  if (!(alpha >= 2.0) || !std::isfinite(alpha))
    throw ValidationError("diffusion: alpha must be >= 2");
}

double DiffusionOperator::vertical_coefficient() const {
  return vertical == VerticalWeight::full ? std::pow(eps, alpha - 2.0) : 0.0;
}

SpectralField implicit_diffusion_step(const SpectralField &f, double dt, double eps, double alpha,
                                      VerticalWeight vertical_weight) {
  SpectralField out = f;
  apply_backward_euler(out, dt, DiffusionOperator{eps, alpha, vertical_weight});
  return out;
}

void apply_backward_euler(SpectralField &f, double dt, const DiffusionOperator &op) {
  if (!(dt >= 0.0))
    throw ValidationError("diffusion: dt must be non-negative");
  apply_rate_multiplier(f, op, [dt](double r) { return 1.0 / (1.0 + dt * r); });
}

void apply_crank_nicolson(SpectralField &f, double dt, const DiffusionOperator &op) {
  apply_rate_multiplier(f, op, [dt](double r) { return (1.0 - 0.5 * dt * r) / (1.0 + 0.5 * dt * r); });
}

void apply_half_implicit(SpectralField &f, double dt, const DiffusionOperator &op) {
  apply_rate_multiplier(f, op, [dt](double r) { return 1.0 / (1.0 + 0.5 * dt * r); });
}

void apply_half_explicit(SpectralField &f, double dt, const DiffusionOperator &op) {
  apply_rate_multiplier(f, op, [dt](double r) { return 1.0 - 0.5 * dt * r; });
}

double inner_product(const SpectralField &f, const SpectralField &g) {
  require_same_grid(f, g, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += f[i].real() * g[i].real() + f[i].imag() * g[i].imag();
  return s * f.grid().spec().volume();
}

double l2_norm(const SpectralField &f) {
  double s = 0.0;
  for (const auto &c : f.coeffs())
    s += std::norm(c);
  return std::sqrt(s * f.grid().spec().volume());
}

double derivative_l2_squared(const SpectralField &f, Axis axis) {
  const Grid &g = f.grid();
  const auto &k = g.k(axis);
  double s = 0.0;
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const int i = axis == Axis::x ? i1 : (axis == Axis::y ? i2 : i3);
    s += k[i] * k[i] * std::norm(f[idx]);
  });
  return s * g.spec().volume();
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T> void put(std::vector<std::uint8_t> &out, T v) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <class T> T get(const std::vector<std::uint8_t> &in, std::size_t &pos) {
  if (pos + sizeof(T) > in.size())
    throw ValidationError("snapshot: truncated file");
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

} // namespace

std::vector<std::uint8_t> encode_snapshot(const SpectralField &f) {
  const GridSpec &s = f.grid().spec();
  std::vector<std::uint8_t> out(kSnapshotMagic, kSnapshotMagic + 8);
  out.reserve(8 + 12 + 16 + 16 * f.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.n1));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.n2));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.n3));
  put<double>(out, s.l1);
  put<double>(out, s.l2);
  for (const auto &c : f.coeffs()) {
    put<double>(out, c.real());
    put<double>(out, c.imag());
  }
  return out;
}

SpectralField decode_snapshot(const std::vector<std::uint8_t> &bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSnapshotMagic, 8) != 0)
    throw ValidationError("snapshot: bad magic");
  std::size_t pos = 8;
  GridSpec spec;
  spec.n1 = static_cast<int>(get<std::uint32_t>(bytes, pos));
  spec.n2 = static_cast<int>(get<std::uint32_t>(bytes, pos));
  spec.n3 = static_cast<int>(get<std::uint32_t>(bytes, pos));
  spec.l1 = get<double>(bytes, pos);
  spec.l2 = get<double>(bytes, pos);
  spec.validate();
  if (bytes.size() != pos + 16 * spec.size())
    throw ValidationError("snapshot: payload size does not match header");
  auto grid = Grid::make(spec);
  CoeffVector coeffs(spec.size());
  for (auto &c : coeffs) {
    const double re = get<double>(bytes, pos);
    const double im = get<double>(bytes, pos);
    c = Complex{re, im};
  }
  return SpectralField(std::move(grid), std::move(coeffs));
}

void write_snapshot(const std::filesystem::path &path, const SpectralField &f) {
  const auto bytes = encode_snapshot(f);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error("snapshot: cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os)
    throw std::runtime_error("snapshot: write failed for " + path.string());
}

SpectralField read_snapshot(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw ValidationError("snapshot: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

} // namespace hlim
