#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace hlim {

using Complex = std::complex<double>;

enum class Axis { x, y, z };

/// Allocator backed by fftw_malloc so every coefficient buffer has the
/// alignment FFTW planned for.
template <class T> struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U> FftwAllocator(const FftwAllocator<U> &) noexcept {}
  T *allocate(std::size_t n) {
    void *p = fftw_malloc(n * sizeof(T));
    if (!p && n != 0)
      throw std::bad_alloc();
    return static_cast<T *>(p);
  }
  void deallocate(T *p, std::size_t) noexcept { fftw_free(p); }
  template <class U> bool operator==(const FftwAllocator<U> &) const noexcept { return true; }
};

using CoeffVector = std::vector<Complex, FftwAllocator<Complex>>;
using RealVector = std::vector<double>;

/// Discretization parameters of the periodic box (0,l1) x (0,l2) x (-1,1).
struct GridSpec {
  int n1 = 32;
  int n2 = 32;
  int n3 = 32;
  double l1 = 6.283185307179586;
  double l2 = 6.283185307179586;

  static constexpr double lz = 2.0;

  /// Throws ValidationError unless every n_i is even and >= 4 and both
  /// lengths are positive and finite.
  void validate() const;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) * static_cast<std::size_t>(n3);
  }
  double volume() const noexcept { return l1 * l2 * lz; }

  friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// Immutable grid: wavenumber tables, dealias masks and FFT plans.
///
/// Storage is row-major over (i1, i2, i3) with every axis in FFT order
/// (0, 1, ..., n/2-1, -n/2, ..., -1). The Nyquist index of each axis carries
/// a zero derivative wavenumber, so every differential operator (first or
/// second order) annihilates Nyquist content and real fields stay real.
class Grid {
public:
  explicit Grid(const GridSpec &spec);
  ~Grid();
  Grid(const Grid &) = delete;
  Grid &operator=(const Grid &) = delete;

  static std::shared_ptr<const Grid> make(const GridSpec &spec);

  const GridSpec &spec() const noexcept { return spec_; }
  int n1() const noexcept { return spec_.n1; }
  int n2() const noexcept { return spec_.n2; }
  int n3() const noexcept { return spec_.n3; }
  std::size_t size() const noexcept { return spec_.size(); }

  std::size_t index(int i1, int i2, int i3) const noexcept {
    return (static_cast<std::size_t>(i1) * static_cast<std::size_t>(spec_.n2) + static_cast<std::size_t>(i2)) *
               static_cast<std::size_t>(spec_.n3) +
           static_cast<std::size_t>(i3);
  }

  /// Storage index of the mode with signed indices (m1, m2, m3).
  std::size_t mode_index(int m1, int m2, int m3) const noexcept {
    return index(wrap(m1, spec_.n1), wrap(m2, spec_.n2), wrap(m3, spec_.n3));
  }

  /// Storage index of -m (the conjugate partner).
  std::size_t conjugate_index(int i1, int i2, int i3) const noexcept {
    return index((spec_.n1 - i1) % spec_.n1, (spec_.n2 - i2) % spec_.n2, (spec_.n3 - i3) % spec_.n3);
  }

  /// Storage index of the z-mirrored mode (m1, m2, -m3).
  std::size_t z_mirror_index(int i1, int i2, int i3) const noexcept {
    return index(i1, i2, (spec_.n3 - i3) % spec_.n3);
  }

  static int signed_mode(int i, int n) noexcept { return i < n / 2 ? i : i - n; }
  static int wrap(int m, int n) noexcept { return ((m % n) + n) % n; }

  const std::vector<int> &m1() const noexcept { return m1_; }
  const std::vector<int> &m2() const noexcept { return m2_; }
  const std::vector<int> &m3() const noexcept { return m3_; }

  /// Derivative wavenumbers (zero at the Nyquist index).
  const std::vector<double> &kx() const noexcept { return kx_; }
  const std::vector<double> &ky() const noexcept { return ky_; }
  const std::vector<double> &kz() const noexcept { return kz_; }
  const std::vector<double> &k(Axis a) const noexcept {
    return a == Axis::x ? kx_ : (a == Axis::y ? ky_ : kz_);
  }

  /// True where |m_i| <= n_i/3 on the given axis.
  const std::vector<char> &keep1() const noexcept { return keep1_; }
  const std::vector<char> &keep2() const noexcept { return keep2_; }
  const std::vector<char> &keep3() const noexcept { return keep3_; }

  double dx() const noexcept { return spec_.l1 / spec_.n1; }
  double dy() const noexcept { return spec_.l2 / spec_.n2; }
  double dz() const noexcept { return GridSpec::lz / spec_.n3; }

  /// Unnormalized in-place transforms on a buffer of size() coefficients.
  /// `forward` uses exp(-i k x) (analysis), `backward` exp(+i k x).
  void fft_forward(Complex *data) const;
  void fft_backward(Complex *data) const;

private:
  GridSpec spec_;
  std::vector<int> m1_, m2_, m3_;
  std::vector<double> kx_, ky_, kz_;
  std::vector<char> keep1_, keep2_, keep3_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

bool same_grid(const Grid &a, const Grid &b) noexcept;

} // namespace hlim
