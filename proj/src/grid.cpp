#include "hlim/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hlim/errors.hpp"

namespace hlim {

namespace {

// The FFTW planner is not thread-safe; plan execution is.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

void fill_axis(int n, double k0, std::vector<int> &modes, std::vector<double> &k, std::vector<char> &keep) {
  modes.resize(n);
  k.resize(n);
  keep.resize(n);
  for (int i = 0; i < n; ++i) {
    const int m = Grid::signed_mode(i, n);
    modes[i] = m;
    k[i] = (m == -n / 2) ? 0.0 : k0 * m;
    keep[i] = (3 * std::abs(m) <= n) ? 1 : 0;
  }
}

} // namespace

void GridSpec::validate() const {
  auto check_n = [](const char *name, int n) {
    if (n < 4 || n % 2 != 0) {
      std::ostringstream os;
      os << "grid: " << name << " = " << n << " must be even and >= 4";
      throw ValidationError(os.str());
    }
  };
  check_n("n1", n1);
  check_n("n2", n2);
  check_n("n3", n3);
  if (!(l1 > 0.0) || !std::isfinite(l1))
    throw ValidationError("grid: l1 must be positive and finite");
  if (!(l2 > 0.0) || !std::isfinite(l2))
    throw ValidationError("grid: l2 must be positive and finite");
}

Grid::Grid(const GridSpec &spec) : spec_(spec) {
  spec_.validate();
  const double two_pi = 2.0 * std::numbers::pi;
  fill_axis(spec_.n1, two_pi / spec_.l1, m1_, kx_, keep1_);
  fill_axis(spec_.n2, two_pi / spec_.l2, m2_, ky_, keep2_);
  fill_axis(spec_.n3, std::numbers::pi, m3_, kz_, keep3_);

  CoeffVector scratch(size());
  auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_ = fftw_plan_dft_3d(spec_.n1, spec_.n2, spec_.n3, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_3d(spec_.n1, spec_.n2, spec_.n3, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_ || !backward_)
    throw std::runtime_error("grid: FFTW planning failed");
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_)
    fftw_destroy_plan(forward_);
  if (backward_)
    fftw_destroy_plan(backward_);
}

std::shared_ptr<const Grid> Grid::make(const GridSpec &spec) { return std::make_shared<const Grid>(spec); }

void Grid::fft_forward(Complex *data) const {
  auto *buf = reinterpret_cast<fftw_complex *>(data);
  fftw_execute_dft(forward_, buf, buf);
}

void Grid::fft_backward(Complex *data) const {
  auto *buf = reinterpret_cast<fftw_complex *>(data);
  fftw_execute_dft(backward_, buf, buf);
}

bool same_grid(const Grid &a, const Grid &b) noexcept { return &a == &b || a.spec() == b.spec(); }

} // namespace hlim
