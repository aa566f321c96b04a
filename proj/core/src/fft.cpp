#include "fft.hpp"

#include <stdexcept>

namespace afgas::fft {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Plan& Plan::operator=(Plan&& o) noexcept {
  if (this != &o) {
    if (plan_) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    plan_ = o.plan_;
    o.plan_ = nullptr;
  }
  return *this;
}

Plan::~Plan() {
  if (plan_) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
}

namespace {

Plan checked(fftw_plan p) {
  if (!p) throw std::runtime_error("FFTW planner failed");
  return Plan(p);
}

}  // namespace

Plan r2r_axis(double* data, int nx, int ny, int axis, fftw_r2r_kind kind) {
  // Interleaved complex storage: element (ix, iy, part) lives at 2*(iy*nx+ix)+part.
  fftw_iodim dim{};
  fftw_iodim howmany[2]{};
  if (axis == 0) {
    dim = {nx, 2, 2};
    howmany[0] = {ny, 2 * nx, 2 * nx};
  } else {
    dim = {ny, 2 * nx, 2 * nx};
    howmany[0] = {nx, 2, 2};
  }
  howmany[1] = {2, 1, 1};
  std::lock_guard lock(planner_mutex());
  return checked(fftw_plan_guru_r2r(1, &dim, 2, howmany, data, data, &kind, kFlags));
}

Plan dft_axis(std::complex<double>* data, int nx, int ny, int axis, int sign) {
  std::lock_guard lock(planner_mutex());
  if (axis == 0) {
    int n = nx;
    return checked(fftw_plan_many_dft(1, &n, ny, as_fftw(data), nullptr, 1, nx, as_fftw(data),
                                      nullptr, 1, nx, sign, kFlags));
  }
  int n = ny;
  return checked(fftw_plan_many_dft(1, &n, nx, as_fftw(data), nullptr, nx, 1, as_fftw(data),
                                    nullptr, nx, 1, sign, kFlags));
}

Plan r2c_2d(int rows, int cols, double* in, std::complex<double>* out) {
  std::lock_guard lock(planner_mutex());
  return checked(fftw_plan_dft_r2c_2d(rows, cols, in, as_fftw(out), kFlags));
}

Plan c2r_2d(int rows, int cols, std::complex<double>* in, double* out) {
  std::lock_guard lock(planner_mutex());
  return checked(fftw_plan_dft_c2r_2d(rows, cols, as_fftw(in), out, kFlags));
}

Plan dft_2d(int rows, int cols, std::complex<double>* data, int sign) {
  std::lock_guard lock(planner_mutex());
  return checked(fftw_plan_dft_2d(rows, cols, as_fftw(data), as_fftw(data), sign, kFlags));
}

}  // namespace afgas::fft
