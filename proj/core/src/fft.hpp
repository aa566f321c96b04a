#pragma once

// Thin RAII layer over FFTW. Planning is serialised through a process-wide
// mutex; execution on distinct plans is thread-safe.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace afgas::fft {

std::mutex& planner_mutex();

class Plan {
 public:
  Plan() = default;
  explicit Plan(fftw_plan p) : plan_(p) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  Plan(Plan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  Plan& operator=(Plan&& o) noexcept;
  ~Plan();

  void execute() const { fftw_execute(plan_); }
  explicit operator bool() const { return plan_ != nullptr; }

 private:
  fftw_plan plan_ = nullptr;
};

// Planner flags: FFTW_ESTIMATE keeps plan selection (and hence rounding)
// identical from run to run.
inline constexpr unsigned kFlags = FFTW_ESTIMATE;

inline fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

// 1D r2r transforms of length n along one axis of an interleaved complex
// nx-by-ny array (both real and imaginary parts), in place.
Plan r2r_axis(double* data, int nx, int ny, int axis, fftw_r2r_kind kind);
// 1D complex DFTs of length n along one axis of an nx-by-ny array, in place.
Plan dft_axis(std::complex<double>* data, int nx, int ny, int axis, int sign);
// 2D real-to-complex / complex-to-real on an (rows x cols) row-major array.
Plan r2c_2d(int rows, int cols, double* in, std::complex<double>* out);
Plan c2r_2d(int rows, int cols, std::complex<double>* in, double* out);
Plan dft_2d(int rows, int cols, std::complex<double>* data, int sign);

}  // namespace afgas::fft
