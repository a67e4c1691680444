#include "revfilt/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "revfilt/error.hpp"

namespace revfilt {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!ptr) throw Error(ErrorKind::IoFailure, "fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

void transform(ComplexGrid& grid, int sign) {
  const std::size_t n = grid.values.size();
  FftwBuffer buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.ptr[i][0] = grid.values[i].real();
    buf.ptr[i][1] = grid.values[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(grid.height, grid.width, buf.ptr, buf.ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (std::size_t i = 0; i < n; ++i) grid.values[i] = Complex(buf.ptr[i][0], buf.ptr[i][1]);
}

}  // namespace

ComplexGrid fft2(std::span<const double> plane, int height, int width) {
  ComplexGrid grid(height, width);
  if (plane.size() != grid.values.size()) throw Error(ErrorKind::DimensionMismatch, "fft2 size");
  for (std::size_t i = 0; i < plane.size(); ++i) grid.values[i] = plane[i];
  transform(grid, FFTW_FORWARD);
  return grid;
}

std::vector<double> ifft2_real(const ComplexGrid& spectrum) {
  ComplexGrid grid = spectrum;
  transform(grid, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.values.size());
  std::vector<double> out(grid.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid.values[i].real() * scale;
  return out;
}

}  // namespace revfilt
