#pragma once

#include <complex>
#include <span>
#include <vector>

namespace revfilt {

using Complex = std::complex<double>;

/// Dense H x W complex grid, row-major.
struct ComplexGrid {
  int height = 0;
  int width = 0;
  std::vector<Complex> values;

  ComplexGrid() = default;
  ComplexGrid(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w) {}

  Complex& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
  const Complex& at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Unnormalized forward 2D DFT of a real plane.
ComplexGrid fft2(std::span<const double> plane, int height, int width);

/// Inverse 2D DFT including the 1/(H*W) factor; returns the real part.
std::vector<double> ifft2_real(const ComplexGrid& spectrum);

}  // namespace revfilt
