#pragma once

#include <optional>
#include <vector>

namespace revfilt {

/// Odd-sized 2D coefficient grid, row-major, origin at the center element.
class Kernel {
 public:
  Kernel(int height, int width, std::vector<double> coeffs);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int radius_y() const noexcept { return height_ / 2; }
  int radius_x() const noexcept { return width_ / 2; }

  /// Coefficient at offset (dy, dx) from the center.
  double at(int dy, int dx) const noexcept {
    return coeffs_[static_cast<std::size_t>(dy + radius_y()) * width_ + (dx + radius_x())];
  }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  double sum() const noexcept;

 private:
  int height_;
  int width_;
  std::vector<double> coeffs_;
};

Kernel identity_kernel();

/// Sampled Gaussian normalized to sum 1. The default side is 2*ceil(2*sigma)+1.
Kernel gaussian_kernel(double sigma, std::optional<int> size = std::nullopt);

/// n x n box average.
Kernel box_kernel(int n);

/// Pillbox of radius r on a (2*ceil(r)+1)^2 grid; each tap is the area of
/// its pixel covered by the disk, normalized to sum 1.
Kernel disk_kernel(double radius);

/// Anti-aliased line segment of the given length (pixels) and angle
/// (degrees, counterclockwise from the x axis), normalized to sum 1.
Kernel motion_kernel(double length, double angle_degrees);

/// Laplacian of Gaussian on a size x size grid, shifted to sum exactly zero.
Kernel log_kernel(int size, double sigma);

}  // namespace revfilt
