#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace revfilt {

/// Real-valued H x W x C image, row-major with interleaved channels.
///
/// Values are nominally in [0,1] but never clamped: reverse iterations
/// overshoot routinely and clamping would break the linear analysis. The
/// only hard invariant is that every stored value is finite.
class Image {
 public:
  Image() = default;

  /// Zero-filled image. channels must be 1 or 3.
  Image(int height, int width, int channels = 1);

  /// Takes ownership of data; throws on size mismatch or non-finite values.
  Image(int height, int width, int channels, std::vector<double> data);

  static Image filled(int height, int width, int channels, double value);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  bool empty() const noexcept { return data_.empty(); }

  double at(int y, int x, int c = 0) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  /// Single channel c as a contiguous H x W plane.
  std::vector<double> plane(int c) const;

  /// Rebuilds an image from per-channel planes (each H x W).
  static Image from_planes(int height, int width,
                           const std::vector<std::vector<double>>& planes);

  Image crop(int y0, int x0, int height, int width) const;

  /// Largest absolute pixel value (0 for an empty image).
  double max_abs() const noexcept;

  friend bool operator==(const Image& a, const Image& b) {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Throws DimensionMismatch unless the two images have identical shape.
void require_same_shape(const Image& a, const Image& b, const char* what);

/// out = a + scale * b, element-wise, no clamping.
Image image_add_scaled(const Image& a, const Image& b, double scale);

/// out = a - b.
Image image_subtract(const Image& a, const Image& b);

Image image_scale(const Image& a, double scale);

/// Sum of squares over all pixels and channels, in storage order.
double sum_of_squares(const Image& a);

/// True if every value is finite and |v| <= limit.
bool within_magnitude(std::span<const double> values, double limit) noexcept;

}  // namespace revfilt
