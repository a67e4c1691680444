#include "revfilt/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "revfilt/error.hpp"

namespace revfilt {

namespace {

void check_dims(int height, int width, int channels) {
  if (height <= 0 || width <= 0) {
    throw Error(ErrorKind::InvalidParameter,
                "image dimensions must be positive, got " + std::to_string(height) + "x" +
                    std::to_string(width));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::InvalidParameter,
                "channels must be 1 or 3, got " + std::to_string(channels));
  }
}

}  // namespace

Image::Image(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width, channels);
  data_.assign(static_cast<std::size_t>(height) * width * channels, 0.0);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw Error(ErrorKind::DimensionMismatch,
                "data length " + std::to_string(data_.size()) + " does not match " +
                    std::to_string(height) + "x" + std::to_string(width) + "x" +
                    std::to_string(channels));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "image value is not finite");
  }
}

Image Image::filled(int height, int width, int channels, double value) {
  return Image(height, width, channels,
               std::vector<double>(static_cast<std::size_t>(height) * width * channels, value));
}

std::vector<double> Image::plane(int c) const {
  std::vector<double> out(plane_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * channels_ + c];
  return out;
}

Image Image::from_planes(int height, int width, const std::vector<std::vector<double>>& planes) {
  const int channels = static_cast<int>(planes.size());
  check_dims(height, width, channels);
  const std::size_t n = static_cast<std::size_t>(height) * width;
  std::vector<double> data(n * channels);
  for (int c = 0; c < channels; ++c) {
    if (planes[c].size() != n) throw Error(ErrorKind::DimensionMismatch, "plane size mismatch");
    for (std::size_t i = 0; i < n; ++i) data[i * channels + c] = planes[c][i];
  }
  return Image(height, width, channels, std::move(data));
}

Image Image::crop(int y0, int x0, int height, int width) const {
  if (y0 < 0 || x0 < 0 || height <= 0 || width <= 0 || y0 + height > height_ ||
      x0 + width > width_) {
    throw Error(ErrorKind::InvalidParameter, "crop window outside image");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(height) * width * channels_);
  for (int y = y0; y < y0 + height; ++y) {
    const auto row = data_.begin() + (static_cast<std::ptrdiff_t>(y) * width_ + x0) * channels_;
    out.insert(out.end(), row, row + static_cast<std::ptrdiff_t>(width) * channels_);
  }
  return Image(height, width, channels_, std::move(out));
}

double Image::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + "x" + std::to_string(a.channels()) + " vs " +
                    std::to_string(b.height()) + "x" + std::to_string(b.width()) + "x" +
                    std::to_string(b.channels()));
  }
}

Image image_add_scaled(const Image& a, const Image& b, double scale) {
  require_same_shape(a, b, "image_add_scaled");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + scale * b[i];
  return Image(a.height(), a.width(), a.channels(), std::move(out));
}

Image image_subtract(const Image& a, const Image& b) {
  require_same_shape(a, b, "image_subtract");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Image(a.height(), a.width(), a.channels(), std::move(out));
}

Image image_scale(const Image& a, double scale) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * a[i];
  return Image(a.height(), a.width(), a.channels(), std::move(out));
}

double sum_of_squares(const Image& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

bool within_magnitude(std::span<const double> values, double limit) noexcept {
  for (double v : values) {
    if (!std::isfinite(v) || std::abs(v) > limit) return false;
  }
  return true;
}

}  // namespace revfilt
