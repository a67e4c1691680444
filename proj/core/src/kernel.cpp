#include "revfilt/kernel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "revfilt/error.hpp"

namespace revfilt {

namespace {

void normalize(std::vector<double>& c) {
  const double s = std::accumulate(c.begin(), c.end(), 0.0);
  for (double& v : c) v /= s;
}

}  // namespace

Kernel::Kernel(int height, int width, std::vector<double> coeffs)
    : height_(height), width_(width), coeffs_(std::move(coeffs)) {
  if (height <= 0 || width <= 0 || height % 2 == 0 || width % 2 == 0) {
    throw Error(ErrorKind::InvalidParameter,
                "kernel must be odd-sized, got " + std::to_string(height) + "x" +
                    std::to_string(width));
  }
  if (coeffs_.size() != static_cast<std::size_t>(height) * width) {
    throw Error(ErrorKind::DimensionMismatch, "kernel coefficient count mismatch");
  }
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "kernel coefficient not finite");
  }
}

double Kernel::sum() const noexcept { return std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0); }

Kernel identity_kernel() { return Kernel(1, 1, {1.0}); }

Kernel gaussian_kernel(double sigma, std::optional<int> size) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidParameter, "gaussian sigma must be positive");
  }
  const int side = size.value_or(2 * static_cast<int>(std::ceil(2.0 * sigma)) + 1);
  if (side <= 0 || side % 2 == 0) {
    throw Error(ErrorKind::InvalidParameter, "gaussian kernel size must be odd and positive");
  }
  const int r = side / 2;
  std::vector<double> c(static_cast<std::size_t>(side) * side);
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      c[static_cast<std::size_t>(y + r) * side + (x + r)] =
          std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
    }
  }
  normalize(c);
  return Kernel(side, side, std::move(c));
}

Kernel box_kernel(int n) {
  if (n <= 0 || n % 2 == 0) throw Error(ErrorKind::InvalidParameter, "box size must be odd");
  return Kernel(n, n, std::vector<double>(static_cast<std::size_t>(n) * n, 1.0 / (n * n)));
}

Kernel disk_kernel(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "disk radius must be positive");
  const int r = static_cast<int>(std::ceil(radius));
  const int side = 2 * r + 1;
  constexpr int kSub = 32;
  std::vector<double> c(static_cast<std::size_t>(side) * side, 0.0);
  const double r2 = radius * radius;
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      int inside = 0;
      for (int sy = 0; sy < kSub; ++sy) {
        const double py = y - 0.5 + (sy + 0.5) / kSub;
        for (int sx = 0; sx < kSub; ++sx) {
          const double px = x - 0.5 + (sx + 0.5) / kSub;
          if (px * px + py * py <= r2) ++inside;
        }
      }
      c[static_cast<std::size_t>(y + r) * side + (x + r)] =
          static_cast<double>(inside) / (kSub * kSub);
    }
  }
  normalize(c);
  return Kernel(side, side, std::move(c));
}

Kernel motion_kernel(double length, double angle_degrees) {
  if (!(length >= 1.0)) throw Error(ErrorKind::InvalidParameter, "motion length must be >= 1");
  const double theta = angle_degrees * 3.14159265358979323846 / 180.0;
  const double half = (length - 1.0) / 2.0;
  const double dx = std::cos(theta);
  const double dy = -std::sin(theta);  // rows grow downward
  const int rx = static_cast<int>(std::ceil(half * std::abs(dx) - 1e-9)) + 1;
  const int ry = static_cast<int>(std::ceil(half * std::abs(dy) - 1e-9)) + 1;
  const int w = 2 * rx + 1;
  const int h = 2 * ry + 1;
  std::vector<double> c(static_cast<std::size_t>(h) * w, 0.0);
  const int samples = static_cast<int>(std::ceil(length * 16.0)) + 1;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : -half + 2.0 * half * i / (samples - 1);
    const double px = t * dx + rx;
    const double py = t * dy + ry;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    auto splat = [&](int yy, int xx, double wgt) {
      if (wgt > 0.0 && yy >= 0 && yy < h && xx >= 0 && xx < w) {
        c[static_cast<std::size_t>(yy) * w + xx] += wgt;
      }
    };
    splat(y0, x0, (1 - fx) * (1 - fy));
    splat(y0, x0 + 1, fx * (1 - fy));
    splat(y0 + 1, x0, (1 - fx) * fy);
    splat(y0 + 1, x0 + 1, fx * fy);
  }
  // Round off splat residue so axis-aligned segments stay exactly symmetric.
  for (double& v : c) {
    if (v < 1e-12) v = 0.0;
  }
  // Drop symmetric all-zero borders left by the bilinear reach margin.
  int ty = 0;
  int tx = 0;
  auto row_zero = [&](int y) {
    for (int x = 0; x < w; ++x) {
      if (c[static_cast<std::size_t>(y) * w + x] != 0.0) return false;
    }
    return true;
  };
  auto col_zero = [&](int x) {
    for (int y = 0; y < h; ++y) {
      if (c[static_cast<std::size_t>(y) * w + x] != 0.0) return false;
    }
    return true;
  };
  while (h - 2 * ty > 1 && row_zero(ty) && row_zero(h - 1 - ty)) ++ty;
  while (w - 2 * tx > 1 && col_zero(tx) && col_zero(w - 1 - tx)) ++tx;
  const int th = h - 2 * ty;
  const int tw = w - 2 * tx;
  std::vector<double> trimmed(static_cast<std::size_t>(th) * tw);
  for (int y = 0; y < th; ++y) {
    for (int x = 0; x < tw; ++x) {
      trimmed[static_cast<std::size_t>(y) * tw + x] = c[static_cast<std::size_t>(y + ty) * w + x + tx];
    }
  }
  normalize(trimmed);
  return Kernel(th, tw, std::move(trimmed));
}

Kernel log_kernel(int size, double sigma) {
  if (size <= 0 || size % 2 == 0) throw Error(ErrorKind::InvalidParameter, "LoG size must be odd");
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "LoG sigma must be positive");
  const int r = size / 2;
  const double s2 = sigma * sigma;
  std::vector<double> g(static_cast<std::size_t>(size) * size);
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      g[static_cast<std::size_t>(y + r) * size + (x + r)] = std::exp(-(x * x + y * y) / (2.0 * s2));
    }
  }
  normalize(g);
  std::vector<double> c(g.size());
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      const std::size_t i = static_cast<std::size_t>(y + r) * size + (x + r);
      c[i] = g[i] * (x * x + y * y - 2.0 * s2) / (s2 * s2);
    }
  }
  const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
  for (double& v : c) v -= mean;
  return Kernel(size, size, std::move(c));
}

}  // namespace revfilt
