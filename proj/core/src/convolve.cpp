#include "revfilt/convolve.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "revfilt/error.hpp"

namespace revfilt {

Boundary parse_boundary(std::string_view name) {
  if (name == "replicate") return Boundary::Replicate;
  if (name == "circular") return Boundary::Circular;
  throw Error(ErrorKind::InvalidParameter, "unknown boundary '" + std::string(name) + "'");
}

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::Replicate ? "replicate" : "circular";
}

namespace {

int wrap(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Image convolve(const Image& image, const Kernel& kernel, Boundary boundary) {
  const int h = image.height();
  const int w = image.width();
  const int ch = image.channels();
  const int ry = kernel.radius_y();
  const int rx = kernel.radius_x();
  if (boundary == Boundary::Circular && (kernel.height() > h || kernel.width() > w)) {
    throw Error(ErrorKind::KernelTooLarge, "kernel exceeds image under circular boundary");
  }

  struct Tap {
    int dy;
    int dx;
    double weight;
  };
  std::vector<Tap> taps;
  for (int dy = -ry; dy <= ry; ++dy) {
    for (int dx = -rx; dx <= rx; ++dx) {
      if (const double k = kernel.at(dy, dx); k != 0.0) taps.push_back({dy, dx, k});
    }
  }

  const int ph = h + 2 * ry;
  const int pw = w + 2 * rx;
  std::vector<double> padded(static_cast<std::size_t>(ph) * pw);
  std::vector<double> out(image.size());
  const auto src = image.data();

  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < ph; ++y) {
      const int sy = boundary == Boundary::Circular ? wrap(y - ry, h) : std::clamp(y - ry, 0, h - 1);
      for (int x = 0; x < pw; ++x) {
        const int sx =
            boundary == Boundary::Circular ? wrap(x - rx, w) : std::clamp(x - rx, 0, w - 1);
        padded[static_cast<std::size_t>(y) * pw + x] =
            src[(static_cast<std::size_t>(sy) * w + sx) * ch + c];
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        const double* base = padded.data() + static_cast<std::size_t>(y + ry) * pw + (x + rx);
        for (const Tap& t : taps) s += t.weight * base[static_cast<std::ptrdiff_t>(t.dy) * pw + t.dx];
        out[(static_cast<std::size_t>(y) * w + x) * ch + c] = s;
      }
    }
  }
  return Image(h, w, ch, std::move(out));
}

}  // namespace revfilt
