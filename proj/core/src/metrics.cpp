#include "revfilt/metrics.hpp"

#include <cmath>
#include <vector>

#include "revfilt/error.hpp"

namespace revfilt {

double mse(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double psnr(const Image& reference, const Image& test) {
  const double e = mse(reference, test);
  if (e == 0.0) return kMaxPsnr;
  return 10.0 * std::log10(1.0 / e);
}

namespace {

std::vector<double> gaussian_window_1d() {
  std::vector<double> w(kSsimWindow);
  const int r = kSsimWindow / 2;
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - r;
    w[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable weighted sum over every valid window position.
std::vector<double> window_filter(const std::vector<double>& src, int h, int w,
                                  const std::vector<double>& win) {
  const int n = static_cast<int>(win.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += win[k] * src[static_cast<std::size_t>(y) * w + x + k];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += win[k] * rows[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

double ssim_plane(const std::vector<double>& a, const std::vector<double>& b, int h, int w,
                  const std::vector<double>& win) {
  const double c1 = (kSsimK1 * 1.0) * (kSsimK1 * 1.0);
  const double c2 = (kSsimK2 * 1.0) * (kSsimK2 * 1.0);
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = window_filter(a, h, w, win);
  const auto mu_b = window_filter(b, h, w, win);
  const auto e_aa = window_filter(aa, h, w, win);
  const auto e_bb = window_filter(bb, h, w, win);
  const auto e_ab = window_filter(ab, h, w, win);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double va = e_aa[i] - mu_a[i] * mu_a[i];
    const double vb = e_bb[i] - mu_b[i] * mu_b[i];
    const double cov = e_ab[i] - mu_a[i] * mu_b[i];
    sum += ((2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2)) /
           ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

}  // namespace

double ssim(const Image& reference, const Image& test) {
  require_same_shape(reference, test, "ssim");
  if (reference.height() < kSsimWindow || reference.width() < kSsimWindow) {
    throw Error(ErrorKind::ImageTooSmall, "ssim needs at least an 11x11 image");
  }
  const auto win = gaussian_window_1d();
  double total = 0.0;
  for (int c = 0; c < reference.channels(); ++c) {
    total += ssim_plane(reference.plane(c), test.plane(c), reference.height(), reference.width(),
                        win);
  }
  return total / reference.channels();
}

double relative_error(const Image& b, const Image& gxk) {
  require_same_shape(b, gxk, "relative_error");
  const double denom = sum_of_squares(b);
  if (denom == 0.0) throw Error(ErrorKind::ZeroReference, "||b|| is zero");
  double num = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = b[i] - gxk[i];
    num += d * d;
  }
  return num / denom;
}

}  // namespace revfilt
