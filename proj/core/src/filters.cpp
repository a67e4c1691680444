#include "revfilt/filters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "revfilt/error.hpp"

namespace revfilt {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Replicate-padded copy of one channel.
std::vector<double> pad_replicate(const Image& x, int c, int r) {
  const int h = x.height();
  const int w = x.width();
  const int pw = w + 2 * r;
  std::vector<double> out(static_cast<std::size_t>(h + 2 * r) * pw);
  for (int y = 0; y < h + 2 * r; ++y) {
    const int sy = std::clamp(y - r, 0, h - 1);
    for (int xx = 0; xx < pw; ++xx) {
      const int sx = std::clamp(xx - r, 0, w - 1);
      out[static_cast<std::size_t>(y) * pw + xx] = x.at(sy, sx, c);
    }
  }
  return out;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidParameter, std::string(what) + " must be positive");
  }
}

Image elementwise(const Image& a, const Image& b, double (*op)(double, double)) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return Image(a.height(), a.width(), a.channels(), std::move(out));
}

}  // namespace

LinearFilter::LinearFilter(std::string name, Kernel kernel, Boundary boundary, FilterParams params)
    : name_(std::move(name)), kernel_(std::move(kernel)), boundary_(boundary),
      params_(std::move(params)) {}

Image LinearFilter::apply(const Image& x) const { return convolve(x, kernel_, boundary_); }

FilterParams LinearFilter::params() const {
  FilterParams p = params_;
  p["boundary"] = std::string(to_string(boundary_));
  return p;
}

MedianFilter::MedianFilter(int n) : n_(n) {
  if (n <= 0 || n % 2 == 0) throw Error(ErrorKind::InvalidParameter, "median size must be odd");
}

Image MedianFilter::apply(const Image& x) const { return median_filter(x, n_); }

FilterParams MedianFilter::params() const { return {{"n", std::to_string(n_)}}; }

Image median_filter(const Image& x, int n) {
  const int r = n / 2;
  const int h = x.height();
  const int w = x.width();
  const int ch = x.channels();
  const int pw = w + 2 * r;
  std::vector<double> out(x.size());
  std::vector<double> window(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < ch; ++c) {
    const auto padded = pad_replicate(x, c, r);
    for (int y = 0; y < h; ++y) {
      for (int xx = 0; xx < w; ++xx) {
        std::size_t k = 0;
        for (int dy = 0; dy < n; ++dy) {
          for (int dx = 0; dx < n; ++dx) {
            window[k++] = padded[static_cast<std::size_t>(y + dy) * pw + xx + dx];
          }
        }
        const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        out[(static_cast<std::size_t>(y) * w + xx) * ch + c] = *mid;
      }
    }
  }
  return Image(h, w, ch, std::move(out));
}

BilateralFilter::BilateralFilter(double sigma_s, double sigma_r)
    : sigma_s_(sigma_s), sigma_r_(sigma_r) {
  require_positive(sigma_s, "bilateral sigma_s");
  require_positive(sigma_r, "bilateral sigma_r");
}

Image BilateralFilter::apply(const Image& x) const {
  return joint_bilateral(x, x, sigma_s_, sigma_r_);
}

FilterParams BilateralFilter::params() const {
  return {{"sigma_s", num(sigma_s_)}, {"sigma_r", num(sigma_r_)}};
}

Image joint_bilateral(const Image& input, const Image& guide, double sigma_s, double sigma_r) {
  require_same_shape(input, guide, "joint_bilateral");
  const int r = static_cast<int>(std::ceil(2.0 * sigma_s));
  const int side = 2 * r + 1;
  const int h = input.height();
  const int w = input.width();
  const int ch = input.channels();
  const int pw = w + 2 * r;

  struct Tap {
    std::ptrdiff_t offset;
    double spatial;
  };
  std::vector<Tap> taps;
  taps.reserve(static_cast<std::size_t>(side) * side);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      taps.push_back({static_cast<std::ptrdiff_t>(dy) * pw + dx,
                      std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_s * sigma_s))});
    }
  }
  const double range_scale = -1.0 / (2.0 * sigma_r * sigma_r);

  std::vector<double> out(input.size());
  for (int c = 0; c < ch; ++c) {
    const auto pin = pad_replicate(input, c, r);
    const auto pguide = pad_replicate(guide, c, r);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t center = static_cast<std::size_t>(y + r) * pw + (x + r);
        const double gc = pguide[center];
        double num_sum = 0.0;
        double den_sum = 0.0;
        for (const Tap& t : taps) {
          const std::size_t j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(center) + t.offset);
          const double d = pguide[j] - gc;
          const double wgt = t.spatial * std::exp(d * d * range_scale);
          num_sum += wgt * pin[j];
          den_sum += wgt;
        }
        out[(static_cast<std::size_t>(y) * w + x) * ch + c] = num_sum / den_sum;
      }
    }
  }
  return Image(h, w, ch, std::move(out));
}

GuidedFilter::GuidedFilter(int window, double eps, std::optional<double> guide_sigma)
    : window_(window), eps_(eps), guide_sigma_(guide_sigma) {
  if (window <= 0 || window % 2 == 0) {
    throw Error(ErrorKind::InvalidParameter, "guided window must be odd");
  }
  require_positive(eps, "guided eps");
  if (guide_sigma) require_positive(*guide_sigma, "guided sigma");
}

Image GuidedFilter::apply(const Image& x) const {
  if (!guide_sigma_) return guided_filter(x, x, window_, eps_);
  const Image guide = convolve(x, gaussian_kernel(*guide_sigma_), Boundary::Replicate);
  return guided_filter(x, guide, window_, eps_);
}

FilterParams GuidedFilter::params() const {
  FilterParams p{{"window", std::to_string(window_)}, {"eps", num(eps_)}};
  if (guide_sigma_) p["sigma"] = num(*guide_sigma_);
  return p;
}

Image guided_filter(const Image& input, const Image& guide, int window, double eps) {
  require_same_shape(input, guide, "guided_filter");
  const Kernel box = box_kernel(window);
  auto mean = [&](const Image& v) { return convolve(v, box, Boundary::Replicate); };
  auto mul = [](double a, double b) { return a * b; };

  const Image mean_i = mean(guide);
  const Image mean_p = mean(input);
  const Image corr_ii = mean(elementwise(guide, guide, mul));
  const Image corr_ip = mean(elementwise(guide, input, mul));

  std::vector<double> a(input.size());
  std::vector<double> b(input.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double var_i = corr_ii[i] - mean_i[i] * mean_i[i];
    const double cov_ip = corr_ip[i] - mean_i[i] * mean_p[i];
    a[i] = cov_ip / (var_i + eps);
    b[i] = mean_p[i] - a[i] * mean_i[i];
  }
  const Image mean_a = mean(Image(input.height(), input.width(), input.channels(), std::move(a)));
  const Image mean_b = mean(Image(input.height(), input.width(), input.channels(), std::move(b)));

  std::vector<double> out(input.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mean_a[i] * guide[i] + mean_b[i];
  return Image(input.height(), input.width(), input.channels(), std::move(out));
}

RollingGuidanceFilter::RollingGuidanceFilter(double sigma_s, double sigma_r, int iterations)
    : sigma_s_(sigma_s), sigma_r_(sigma_r), iterations_(iterations) {
  require_positive(sigma_s, "rgf sigma_s");
  require_positive(sigma_r, "rgf sigma_r");
  if (iterations < 1) throw Error(ErrorKind::InvalidParameter, "rgf iterations must be >= 1");
}

Image RollingGuidanceFilter::apply(const Image& x) const {
  Image guide = convolve(x, gaussian_kernel(sigma_s_), Boundary::Replicate);
  for (int i = 0; i < iterations_; ++i) guide = joint_bilateral(x, guide, sigma_s_, sigma_r_);
  return guide;
}

FilterParams RollingGuidanceFilter::params() const {
  return {{"sigma_s", num(sigma_s_)},
          {"sigma_r", num(sigma_r_)},
          {"iters", std::to_string(iterations_)}};
}

FilterPtr make_identity() {
  return std::make_shared<LinearFilter>("identity", identity_kernel(), Boundary::Replicate);
}

FilterPtr make_kernel_filter(Kernel kernel, Boundary boundary) {
  FilterParams p{{"size", std::to_string(kernel.height()) + "x" + std::to_string(kernel.width())}};
  return std::make_shared<LinearFilter>("kernel", std::move(kernel), boundary, std::move(p));
}

FilterPtr make_average(int n, Boundary boundary) {
  return std::make_shared<LinearFilter>("average", box_kernel(n), boundary,
                                        FilterParams{{"n", std::to_string(n)}});
}

FilterPtr make_disk(double radius, Boundary boundary) {
  return std::make_shared<LinearFilter>("disk", disk_kernel(radius), boundary,
                                        FilterParams{{"r", num(radius)}});
}

FilterPtr make_motion(double length, double angle_degrees, Boundary boundary) {
  return std::make_shared<LinearFilter>(
      "motion", motion_kernel(length, angle_degrees), boundary,
      FilterParams{{"length", num(length)}, {"angle", num(angle_degrees)}});
}

FilterPtr make_log(int size, double sigma, Boundary boundary) {
  return std::make_shared<LinearFilter>(
      "log", log_kernel(size, sigma), boundary,
      FilterParams{{"size", std::to_string(size)}, {"sigma", num(sigma)}});
}

FilterPtr make_gaussian(double sigma, std::optional<int> size, Boundary boundary) {
  Kernel k = gaussian_kernel(sigma, size);
  FilterParams p{{"sigma", num(sigma)}, {"size", std::to_string(k.height())}};
  return std::make_shared<LinearFilter>("gaussian", std::move(k), boundary, std::move(p));
}

FilterPtr make_median(int n) { return std::make_shared<MedianFilter>(n); }

FilterPtr make_bilateral(double sigma_s, double sigma_r) {
  return std::make_shared<BilateralFilter>(sigma_s, sigma_r);
}

FilterPtr make_guided(int window, double eps) { return std::make_shared<GuidedFilter>(window, eps); }

FilterPtr make_guided_gaussian(int window, double eps, double sigma) {
  return std::make_shared<GuidedFilter>(window, eps, sigma);
}

FilterPtr make_rolling_guidance(double sigma_s, double sigma_r, int iterations) {
  return std::make_shared<RollingGuidanceFilter>(sigma_s, sigma_r, iterations);
}

}  // namespace revfilt
