#include "revfilt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "revfilt/error.hpp"

namespace revfilt {

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Unstable: return "unstable";
    case Stability::Convergent: return "convergent";
    case Stability::Marginal: return "marginal";
  }
  return "?";
}

Stability classify(double t0, double tol) {
  if (t0 > 1.0 + tol) return Stability::Unstable;
  if (t0 < 1.0 - tol) return Stability::Convergent;
  return Stability::Marginal;
}

ComplexGrid frequency_response(const Kernel& kernel, int grid_height, int grid_width) {
  if (grid_height < 1 || grid_width < 1) {
    throw Error(ErrorKind::InvalidParameter, "frequency grid must be non-empty");
  }
  if (kernel.height() > grid_height || kernel.width() > grid_width) {
    throw Error(ErrorKind::KernelTooLarge, "kernel does not fit the frequency grid");
  }
  // Correlation by k equals convolution by k mirrored, so k(dy,dx) lands at (-dy,-dx).
  std::vector<double> h(static_cast<std::size_t>(grid_height) * grid_width, 0.0);
  for (int dy = -kernel.radius_y(); dy <= kernel.radius_y(); ++dy) {
    for (int dx = -kernel.radius_x(); dx <= kernel.radius_x(); ++dx) {
      const int y = ((-dy) % grid_height + grid_height) % grid_height;
      const int x = ((-dx) % grid_width + grid_width) % grid_width;
      h[static_cast<std::size_t>(y) * grid_width + x] += kernel.at(dy, dx);
    }
  }
  return fft2(h, grid_height, grid_width);
}

Complex response_at(const Kernel& kernel, double omega1, double omega2) {
  Complex sum(0.0, 0.0);
  for (int dy = -kernel.radius_y(); dy <= kernel.radius_y(); ++dy) {
    for (int dx = -kernel.radius_x(); dx <= kernel.radius_x(); ++dx) {
      const double k = kernel.at(dy, dx);
      if (k != 0.0) sum += k * std::polar(1.0, omega1 * dy + omega2 * dx);
    }
  }
  return sum;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex h0_of(Method method, Complex g) { return method == Method::T ? 1.0 - g : 1.0 - g * g; }

// Pattern search for a local maximum of f, starting at (w1, w2) with the
// grid spacing as the initial step.
template <class F>
double compass_max(F f, double w1, double w2, double step1, double step2) {
  double best = f(w1, w2);
  while (step1 > 1e-12 || step2 > 1e-12) {
    bool moved = false;
    const double cand[4][2] = {{step1, 0}, {-step1, 0}, {0, step2}, {0, -step2}};
    for (const auto& d : cand) {
      const double v = f(w1 + d[0], w2 + d[1]);
      if (v > best) {
        best = v;
        w1 += d[0];
        w2 += d[1];
        moved = true;
        break;
      }
    }
    if (!moved) {
      step1 *= 0.5;
      step2 *= 0.5;
    }
  }
  return best;
}

MethodSpectrum spectrum_for(Method method, const ComplexGrid& g) {
  MethodSpectrum s;
  s.h0 = ComplexGrid(g.height, g.width);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      s.h0.at(y, x) = h0_of(method, g.at(y, x));
      const double a = std::abs(s.h0.at(y, x));
      if (a > s.t0_grid) {
        s.t0_grid = a;
        s.argmax_row = y;
        s.argmax_col = x;
      }
    }
  }
  s.t0 = s.t0_grid;
  return s;
}

double omega(int idx, int n) { return kTwoPi * idx / n; }

// Zero of a real response along the segment between two neighbouring grid
// points whose values have opposite signs.
double bisect_root(const Kernel& k, double a1, double a2, double b1, double b2) {
  double lo = 0.0;
  double hi = 1.0;
  const double glo = response_at(k, a1, a2).real();
  double best = std::abs(glo);
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double gm = response_at(k, a1 + mid * (b1 - a1), a2 + mid * (b2 - a2)).real();
    best = std::min(best, std::abs(gm));
    if (gm == 0.0) break;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace

SpectralReport analyze(const Kernel& kernel, const AnalysisOptions& options) {
  SpectralReport r;
  r.freq_height = options.grid_height;
  r.freq_width = options.grid_width;
  r.g = frequency_response(kernel, options.grid_height, options.grid_width);
  const int H = r.g.height;
  const int W = r.g.width;

  r.u0_grid = std::numeric_limits<double>::infinity();
  int umin_y = 0;
  int umin_x = 0;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const Complex g = r.g.at(y, x);
      r.max_imag = std::max(r.max_imag, std::abs(g.imag()));
      const double u = std::norm(g);
      if (u < r.u0_grid) {
        r.u0_grid = u;
        umin_y = y;
        umin_x = x;
      }
    }
  }
  r.u0 = r.u0_grid;
  r.t = spectrum_for(Method::T, r.g);
  r.tda = spectrum_for(Method::TDA, r.g);

  if (options.refine) {
    const double s1 = kTwoPi / H;
    const double s2 = kTwoPi / W;
    for (auto [method, spec] : {std::pair{Method::T, &r.t}, std::pair{Method::TDA, &r.tda}}) {
      const auto amp = [&kernel, method](double w1, double w2) {
        return std::abs(h0_of(method, response_at(kernel, w1, w2)));
      };
      spec->t0 = std::max(spec->t0_grid, compass_max(amp, omega(spec->argmax_row, H),
                                                      omega(spec->argmax_col, W), s1, s2));
    }

    const auto neg_u = [&kernel](double w1, double w2) {
      return -std::norm(response_at(kernel, w1, w2));
    };
    r.u0 = std::min(r.u0, -compass_max(neg_u, omega(umin_y, H), omega(umin_x, W), s1, s2));

    // A real G that changes sign between neighbours crosses zero in between.
    if (r.max_imag <= 1e-10) {
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          const double g = r.g.at(y, x).real();
          const int ny[2] = {(y + 1) % H, y};
          const int nx[2] = {x, (x + 1) % W};
          for (int d = 0; d < 2; ++d) {
            const double gn = r.g.at(ny[d], nx[d]).real();
            if ((g < 0.0) == (gn < 0.0)) continue;
            const double b1 = omega(y, H) + (d == 0 ? s1 : 0.0);
            const double b2 = omega(x, W) + (d == 1 ? s2 : 0.0);
            const double root = bisect_root(kernel, omega(y, H), omega(x, W), b1, b2);
            r.u0 = std::min(r.u0, root * root);
          }
        }
      }
      // |1 - G^2| reaches 1 - U0 where |G| is smallest.
      r.tda.t0 = std::max(r.tda.t0, 1.0 - r.u0);
    }
  }
  r.t.classification = classify(r.t.t0);
  r.tda.classification = classify(r.tda.t0);
  return r;
}

Image predict_iterate(const Kernel& kernel, const Image& x, Method method, int iterations) {
  if (method != Method::T && method != Method::TDA) {
    throw Error(ErrorKind::InvalidParameter, "closed form exists for t and tda only");
  }
  if (iterations < 0) throw Error(ErrorKind::InvalidParameter, "iterations must be >= 0");
  const int h = x.height();
  const int w = x.width();
  const ComplexGrid g = frequency_response(kernel, h, w);

  // H0^k by repeated squaring.
  ComplexGrid hk(h, w);
  for (std::size_t i = 0; i < hk.values.size(); ++i) {
    Complex base = h0_of(method, g.values[i]);
    Complex acc(1.0, 0.0);
    for (int e = iterations; e > 0; e >>= 1) {
      if (e & 1) acc *= base;
      base *= base;
    }
    hk.values[i] = acc;
  }

  std::vector<std::vector<double>> planes;
  for (int c = 0; c < x.channels(); ++c) {
    const ComplexGrid X = fft2(x.plane(c), h, w);
    ComplexGrid xk(h, w);
    for (std::size_t i = 0; i < xk.values.size(); ++i) {
      const Complex residual = (1.0 - g.values[i]) * X.values[i];
      xk.values[i] = X.values[i] - hk.values[i] * residual;
    }
    planes.push_back(ifft2_real(xk));
  }
  for (const auto& p : planes) {
    if (!within_magnitude(p, std::numeric_limits<double>::max())) {
      throw Error(ErrorKind::Diverged, "closed-form iterate overflowed");
    }
  }
  return Image::from_planes(h, w, planes);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_csv(const SpectralReport& r) {
  std::string out = "omega1_idx,omega2_idx,H0_T,H0_TDA\n";
  out.reserve(out.size() + static_cast<std::size_t>(r.freq_height) * r.freq_width * 48);
  for (int y = 0; y < r.freq_height; ++y) {
    for (int x = 0; x < r.freq_width; ++x) {
      out += std::to_string(y) + ',' + std::to_string(x) + ',' + fmt(std::abs(r.t.h0.at(y, x))) +
             ',' + fmt(std::abs(r.tda.h0.at(y, x))) + '\n';
    }
  }
  out += "# T0_T=" + fmt(r.t.t0) + "\n# T0_TDA=" + fmt(r.tda.t0) + "\n# U0=" + fmt(r.u0) + "\n";
  return out;
}

std::string report_summary(const SpectralReport& r) {
  std::string out;
  out += "grid=" + std::to_string(r.freq_height) + "x" + std::to_string(r.freq_width) + "\n";
  for (auto [name, spec] : {std::pair{"T", &r.t}, std::pair{"TDA", &r.tda}}) {
    out += std::string("T0_") + name + "=" + fmt(spec->t0) + "\n";
    out += std::string("T0_") + name + "_grid=" + fmt(spec->t0_grid) + "\n";
    out += std::string("argmax_") + name + "=" + std::to_string(spec->argmax_row) + "," +
           std::to_string(spec->argmax_col) + "\n";
    out += std::string("class_") + name + "=" + std::string(to_string(spec->classification)) + "\n";
  }
  out += "U0=" + fmt(r.u0) + "\n";
  out += "U0_grid=" + fmt(r.u0_grid) + "\n";
  out += "max_imag_G=" + fmt(r.max_imag) + "\n";
  return out;
}

}  // namespace revfilt
