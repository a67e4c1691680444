#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "revfilt/convolve.hpp"
#include "revfilt/error.hpp"
#include "revfilt/filters.hpp"
#include "revfilt/kernel.hpp"
#include "revfilt/spectral.hpp"
#include "test_util.hpp"

using namespace revfilt;
using testutil::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

double box3_response(double w1, double w2) {
  return (1 + 2 * std::cos(w1)) / 3 * (1 + 2 * std::cos(w2)) / 3;
}

// 1D response of a symmetric tap vector (centre first).
double sym_response_1d(const std::vector<double>& taps, double w) {
  double s = taps[0];
  for (std::size_t i = 1; i < taps.size(); ++i) s += 2 * taps[i] * std::cos(w * i);
  return s;
}

std::vector<std::pair<std::string, Kernel>> builtin_kernels() {
  return {{"identity", identity_kernel()},
          {"average3", box_kernel(3)},
          {"average5", box_kernel(5)},
          {"gauss1", gaussian_kernel(1.0)},
          {"gauss1.5", gaussian_kernel(1.5)},
          {"gauss1x7", gaussian_kernel(1.0, 7)},
          {"disk3", disk_kernel(3.0)},
          {"motion", motion_kernel(20.0, 45.0)},
          {"log", log_kernel(7, 0.4)}};
}

}  // namespace

TEST(FrequencyResponse, Identity) {
  const ComplexGrid g = frequency_response(identity_kernel(), 8, 6);
  for (const auto& v : g.values) {
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
}

TEST(FrequencyResponse, AverageMatchesSeparableFormula) {
  const ComplexGrid g = frequency_response(box_kernel(3), 256, 256);
  double worst = 0.0, gmin = 1.0;
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x < 256; ++x) {
      const double want = box3_response(2 * kPi * y / 256, 2 * kPi * x / 256);
      worst = std::max(worst, std::abs(g.at(y, x) - std::complex<double>(want, 0.0)));
      gmin = std::min(gmin, g.at(y, x).real());
    }
  EXPECT_LT(worst, 1e-14);
  EXPECT_NEAR(gmin, -1.0 / 3.0, 1e-14);
}

TEST(FrequencyResponse, GaussianSigmaOneFiveByFive) {
  const Kernel k = gaussian_kernel(1.0);
  ASSERT_EQ(k.height(), 5);
  std::vector<double> taps = {1.0, std::exp(-0.5), std::exp(-2.0)};
  const double norm = taps[0] + 2 * taps[1] + 2 * taps[2];
  for (double& t : taps) t /= norm;
  const ComplexGrid g = frequency_response(k, 64, 64);
  double gmin = INFINITY;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      EXPECT_LE(std::abs(g.at(y, x).imag()), 1e-12);
      const double want = sym_response_1d(taps, 2 * kPi * y / 64) * sym_response_1d(taps, 2 * kPi * x / 64);
      EXPECT_NEAR(g.at(y, x).real(), want, 1e-14);
      gmin = std::min(gmin, g.at(y, x).real());
    }
  // The sampled 5-tap Gaussian bottoms out at (pi,pi) with a small positive value.
  const double at_pi = sym_response_1d(taps, kPi);
  EXPECT_NEAR(gmin, at_pi * at_pi, 1e-15);
  EXPECT_GT(gmin, 0.0);
}

TEST(FrequencyResponse, ResponseAtMatchesGrid) {
  const Kernel k = motion_kernel(9.0, 30.0);
  const ComplexGrid g = frequency_response(k, 16, 32);
  for (int y = 0; y < 16; y += 3)
    for (int x = 0; x < 32; x += 5)
      EXPECT_LT(std::abs(g.at(y, x) - response_at(k, 2 * kPi * y / 16, 2 * kPi * x / 32)), 1e-13);
}

TEST(FrequencyResponse, KernelTooLarge) {
  try {
    frequency_response(gaussian_kernel(3.0), 8, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KernelTooLarge);
  }
}

TEST(FrequencyResponse, SymmetricKernelsAreReal) {
  for (const Kernel& k : {box_kernel(5), gaussian_kernel(2.0), disk_kernel(3.0), log_kernel(7, 0.4)}) {
    const ComplexGrid g = frequency_response(k, 40, 40);
    for (const auto& v : g.values) EXPECT_LE(std::abs(v.imag()), 1e-10);
  }
}

TEST(Classify, Bands) {
  EXPECT_EQ(classify(1.0 + 2e-9), Stability::Unstable);
  EXPECT_EQ(classify(1.0 + 5e-10), Stability::Marginal);
  EXPECT_EQ(classify(1.0), Stability::Marginal);
  EXPECT_EQ(classify(1.0 - 2e-9), Stability::Convergent);
}

TEST(Analyze, AverageFilter) {
  const SpectralReport r = analyze(box_kernel(3));
  EXPECT_NEAR(r.t.t0, 4.0 / 3.0, 1e-9);
  EXPECT_EQ(r.t.classification, Stability::Unstable);
  EXPECT_NEAR(r.tda.t0, 1.0, 1e-9);
  EXPECT_NEAR(r.u0, 0.0, 1e-9);
  EXPECT_EQ(r.tda.classification, Stability::Marginal);
}

TEST(Analyze, GaussianCases) {
  const SpectralReport s1 = analyze(gaussian_kernel(1.0));
  EXPECT_LE(s1.t.t0, 1.0);
  EXPECT_NE(s1.t.classification, Stability::Unstable);
  const SpectralReport s15 = analyze(gaussian_kernel(1.5));
  EXPECT_GT(s15.t.t0, 1.0);
  EXPECT_EQ(s15.t.classification, Stability::Unstable);
}

TEST(Analyze, GridInvariants) {
  for (const auto& [name, k] : builtin_kernels()) {
    const SpectralReport r = analyze(k, {64, 64, true});
    double tmax = 0.0, dmax = 0.0, umin = INFINITY, gmax = 0.0;
    for (std::size_t i = 0; i < r.g.values.size(); ++i) {
      tmax = std::max(tmax, std::abs(r.t.h0.values[i]));
      dmax = std::max(dmax, std::abs(r.tda.h0.values[i]));
      umin = std::min(umin, std::norm(r.g.values[i]));
      gmax = std::max(gmax, std::abs(r.g.values[i]));
    }
    EXPECT_EQ(r.t.t0_grid, tmax) << name;
    EXPECT_EQ(r.tda.t0_grid, dmax) << name;
    EXPECT_EQ(r.u0_grid, umin) << name;
    EXPECT_GE(r.t.t0, r.t.t0_grid) << name;
    EXPECT_LE(r.u0, r.u0_grid) << name;
    if (gmax <= 1.0 + 1e-12) {
      EXPECT_LE(dmax, 1.0 + 1e-12) << name;
      if (r.max_imag <= 1e-10) EXPECT_NEAR(r.tda.t0_grid, 1.0 - r.u0_grid, 1e-12) << name;
    }
  }
}

TEST(Analyze, ConvergentEnvelopeNonIncreasing) {
  const SpectralReport r = analyze(gaussian_kernel(1.0), {64, 64, false});
  ASSERT_EQ(r.t.classification, Stability::Convergent);
  std::vector<std::complex<double>> pw(r.t.h0.values.size(), 1.0);
  double prev = INFINITY;
  for (int k = 1; k <= 60; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      pw[i] *= r.t.h0.values[i];
      m = std::max(m, std::abs(pw[i]));
    }
    EXPECT_LE(m, prev);
    prev = m;
  }
}

TEST(Predict, ZeroItersIsBlurAndIdentityKeepsX) {
  const Image x = testutil::pattern_image(20, 24, 3);
  const Kernel k = gaussian_kernel(1.5);
  const Image blurred = convolve(x, k, Boundary::Circular);
  EXPECT_LT(max_abs_diff(predict_iterate(k, x, Method::T, 0), blurred), 1e-12);
  EXPECT_LT(max_abs_diff(predict_iterate(k, x, Method::TDA, 0), blurred), 1e-12);
  for (int it : {0, 1, 7}) EXPECT_LT(max_abs_diff(predict_iterate(identity_kernel(), x, Method::T, it), x), 1e-12);
  EXPECT_THROW(predict_iterate(k, x, Method::P, 3), Error);
}

// Spatial iteration under circular convolution against the closed form.
TEST(Predict, MatchesSpatialIterationForBuiltinKernels) {
  const Image x = testutil::pattern_image(32, 32);
  for (const auto& [name, k] : builtin_kernels()) {
    const auto g = make_kernel_filter(k, Boundary::Circular);
    const Image b = (*g)(x);
    for (Method m : {Method::T, Method::TDA}) {
      Image xi = b;
      for (int it = 1; it <= 50; ++it) {
        try {
          xi = m == Method::T ? step_t(xi, b, *g) : step_tda(xi, b, *g, 1.0);
        } catch (const Error& e) {
          ASSERT_EQ(e.kind(), ErrorKind::Diverged);
          break;  // beyond the guard the spatial side has nothing to compare
        }
        const Image pred = predict_iterate(k, x, m, it);
        const double scale = std::max(1.0, xi.max_abs());
        ASSERT_LT(max_abs_diff(xi, pred), 1e-8 * scale) << name << " " << to_string(m) << " k=" << it;
      }
    }
  }
}

TEST(Report, CsvAndSummary) {
  const SpectralReport id = analyze(identity_kernel(), {4, 4, true});
  const std::string csv = report_to_csv(id);
  EXPECT_EQ(csv.rfind("omega1_idx,omega2_idx,H0_T,H0_TDA\n", 0), 0u);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line) && line[0] != '#') {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',', line.find(',') + 1)), ",0,0");
  }
  EXPECT_EQ(rows, 16);

  const SpectralReport avg = analyze(box_kernel(3), {64, 64, true});
  std::istringstream ain(report_to_csv(avg));
  std::getline(ain, line);
  double col_max = 0.0;
  while (std::getline(ain, line) && line[0] != '#') {
    std::istringstream fields(line);
    std::string f;
    for (int i = 0; i < 3; ++i) std::getline(fields, f, ',');
    col_max = std::max(col_max, std::stod(f));
  }
  EXPECT_NEAR(col_max, 4.0 / 3.0, 1e-9);

  const std::string summary = report_summary(avg);
  for (const char* key : {"T0_T=", "T0_TDA=", "U0=", "class_T=unstable", "class_TDA=marginal"}) {
    EXPECT_NE(summary.find(key), std::string::npos) << key;
  }
}
