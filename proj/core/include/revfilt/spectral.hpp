#pragma once

#include <string>
#include <string_view>

#include "revfilt/fft.hpp"
#include "revfilt/image.hpp"
#include "revfilt/kernel.hpp"
#include "revfilt/reverse.hpp"

namespace revfilt {

enum class Stability { Unstable, Convergent, Marginal };

std::string_view to_string(Stability s);

/// Band around T0 = 1 treated as marginal.
inline constexpr double kStabilityTolerance = 1e-9;

/// Unstable iff t0 > 1 + tol, convergent iff t0 < 1 - tol.
Stability classify(double t0, double tol = kStabilityTolerance);

/// Response of the filter y[i] = sum_m k[m] x[i+m] under circular
/// convolution on an H x W grid: the DFT of the kernel wrapped with its
/// center at index (0,0). Symmetric kernels give a real grid.
/// Throws KernelTooLarge when the kernel does not fit.
ComplexGrid frequency_response(const Kernel& kernel, int grid_height, int grid_width);

/// The same response at an arbitrary frequency pair (radians).
Complex response_at(const Kernel& kernel, double omega1, double omega2);

struct AnalysisOptions {
  int grid_height = 256;
  int grid_width = 256;
  /// Polish T0 and U0 off the grid (local search near the grid extrema and
  /// bisection on sign changes of a real G). Grid values are kept as well.
  bool refine = true;
};

struct MethodSpectrum {
  /// H0 = 1 - G for T, 1 - G^2 for TDA.
  ComplexGrid h0;
  /// max |H0| over the grid.
  double t0_grid = 0.0;
  int argmax_row = 0;
  int argmax_col = 0;
  /// Refined maximum (equals t0_grid without refinement).
  double t0 = 0.0;
  Stability classification = Stability::Marginal;
};

struct SpectralReport {
  int freq_height = 0;
  int freq_width = 0;
  ComplexGrid g;
  MethodSpectrum t;
  MethodSpectrum tda;
  /// min |G|^2 over the grid, and refined.
  double u0_grid = 0.0;
  double u0 = 0.0;
  /// max |Im G| over the grid.
  double max_imag = 0.0;
};

SpectralReport analyze(const Kernel& kernel, const AnalysisOptions& options = {});

/// Closed-form iterate after `iterations` steps of T or TDA (lambda 1) started
/// from b = k * x under circular convolution: X - H0^k (1 - G) X per channel.
Image predict_iterate(const Kernel& kernel, const Image& x, Method method, int iterations);

/// `omega1_idx,omega2_idx,H0_T,H0_TDA` with |H0| values, then `#` summary lines.
std::string report_to_csv(const SpectralReport& report);

/// key=value lines: T0, U0 and classification per method.
std::string report_summary(const SpectralReport& report);

}  // namespace revfilt
