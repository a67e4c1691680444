#pragma once

#include "revfilt/image.hpp"

namespace revfilt {

/// PSNR reported for identical images (mse == 0).
inline constexpr double kMaxPsnr = 99.0;

/// SSIM uses an 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 1.
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

double mse(const Image& a, const Image& b);

/// Peak value 1.0; returns kMaxPsnr when the images are identical.
double psnr(const Image& reference, const Image& test);

/// Mean SSIM over all fully-contained windows, averaged over channels.
/// Throws ImageTooSmall when either side is shorter than the window.
double ssim(const Image& reference, const Image& test);

/// ||b - g(x_k)||^2 / ||b||^2 with the Frobenius norm over all channels.
double relative_error(const Image& b, const Image& gxk);

}  // namespace revfilt
