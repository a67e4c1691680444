#pragma once

#include <optional>
#include <string_view>

#include "revfilt/filter.hpp"
#include "revfilt/image.hpp"
#include "revfilt/spectral_norm.hpp"
#include "revfilt/stopping.hpp"

namespace revfilt {

enum class Method { T, R, P, F, TDA };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

/// Candidate iterates with a non-finite value or |v| above this are rejected.
inline constexpr double kDivergenceLimit = 1e6;

struct MethodConfig {
  Method method = Method::TDA;
  /// Step size: TDA (must lie in (0,1]) and R.
  double lambda = 1.0;
  /// R-method contraction weight.
  double alpha = 1.0;
  int max_iterations = 100;
  /// F-method: spectral denominators smaller than this are raised to it.
  double f_epsilon = 1e-6;
  /// P-method spectral norms.
  PowerIterationOptions power;

  void validate() const;
};

/// q_k = b - g(x_k) plus the method-specific second query:
/// p_k = g(x+q) - g(x-q) for P, t_k = g(x+q) - g(x) for TDA.
struct StepIntermediates {
  Image q;
  std::optional<Image> p;
  std::optional<Image> t;
};

struct StepOutput {
  Image next;
  StepIntermediates intermediates;
};

// Single updates. Each throws Error(Diverged) when the candidate iterate
// trips the magnitude guard.

/// x + q.
Image step_t(const Image& x, const Image& b, const Filter& g);
/// alpha*x + lambda*q.
Image step_r(const Image& x, const Image& b, const Filter& g, double alpha, double lambda);
/// x + (||q|| / 2||p||) p with ||.|| the per-channel spectral norm.
Image step_p(const Image& x, const Image& b, const Filter& g, const PowerIterationOptions& power = {});
/// x + lambda * (g(x+q) - g(x)).
Image step_tda(const Image& x, const Image& b, const Filter& g, double lambda);
/// Newton-style inversion in the Fourier domain: F^-1(F(b) F(x) / F(g(x))).
Image step_f(const Image& x, const Image& b, const Filter& g, double f_epsilon = 1e-6);

/// One update of the configured method given g(x) already evaluated.
StepOutput step(const MethodConfig& config, const Image& x, const Image& b, const Filter& g,
                const Image& gx);

/// (||q|| / 2||p||) p per channel; a channel with ||q|| = 0 contributes zero.
/// Throws ZeroDirection when ||p|| < 1e-12 while ||q|| > 0.
Image p_direction(const Image& q, const Image& p, const PowerIterationOptions& power = {});

/// Throws Diverged unless every value passes the magnitude guard.
Image guarded(int height, int width, int channels, std::vector<double> values);

/// Iterates from x0 = b. Logs a MetricSample per iterate (MSE/PSNR/SSIM only
/// with a ground truth). Divergence is recorded in the log, not thrown.
RunResult run(const MethodConfig& config, const Image& b, const Filter& g,
              const std::optional<Image>& ground_truth = std::nullopt,
              const StoppingPolicy& stop = {});

}  // namespace revfilt
