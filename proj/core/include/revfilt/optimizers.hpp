#pragma once

#include <optional>
#include <string_view>

#include "revfilt/filter.hpp"
#include "revfilt/image.hpp"
#include "revfilt/reverse.hpp"
#include "revfilt/spectral_norm.hpp"
#include "revfilt/stopping.hpp"

namespace revfilt {

enum class Scheme { GD, MGD, NAG, RMSprop, ADAM, Adadelta };

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);

/// ADAM moment correction: `Table` divides by (1-beta1), (1-beta2) at every
/// step; `Standard` divides by (1-beta1^k), (1-beta2^k).
enum class BiasCorrection { Table, Standard };

BiasCorrection parse_bias_correction(std::string_view name);
std::string_view to_string(BiasCorrection mode);

struct OptimizerConfig {
  Scheme scheme = Scheme::GD;
  double lambda = 1.0;
  double beta = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  BiasCorrection bias_correction = BiasCorrection::Table;
  int max_iterations = 100;

  /// lambda 1 (0.1 for ADAM), beta 0.9, beta1 0.9, beta2 0.999, epsilon
  /// 1e-8 (1e-6 for Adadelta).
  static OptimizerConfig defaults(Scheme scheme);
  void validate() const;
};

/// Zero-initialized accumulators; k counts completed steps.
struct OptimizerState {
  Image v;
  Image m;
  Image u;
  int k = 0;

  static OptimizerState zeros(const Image& like);
};

/// Approximate gradient of the reversal cost at x.
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;
  virtual Image gradient(const Image& x) const = 0;
  /// Same as gradient(x) when gx = g(x) is already known.
  virtual Image gradient(const Image& x, const Image& gx) const {
    (void)gx;
    return gradient(x);
  }
  /// The filter g used by the driver to compute relative errors.
  virtual const Filter& filter() const = 0;
};

/// T: -q.  TDA: -(g(x+q) - g(x)).  P: -(||q|| / 2||p||) p.
class ReverseOracle final : public GradientOracle {
 public:
  /// method must be T, TDA or P.
  ReverseOracle(Method method, Image b, FilterPtr g, PowerIterationOptions power = {});

  Image gradient(const Image& x) const override;
  Image gradient(const Image& x, const Image& gx) const override;
  const Filter& filter() const override { return *g_; }
  Method method() const noexcept { return method_; }
  const Image& observed() const noexcept { return b_; }

 private:
  Method method_;
  Image b_;
  FilterPtr g_;
  PowerIterationOptions power_;
};

// Single steps. The state is updated in place; new iterates go through the
// divergence guard and throw Error(Diverged) when it trips.

/// x - lambda * grad f(x).
Image gd_step(const Image& x, const GradientOracle& oracle, double lambda);
/// v = beta v - lambda grad f(x); x + v.
Image mgd_step(const Image& x, OptimizerState& state, const GradientOracle& oracle, double lambda,
               double beta);
/// v = beta v - lambda grad f(x + beta v); x + v.
Image nag_step(const Image& x, OptimizerState& state, const GradientOracle& oracle, double lambda,
               double beta);
/// v = beta v + (1-beta) grad^2; x - lambda grad / sqrt(v + eps).
Image rmsprop_step(const Image& x, OptimizerState& state, const GradientOracle& oracle,
                   double lambda, double beta, double epsilon);
Image adam_step(const Image& x, OptimizerState& state, const GradientOracle& oracle,
                const OptimizerConfig& config);
/// Step size comes from the u/v ratio alone; there is no lambda.
Image adadelta_step(const Image& x, OptimizerState& state, const GradientOracle& oracle,
                    double beta, double epsilon);

/// One step of the configured scheme. gx, when given, must equal g(x) and
/// saves a filter call for every scheme except NAG.
Image scheme_step(const OptimizerConfig& config, const Image& x, OptimizerState& state,
                  const GradientOracle& oracle, const Image* gx = nullptr);

/// Same driver contract as run(): x0 = b, one log sample per iterate,
/// divergence recorded in the log. The log carries the scheme name.
RunResult run_accelerated(const OptimizerConfig& config, const GradientOracle& oracle,
                          const Image& b, const std::optional<Image>& ground_truth = std::nullopt,
                          const StoppingPolicy& stop = {});

}  // namespace revfilt
