#pragma once

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "revfilt/image.hpp"
#include "revfilt/iteration_log.hpp"

namespace revfilt {

enum class StopMode {
  /// Run the full budget; return the last iterate (best-so-far on divergence).
  Fixed,
  /// Pass 1 finds n = argmin e_k, pass 2 reruns exactly n iterations.
  TwoPassRelativeError,
  /// Single pass returning the iterate with the smallest e_k.
  BestTracked,
};

StopMode parse_stop_mode(std::string_view name);
std::string_view to_string(StopMode mode);

struct StoppingPolicy {
  StopMode mode = StopMode::Fixed;
  /// Pass-1 length for TwoPassRelativeError; must be >= 1 in that mode.
  int first_pass_iterations = 0;

  void validate() const;
};

struct RunResult {
  Image image;
  IterationLog log;
  /// Index of the iterate held in `image`.
  int returned_iteration = 0;
};

/// Runs a fixed-mode reversal for exactly the given number of iterations.
using Runner = std::function<RunResult(int iterations)>;

struct TwoPassResult {
  Image image;
  int best_iteration = 0;
  /// Log of the first pass.
  IterationLog log;
};

/// argmin over k >= 1 of the relative error, first index on ties, restricted
/// to iterates before divergence. Returns 0 when no iterate qualifies.
int argmin_relative_error(const IterationLog& log);

TwoPassResult two_pass_optimal(const Runner& runner, const StoppingPolicy& policy);

/// Percentage improvement (p_k - p_0) / p_0 * 100.
double improvement_pct(double psnr_k, double input_psnr);

/// Improvement per logged iteration; throws MissingGroundTruth when the log
/// has no PSNR values.
std::vector<std::pair<int, double>> improvement_curve(const IterationLog& log, double input_psnr);

}  // namespace revfilt
