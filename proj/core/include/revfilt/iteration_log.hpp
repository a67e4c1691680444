#pragma once

#include <optional>
#include <string>
#include <vector>

namespace revfilt {

/// Metrics for one iterate. mse/psnr/ssim need a ground truth and are empty
/// without one; ssim is also empty for images smaller than its window.
struct MetricSample {
  int iteration = 0;
  std::optional<double> mse;
  std::optional<double> psnr;
  std::optional<double> ssim;
  double relative_error = 0.0;
};

struct IterationLog {
  std::vector<MetricSample> samples;
  std::optional<int> diverged_at;
  /// Optimizer scheme name, emitted as a `# scheme=` comment when set.
  std::string scheme;

  bool has_psnr() const;
};

/// CSV with header `iter,mse,psnr,ssim,rel_err`, `nan` for absent metrics.
std::string to_csv(const IterationLog& log);

}  // namespace revfilt
