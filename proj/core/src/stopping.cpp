#include "revfilt/stopping.hpp"

#include <cmath>
#include <string>

#include "revfilt/error.hpp"

namespace revfilt {

StopMode parse_stop_mode(std::string_view name) {
  if (name == "fixed") return StopMode::Fixed;
  if (name == "two-pass" || name == "two_pass" || name == "two_pass_relative_error") {
    return StopMode::TwoPassRelativeError;
  }
  if (name == "best" || name == "best_tracked") return StopMode::BestTracked;
  throw Error(ErrorKind::InvalidParameter, "unknown stop mode '" + std::string(name) + "'");
}

std::string_view to_string(StopMode mode) {
  switch (mode) {
    case StopMode::Fixed: return "fixed";
    case StopMode::TwoPassRelativeError: return "two-pass";
    case StopMode::BestTracked: return "best";
  }
  return "?";
}

void StoppingPolicy::validate() const {
  if (mode == StopMode::TwoPassRelativeError && first_pass_iterations < 1) {
    throw Error(ErrorKind::InvalidParameter, "two-pass stopping needs first_pass_iterations >= 1");
  }
}

int argmin_relative_error(const IterationLog& log) {
  int best = 0;
  double best_err = 0.0;
  for (const MetricSample& s : log.samples) {
    if (s.iteration < 1) continue;
    if (log.diverged_at && s.iteration >= *log.diverged_at) break;
    if (best == 0 || s.relative_error < best_err) {
      best = s.iteration;
      best_err = s.relative_error;
    }
  }
  return best;
}

TwoPassResult two_pass_optimal(const Runner& runner, const StoppingPolicy& policy) {
  if (policy.mode != StopMode::TwoPassRelativeError) {
    throw Error(ErrorKind::InvalidParameter, "two_pass_optimal needs the two-pass stop mode");
  }
  policy.validate();
  RunResult first = runner(policy.first_pass_iterations);
  const int n = argmin_relative_error(first.log);
  TwoPassResult out;
  out.best_iteration = n;
  out.log = std::move(first.log);
  if (n == policy.first_pass_iterations && !out.log.diverged_at) {
    // Pass 1 already ends on the chosen iterate; rerunning would reproduce it.
    out.image = std::move(first.image);
  } else {
    out.image = runner(n).image;
  }
  return out;
}

double improvement_pct(double psnr_k, double input_psnr) {
  if (input_psnr == 0.0 || !std::isfinite(input_psnr)) {
    throw Error(ErrorKind::InvalidParameter, "input PSNR must be finite and nonzero");
  }
  return (psnr_k - input_psnr) / input_psnr * 100.0;
}

std::vector<std::pair<int, double>> improvement_curve(const IterationLog& log, double input_psnr) {
  if (!log.has_psnr()) throw Error(ErrorKind::MissingGroundTruth, "log has no PSNR values");
  std::vector<std::pair<int, double>> out;
  out.reserve(log.samples.size());
  for (const MetricSample& s : log.samples) {
    if (s.psnr) out.emplace_back(s.iteration, improvement_pct(*s.psnr, input_psnr));
  }
  return out;
}

}  // namespace revfilt
