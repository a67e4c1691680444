#include "revfilt/iteration_log.hpp"

#include <algorithm>
#include <cstdio>

namespace revfilt {

namespace {

std::string format_value(const std::optional<double>& v) {
  if (!v) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

bool IterationLog::has_psnr() const {
  return !samples.empty() &&
         std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.psnr.has_value(); });
}

std::string to_csv(const IterationLog& log) {
  std::string out;
  if (!log.scheme.empty()) out += "# scheme=" + log.scheme + "\n";
  out += "iter,mse,psnr,ssim,rel_err\n";
  for (const auto& s : log.samples) {
    out += std::to_string(s.iteration) + "," + format_value(s.mse) + "," + format_value(s.psnr) +
           "," + format_value(s.ssim) + "," + format_value(s.relative_error) + "\n";
  }
  if (log.diverged_at) out += "# diverged_at=" + std::to_string(*log.diverged_at) + "\n";
  return out;
}

}  // namespace revfilt
