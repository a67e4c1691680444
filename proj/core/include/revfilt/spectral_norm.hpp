#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace revfilt {

struct PowerIterationOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-6;
  /// Unset: deterministic all-ones start. Set: uniform random start from
  /// this seed.
  std::optional<std::uint64_t> seed;
};

/// Largest singular value of a row-major rows x cols matrix, by power
/// iteration on A^T A.
double spectral_norm(std::span<const double> matrix, int rows, int cols,
                     const PowerIterationOptions& options = {});

}  // namespace revfilt
