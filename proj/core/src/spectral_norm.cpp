#include "revfilt/spectral_norm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "revfilt/error.hpp"

namespace revfilt {

double spectral_norm(std::span<const double> a, int rows, int cols,
                     const PowerIterationOptions& options) {
  if (rows <= 0 || cols <= 0 || a.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorKind::DimensionMismatch, "spectral_norm matrix size");
  }
  std::vector<double> v(cols, 1.0);
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double& e : v) e = dist(rng);
  }
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    const double n = std::sqrt(s);
    if (n > 0.0) {
      for (double& e : x) e /= n;
    }
    return n;
  };
  normalize(v);

  std::vector<double> av(rows);
  std::vector<double> w(cols);
  double lambda = 0.0;
  bool restarted = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    for (int r = 0; r < rows; ++r) {
      const double* row = a.data() + static_cast<std::size_t>(r) * cols;
      double s = 0.0;
      for (int c = 0; c < cols; ++c) s += row[c] * v[c];
      av[r] = s;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int r = 0; r < rows; ++r) {
      const double* row = a.data() + static_cast<std::size_t>(r) * cols;
      const double s = av[r];
      for (int c = 0; c < cols; ++c) w[c] += row[c] * s;
    }
    // v is unit length, so ||A^T A v|| estimates the top eigenvalue of A^T A.
    const double next = normalize(w);
    if (next == 0.0) {
      if (restarted) return 0.0;
      // Start vector was orthogonal to the row space (or A is zero): restart
      // from the basis vector of the largest column, which cannot be.
      restarted = true;
      int best = -1;
      double best_norm = 0.0;
      for (int c = 0; c < cols; ++c) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += a[static_cast<std::size_t>(r) * cols + c] * a[static_cast<std::size_t>(r) * cols + c];
        if (s > best_norm) {
          best_norm = s;
          best = c;
        }
      }
      if (best < 0) return 0.0;
      std::fill(v.begin(), v.end(), 0.0);
      v[best] = 1.0;
      continue;
    }
    v.swap(w);
    const bool converged = std::abs(next - lambda) <= options.relative_tolerance * next;
    lambda = next;
    if (converged) break;
  }
  return std::sqrt(lambda);
}

}  // namespace revfilt
