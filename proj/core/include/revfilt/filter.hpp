#pragma once

#include <map>
#include <memory>
#include <string>

#include "revfilt/convolve.hpp"
#include "revfilt/image.hpp"
#include "revfilt/kernel.hpp"

namespace revfilt {

using FilterParams = std::map<std::string, std::string>;

/// The black box g(.): a deterministic, shape-preserving image map that the
/// reverse methods may only evaluate.
class Filter {
 public:
  virtual ~Filter() = default;

  virtual Image apply(const Image& x) const = 0;
  virtual std::string name() const = 0;
  virtual FilterParams params() const = 0;

  /// Convolution kernel for linear shift-invariant filters, else null.
  virtual const Kernel* kernel() const noexcept { return nullptr; }
  virtual Boundary boundary() const noexcept { return Boundary::Replicate; }

  Image operator()(const Image& x) const { return apply(x); }
};

using FilterPtr = std::shared_ptr<const Filter>;

}  // namespace revfilt
