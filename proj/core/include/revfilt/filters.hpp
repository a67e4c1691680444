#pragma once

#include <optional>
#include <string>

#include "revfilt/filter.hpp"

namespace revfilt {

/// Convolution with a fixed kernel. Covers every LSI entry of the zoo.
class LinearFilter final : public Filter {
 public:
  LinearFilter(std::string name, Kernel kernel, Boundary boundary, FilterParams params = {});

  Image apply(const Image& x) const override;
  std::string name() const override { return name_; }
  FilterParams params() const override;
  const Kernel* kernel() const noexcept override { return &kernel_; }
  Boundary boundary() const noexcept override { return boundary_; }

 private:
  std::string name_;
  Kernel kernel_;
  Boundary boundary_;
  FilterParams params_;
};

/// Per-channel n x n median, replicate boundary.
class MedianFilter final : public Filter {
 public:
  explicit MedianFilter(int n);

  Image apply(const Image& x) const override;
  std::string name() const override { return "median"; }
  FilterParams params() const override;

 private:
  int n_;
};

/// Gaussian spatial and range weights over a (2*ceil(2*sigma_s)+1)^2 window.
class BilateralFilter final : public Filter {
 public:
  BilateralFilter(double sigma_s, double sigma_r);

  Image apply(const Image& x) const override;
  std::string name() const override { return "bilateral"; }
  FilterParams params() const override;

 private:
  double sigma_s_;
  double sigma_r_;
};

/// Box-filter guided filter with regularizer eps. Self-guided unless
/// guide_sigma is set, in which case the guide is a Gaussian blur of the input.
class GuidedFilter final : public Filter {
 public:
  GuidedFilter(int window, double eps, std::optional<double> guide_sigma = std::nullopt);

  Image apply(const Image& x) const override;
  std::string name() const override { return guide_sigma_ ? "guided_gauss" : "guided"; }
  FilterParams params() const override;

 private:
  int window_;
  double eps_;
  std::optional<double> guide_sigma_;
};

/// Rolling guidance: Gaussian-blurred initial guide, then `iterations`
/// joint-bilateral passes that filter the input under the current guide.
class RollingGuidanceFilter final : public Filter {
 public:
  RollingGuidanceFilter(double sigma_s, double sigma_r, int iterations);

  Image apply(const Image& x) const override;
  std::string name() const override { return "rgf"; }
  FilterParams params() const override;

 private:
  double sigma_s_;
  double sigma_r_;
  int iterations_;
};

/// Joint bilateral: weights from `guide`, values from `input`.
Image joint_bilateral(const Image& input, const Image& guide, double sigma_s, double sigma_r);

/// Guided filter of `input` under `guide` (same shape, per channel).
Image guided_filter(const Image& input, const Image& guide, int window, double eps);

Image median_filter(const Image& x, int n);

FilterPtr make_identity();
FilterPtr make_kernel_filter(Kernel kernel, Boundary boundary = Boundary::Replicate);
FilterPtr make_average(int n, Boundary boundary = Boundary::Replicate);
FilterPtr make_disk(double radius, Boundary boundary = Boundary::Replicate);
FilterPtr make_motion(double length, double angle_degrees, Boundary boundary = Boundary::Replicate);
FilterPtr make_log(int size, double sigma, Boundary boundary = Boundary::Replicate);
FilterPtr make_gaussian(double sigma, std::optional<int> size = std::nullopt,
                        Boundary boundary = Boundary::Replicate);
FilterPtr make_median(int n);
FilterPtr make_bilateral(double sigma_s, double sigma_r);
FilterPtr make_guided(int window, double eps);
FilterPtr make_guided_gaussian(int window, double eps, double sigma);
FilterPtr make_rolling_guidance(double sigma_s, double sigma_r, int iterations);

}  // namespace revfilt
