#include "revfilt/reverse.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "driver.hpp"
#include "revfilt/error.hpp"
#include "revfilt/fft.hpp"
#include "revfilt/metrics.hpp"

namespace revfilt {

Method parse_method(std::string_view name) {
  if (name == "t" || name == "T") return Method::T;
  if (name == "r" || name == "R") return Method::R;
  if (name == "p" || name == "P") return Method::P;
  if (name == "f" || name == "F") return Method::F;
  if (name == "tda" || name == "TDA") return Method::TDA;
  throw Error(ErrorKind::InvalidParameter, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::T: return "t";
    case Method::R: return "r";
    case Method::P: return "p";
    case Method::F: return "f";
    case Method::TDA: return "tda";
  }
  return "?";
}

void MethodConfig::validate() const {
  if (method == Method::TDA && !(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "TDA requires 0 < lambda <= 1");
  }
  if (!std::isfinite(lambda) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidParameter, "lambda and alpha must be finite");
  }
  if (max_iterations < 0) throw Error(ErrorKind::InvalidParameter, "max_iterations must be >= 0");
  if (!(f_epsilon > 0.0)) throw Error(ErrorKind::InvalidParameter, "f_epsilon must be positive");
  if (power.max_iterations < 1 || !(power.relative_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "invalid power iteration options");
  }
}

Image guarded(int height, int width, int channels, std::vector<double> values) {
  if (!within_magnitude(values, kDivergenceLimit)) {
    throw Error(ErrorKind::Diverged, "iterate exceeded the magnitude guard");
  }
  return Image(height, width, channels, std::move(values));
}

namespace {

Image residual(const Image& b, const Image& gx) { return image_subtract(b, gx); }

// x + scale * d, through the divergence guard.
Image advance(const Image& x, const Image& d, double scale) {
  require_same_shape(x, d, "advance");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + scale * d[i];
  return guarded(x.height(), x.width(), x.channels(), std::move(out));
}

StepOutput step_t_impl(const Image& x, const Image& b, const Image& gx) {
  Image q = residual(b, gx);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + q[i];
  Image next = guarded(x.height(), x.width(), x.channels(), std::move(out));
  return {std::move(next), {std::move(q), std::nullopt, std::nullopt}};
}

StepOutput step_r_impl(const Image& x, const Image& b, const Image& gx, double alpha,
                       double lambda) {
  Image q = residual(b, gx);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i] + lambda * q[i];
  Image next = guarded(x.height(), x.width(), x.channels(), std::move(out));
  return {std::move(next), {std::move(q), std::nullopt, std::nullopt}};
}

StepOutput step_tda_impl(const Image& x, const Image& b, const Filter& g, const Image& gx,
                         double lambda) {
  Image q = residual(b, gx);
  Image t = image_subtract(g(image_add_scaled(x, q, 1.0)), gx);
  Image next = advance(x, t, lambda);
  return {std::move(next), {std::move(q), std::nullopt, std::move(t)}};
}

StepOutput step_p_impl(const Image& x, const Image& b, const Filter& g, const Image& gx,
                       const PowerIterationOptions& power) {
  Image q = residual(b, gx);
  Image p = image_subtract(g(image_add_scaled(x, q, 1.0)), g(image_add_scaled(x, q, -1.0)));
  const Image d = p_direction(q, p, power);
  Image next = advance(x, d, 1.0);
  return {std::move(next), {std::move(q), std::move(p), std::nullopt}};
}

StepOutput step_f_impl(const Image& x, const Image& b, const Image& gx, double f_epsilon) {
  Image q = residual(b, gx);
  const int h = x.height();
  const int w = x.width();
  std::vector<std::vector<double>> planes;
  for (int c = 0; c < x.channels(); ++c) {
    const ComplexGrid fb = fft2(b.plane(c), h, w);
    const ComplexGrid fx = fft2(x.plane(c), h, w);
    const ComplexGrid fg = fft2(gx.plane(c), h, w);
    ComplexGrid next(h, w);
    for (std::size_t i = 0; i < next.values.size(); ++i) {
      Complex denom = fg.values[i];
      const double mag = std::abs(denom);
      if (mag < f_epsilon) denom = mag == 0.0 ? Complex(f_epsilon, 0.0) : denom * (f_epsilon / mag);
      next.values[i] = fb.values[i] * fx.values[i] / denom;
    }
    planes.push_back(ifft2_real(next));
  }
  std::vector<double> out(x.size());
  const int ch = x.channels();
  for (int c = 0; c < ch; ++c) {
    for (std::size_t i = 0; i < planes[c].size(); ++i) out[i * ch + c] = planes[c][i];
  }
  Image next = guarded(h, w, ch, std::move(out));
  return {std::move(next), {std::move(q), std::nullopt, std::nullopt}};
}

}  // namespace

Image p_direction(const Image& q, const Image& p, const PowerIterationOptions& power) {
  require_same_shape(q, p, "p_direction");
  const int h = q.height();
  const int w = q.width();
  const int ch = q.channels();
  std::vector<double> out(q.size(), 0.0);
  for (int c = 0; c < ch; ++c) {
    const auto qc = q.plane(c);
    const double norm_q = spectral_norm(qc, h, w, power);
    if (norm_q == 0.0) continue;
    const auto pc = p.plane(c);
    const double norm_p = spectral_norm(pc, h, w, power);
    if (norm_p < 1e-12) {
      throw Error(ErrorKind::ZeroDirection, "||p|| vanished while ||q|| > 0");
    }
    const double scale = norm_q / (2.0 * norm_p);
    for (std::size_t i = 0; i < pc.size(); ++i) out[i * ch + c] = scale * pc[i];
  }
  return Image(h, w, ch, std::move(out));
}

Image step_t(const Image& x, const Image& b, const Filter& g) {
  require_same_shape(x, b, "step_t");
  return step_t_impl(x, b, g(x)).next;
}

Image step_r(const Image& x, const Image& b, const Filter& g, double alpha, double lambda) {
  require_same_shape(x, b, "step_r");
  return step_r_impl(x, b, g(x), alpha, lambda).next;
}

Image step_p(const Image& x, const Image& b, const Filter& g, const PowerIterationOptions& power) {
  require_same_shape(x, b, "step_p");
  return step_p_impl(x, b, g, g(x), power).next;
}

Image step_tda(const Image& x, const Image& b, const Filter& g, double lambda) {
  require_same_shape(x, b, "step_tda");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "TDA requires 0 < lambda <= 1");
  }
  return step_tda_impl(x, b, g, g(x), lambda).next;
}

Image step_f(const Image& x, const Image& b, const Filter& g, double f_epsilon) {
  require_same_shape(x, b, "step_f");
  return step_f_impl(x, b, g(x), f_epsilon).next;
}

StepOutput step(const MethodConfig& config, const Image& x, const Image& b, const Filter& g,
                const Image& gx) {
  require_same_shape(x, b, "step");
  require_same_shape(x, gx, "step");
  switch (config.method) {
    case Method::T: return step_t_impl(x, b, gx);
    case Method::R: return step_r_impl(x, b, gx, config.alpha, config.lambda);
    case Method::P: return step_p_impl(x, b, g, gx, config.power);
    case Method::F: return step_f_impl(x, b, gx, config.f_epsilon);
    case Method::TDA: return step_tda_impl(x, b, g, gx, config.lambda);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown method");
}

RunResult run(const MethodConfig& config, const Image& b, const Filter& g,
              const std::optional<Image>& ground_truth, const StoppingPolicy& stop) {
  config.validate();
  const Filter* filter = &g;
  const auto make_update = [&config, &b, filter]() -> detail::UpdateFn {
    return [&config, &b, filter](const Image& x, const Image& gx) {
      return step(config, x, b, *filter, gx).next;
    };
  };
  return detail::drive(b, g, ground_truth, stop, config.max_iterations, make_update);
}

namespace detail {

namespace {

MetricSample measure(int k, const Image& x, const Image& b, const Image& gx,
                     const std::optional<Image>& truth) {
  MetricSample s;
  s.iteration = k;
  s.relative_error = relative_error(b, gx);
  if (truth) {
    s.mse = mse(*truth, x);
    s.psnr = psnr(*truth, x);
    if (truth->height() >= kSsimWindow && truth->width() >= kSsimWindow) s.ssim = ssim(*truth, x);
  }
  return s;
}

RunResult single_pass(const Image& b, const Filter& g, const std::optional<Image>& truth,
                      StopMode mode, int iterations, const UpdateFn& update,
                      const std::string& scheme) {
  RunResult res;
  res.log.scheme = scheme;
  Image x = b;
  Image gx = g(x);
  res.log.samples.push_back(measure(0, x, b, gx, truth));

  // Best iterate by relative error over k >= 1, first index on ties.
  std::optional<Image> best;
  int best_k = 0;
  double best_err = 0.0;
  int k = 0;
  for (k = 1; k <= iterations; ++k) {
    Image next;
    try {
      next = update(x, gx);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Diverged) throw;
      res.log.diverged_at = k;
      break;
    }
    x = std::move(next);
    gx = g(x);
    const MetricSample s = measure(k, x, b, gx, truth);
    res.log.samples.push_back(s);
    if (!best || s.relative_error < best_err) {
      best = x;
      best_k = k;
      best_err = s.relative_error;
    }
  }

  const bool use_best = mode == StopMode::BestTracked || res.log.diverged_at.has_value();
  if (use_best && best) {
    res.image = std::move(*best);
    res.returned_iteration = best_k;
  } else if (use_best) {
    res.image = b;
    res.returned_iteration = 0;
  } else {
    res.image = std::move(x);
    res.returned_iteration = iterations;
  }
  return res;
}

}  // namespace

RunResult drive(const Image& b, const Filter& g, const std::optional<Image>& truth,
                const StoppingPolicy& stop, int max_iterations,
                const std::function<UpdateFn()>& make_update, const std::string& scheme) {
  stop.validate();
  if (truth) require_same_shape(b, *truth, "ground truth");
  if (stop.mode != StopMode::TwoPassRelativeError) {
    return single_pass(b, g, truth, stop.mode, max_iterations, make_update(), scheme);
  }
  const Runner runner = [&](int iterations) {
    return single_pass(b, g, truth, StopMode::Fixed, iterations, make_update(), scheme);
  };
  TwoPassResult tp = two_pass_optimal(runner, stop);
  RunResult res;
  res.image = std::move(tp.image);
  res.log = std::move(tp.log);
  res.returned_iteration = tp.best_iteration;
  return res;
}

}  // namespace detail

}  // namespace revfilt
