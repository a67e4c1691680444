#include "revfilt/optimizers.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "driver.hpp"
#include "revfilt/error.hpp"

namespace revfilt {

Scheme parse_scheme(std::string_view name) {
  if (name == "gd") return Scheme::GD;
  if (name == "mgd") return Scheme::MGD;
  if (name == "nag") return Scheme::NAG;
  if (name == "rmsprop") return Scheme::RMSprop;
  if (name == "adam") return Scheme::ADAM;
  if (name == "adadelta") return Scheme::Adadelta;
  throw Error(ErrorKind::InvalidParameter, "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::GD: return "gd";
    case Scheme::MGD: return "mgd";
    case Scheme::NAG: return "nag";
    case Scheme::RMSprop: return "rmsprop";
    case Scheme::ADAM: return "adam";
    case Scheme::Adadelta: return "adadelta";
  }
  return "?";
}

BiasCorrection parse_bias_correction(std::string_view name) {
  if (name == "table") return BiasCorrection::Table;
  if (name == "standard") return BiasCorrection::Standard;
  throw Error(ErrorKind::InvalidParameter, "unknown bias correction '" + std::string(name) + "'");
}

std::string_view to_string(BiasCorrection mode) {
  return mode == BiasCorrection::Table ? "table" : "standard";
}

OptimizerConfig OptimizerConfig::defaults(Scheme scheme) {
  OptimizerConfig c;
  c.scheme = scheme;
  if (scheme == Scheme::ADAM) c.lambda = 0.1;
  if (scheme == Scheme::Adadelta) c.epsilon = 1e-6;
  return c;
}

void OptimizerConfig::validate() const {
  for (double v : {lambda, beta, beta1, beta2, epsilon}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "optimizer parameters must be finite");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParameter, "epsilon must be positive");
  if (beta < 0.0 || beta >= 1.0 || beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw Error(ErrorKind::InvalidParameter, "beta values must lie in [0,1)");
  }
  if (max_iterations < 0) throw Error(ErrorKind::InvalidParameter, "max_iterations must be >= 0");
}

OptimizerState OptimizerState::zeros(const Image& like) {
  OptimizerState s;
  s.v = Image(like.height(), like.width(), like.channels());
  s.m = s.v;
  s.u = s.v;
  return s;
}

ReverseOracle::ReverseOracle(Method method, Image b, FilterPtr g, PowerIterationOptions power)
    : method_(method), b_(std::move(b)), g_(std::move(g)), power_(power) {
  if (method_ != Method::T && method_ != Method::TDA && method_ != Method::P) {
    throw Error(ErrorKind::InvalidParameter, "gradient oracles exist for t, tda and p only");
  }
  if (!g_) throw Error(ErrorKind::InvalidParameter, "oracle needs a filter");
}

Image ReverseOracle::gradient(const Image& x) const { return gradient(x, (*g_)(x)); }

Image ReverseOracle::gradient(const Image& x, const Image& gx) const {
  require_same_shape(x, b_, "oracle");
  const Image q = image_subtract(b_, gx);
  switch (method_) {
    case Method::T:
      return image_scale(q, -1.0);
    case Method::TDA:
      return image_scale(image_subtract((*g_)(image_add_scaled(x, q, 1.0)), gx), -1.0);
    case Method::P: {
      const Image p = image_subtract((*g_)(image_add_scaled(x, q, 1.0)),
                                     (*g_)(image_add_scaled(x, q, -1.0)));
      return image_scale(p_direction(q, p, power_), -1.0);
    }
    default:
      break;
  }
  throw Error(ErrorKind::InvalidParameter, "unsupported oracle method");
}

namespace {

// Accumulators may overflow long before the iterate trips its own guard.
Image state_image(const Image& like, std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Diverged, "optimizer state became non-finite");
  }
  return Image(like.height(), like.width(), like.channels(), std::move(values));
}

void ensure_state(OptimizerState& s, const Image& x) {
  if (!s.v.same_shape(x)) s.v = Image(x.height(), x.width(), x.channels());
  if (!s.m.same_shape(x)) s.m = Image(x.height(), x.width(), x.channels());
  if (!s.u.same_shape(x)) s.u = Image(x.height(), x.width(), x.channels());
}

Image check_gradient(const Image& x, Image grad) {
  require_same_shape(x, grad, "gradient");
  return grad;
}

Image apply_gd(const Image& x, const Image& grad, double lambda) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - lambda * grad[i];
  return guarded(x.height(), x.width(), x.channels(), std::move(out));
}

Image apply_momentum(const Image& x, OptimizerState& s, const Image& grad, double lambda,
                     double beta) {
  std::vector<double> v(x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    v[i] = beta * s.v[i] - lambda * grad[i];
    out[i] = x[i] + v[i];
  }
  Image next = guarded(x.height(), x.width(), x.channels(), std::move(out));
  s.v = state_image(x, std::move(v));
  ++s.k;
  return next;
}

Image apply_rmsprop(const Image& x, OptimizerState& s, const Image& grad, double lambda,
                    double beta, double epsilon) {
  std::vector<double> v(x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    v[i] = beta * s.v[i] + (1.0 - beta) * grad[i] * grad[i];
    out[i] = x[i] - lambda * grad[i] / std::sqrt(v[i] + epsilon);
  }
  Image next = guarded(x.height(), x.width(), x.channels(), std::move(out));
  s.v = state_image(x, std::move(v));
  ++s.k;
  return next;
}

Image apply_adam(const Image& x, OptimizerState& s, const Image& grad, const OptimizerConfig& c) {
  const int k = s.k + 1;
  double c1 = 1.0 - c.beta1;
  double c2 = 1.0 - c.beta2;
  if (c.bias_correction == BiasCorrection::Standard) {
    c1 = 1.0 - std::pow(c.beta1, k);
    c2 = 1.0 - std::pow(c.beta2, k);
  }
  std::vector<double> m(x.size());
  std::vector<double> v(x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    m[i] = c.beta1 * s.m[i] + (1.0 - c.beta1) * grad[i];
    v[i] = c.beta2 * s.v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    out[i] = x[i] - c.lambda * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
  Image next = guarded(x.height(), x.width(), x.channels(), std::move(out));
  s.m = state_image(x, std::move(m));
  s.v = state_image(x, std::move(v));
  s.k = k;
  return next;
}

Image apply_adadelta(const Image& x, OptimizerState& s, const Image& grad, double beta,
                     double epsilon) {
  std::vector<double> v(x.size());
  std::vector<double> u(x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    v[i] = beta * s.v[i] + (1.0 - beta) * grad[i] * grad[i];
    const double dx = std::sqrt(s.u[i] + epsilon) / std::sqrt(v[i] + epsilon) * grad[i];
    out[i] = x[i] - dx;
    u[i] = beta * s.u[i] + (1.0 - beta) * dx * dx;
  }
  Image next = guarded(x.height(), x.width(), x.channels(), std::move(out));
  s.v = state_image(x, std::move(v));
  s.u = state_image(x, std::move(u));
  ++s.k;
  return next;
}

}  // namespace

Image gd_step(const Image& x, const GradientOracle& oracle, double lambda) {
  return apply_gd(x, check_gradient(x, oracle.gradient(x)), lambda);
}

Image mgd_step(const Image& x, OptimizerState& state, const GradientOracle& oracle, double lambda,
               double beta) {
  ensure_state(state, x);
  return apply_momentum(x, state, check_gradient(x, oracle.gradient(x)), lambda, beta);
}

Image nag_step(const Image& x, OptimizerState& state, const GradientOracle& oracle, double lambda,
               double beta) {
  ensure_state(state, x);
  const Image ahead = image_add_scaled(x, state.v, beta);
  return apply_momentum(x, state, check_gradient(x, oracle.gradient(ahead)), lambda, beta);
}

Image rmsprop_step(const Image& x, OptimizerState& state, const GradientOracle& oracle,
                   double lambda, double beta, double epsilon) {
  ensure_state(state, x);
  return apply_rmsprop(x, state, check_gradient(x, oracle.gradient(x)), lambda, beta, epsilon);
}

Image adam_step(const Image& x, OptimizerState& state, const GradientOracle& oracle,
                const OptimizerConfig& config) {
  ensure_state(state, x);
  return apply_adam(x, state, check_gradient(x, oracle.gradient(x)), config);
}

Image adadelta_step(const Image& x, OptimizerState& state, const GradientOracle& oracle,
                    double beta, double epsilon) {
  ensure_state(state, x);
  return apply_adadelta(x, state, check_gradient(x, oracle.gradient(x)), beta, epsilon);
}

Image scheme_step(const OptimizerConfig& c, const Image& x, OptimizerState& state,
                  const GradientOracle& oracle, const Image* gx) {
  ensure_state(state, x);
  if (c.scheme == Scheme::NAG) return nag_step(x, state, oracle, c.lambda, c.beta);
  const Image grad = check_gradient(x, gx ? oracle.gradient(x, *gx) : oracle.gradient(x));
  switch (c.scheme) {
    case Scheme::GD: {
      Image next = apply_gd(x, grad, c.lambda);
      ++state.k;
      return next;
    }
    case Scheme::MGD: return apply_momentum(x, state, grad, c.lambda, c.beta);
    case Scheme::RMSprop: return apply_rmsprop(x, state, grad, c.lambda, c.beta, c.epsilon);
    case Scheme::ADAM: return apply_adam(x, state, grad, c);
    case Scheme::Adadelta: return apply_adadelta(x, state, grad, c.beta, c.epsilon);
    case Scheme::NAG: break;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown scheme");
}

RunResult run_accelerated(const OptimizerConfig& config, const GradientOracle& oracle,
                          const Image& b, const std::optional<Image>& ground_truth,
                          const StoppingPolicy& stop) {
  config.validate();
  const auto make_update = [&config, &oracle, &b]() -> detail::UpdateFn {
    auto state = std::make_shared<OptimizerState>(OptimizerState::zeros(b));
    return [&config, &oracle, state](const Image& x, const Image& gx) {
      return scheme_step(config, x, *state, oracle, &gx);
    };
  };
  return detail::drive(b, oracle.filter(), ground_truth, stop, config.max_iterations, make_update,
                       std::string(to_string(config.scheme)));
}

}  // namespace revfilt
