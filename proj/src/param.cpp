#include "mqg/param.h"

#include <cmath>
#include <stdexcept>

namespace mqg {

Parameter make_normal_param(const std::string& name, int rows, int cols, double stddev,
                            Rng& rng) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = stddev * rng.next_normal();
  }
  return Parameter(name, std::move(m));
}

Parameter make_const_param(const std::string& name, int rows, int cols, double value) {
  return Parameter(name, Matrix(rows, cols, value));
}

void adam_step(Parameter& param, AdamState& state, const AdamConfig& cfg) {
  if (state.m.size() == 0) {
    state.m = Matrix(param.value.rows(), param.value.cols());
    state.v = Matrix(param.value.rows(), param.value.cols());
  }
  if (!state.m.same_shape(param.value)) {
    throw std::invalid_argument("adam_step: state shape mismatch for " + param.name);
  }
  ++state.step_count;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  for (int r = 0; r < param.value.rows(); ++r) {
    for (int c = 0; c < param.value.cols(); ++c) {
      double g = param.grad(r, c);
      double m = cfg.beta1 * state.m(r, c) + (1.0 - cfg.beta1) * g;
      double v = cfg.beta2 * state.v(r, c) + (1.0 - cfg.beta2) * g * g;
      state.m(r, c) = m;
      state.v(r, c) = v;
      double m_hat = m / bc1;
      double v_hat = v / bc2;
      param.value(r, c) -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

AdamOptimizer::AdamOptimizer(std::vector<Parameter*> params, AdamConfig cfg)
    : params_(std::move(params)), states_(params_.size()), cfg_(cfg) {}

void AdamOptimizer::zero_grads() {
  for (Parameter* p : params_) p->zero_grad();
}

void AdamOptimizer::step(double grad_scale) {
  if (grad_scale <= 0.0) throw std::invalid_argument("AdamOptimizer::step: bad grad_scale");
  for (size_t i = 0; i < params_.size(); ++i) {
    if (grad_scale != 1.0) params_[i]->grad *= 1.0 / grad_scale;
    adam_step(*params_[i], states_[i], cfg_);
  }
  ++steps_done_;
  zero_grads();
}

}  // namespace mqg
