#include "mqg/layers.h"

namespace mqg {

Linear::Linear(const std::string& name, int in_dim, int out_dim, double init_std, Rng& rng)
    : weight(make_normal_param(name + ".weight", in_dim, out_dim, init_std, rng)),
      bias(make_const_param(name + ".bias", 1, out_dim, 0.0)) {}

Matrix Linear::forward(const Matrix& x) const {
  return add_row_broadcast(matmul(x, weight.value), bias.value);
}

Matrix Linear::backward(const Matrix& x, const Matrix& dy) {
  weight.grad += matmul_tn(x, dy);
  bias.grad += sum_rows(dy);
  return matmul_nt(dy, weight.value);
}

void Linear::collect_params(std::vector<Parameter*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

LayerNormLayer::LayerNormLayer(const std::string& name, int dim, double eps_)
    : gain(make_const_param(name + ".gain", 1, dim, 1.0)),
      shift(make_const_param(name + ".shift", 1, dim, 0.0)),
      eps(eps_) {}

Matrix LayerNormLayer::forward(const Matrix& x, LayerNormTrace* trace) const {
  return layer_norm(x, gain.value, shift.value, eps, trace);
}

Matrix LayerNormLayer::backward(const Matrix& dy, const LayerNormTrace& trace) {
  return layer_norm_backward(dy, trace, gain.value, gain.grad, shift.grad);
}

void LayerNormLayer::collect_params(std::vector<Parameter*>& out) {
  out.push_back(&gain);
  out.push_back(&shift);
}

FeedForward::FeedForward(const std::string& name, int d_model, int ffn_dim, double init_std,
                         Rng& rng)
    : expand(name + ".expand", d_model, ffn_dim, init_std, rng),
      contract(name + ".contract", ffn_dim, d_model, init_std, rng) {}

Matrix FeedForward::forward(const Matrix& x, FeedForwardTrace* trace) const {
  Matrix hidden_pre = expand.forward(x);
  Matrix hidden_post = gelu(hidden_pre);
  Matrix out = contract.forward(hidden_post);
  if (trace != nullptr) {
    trace->input = x;
    trace->hidden_pre = std::move(hidden_pre);
    trace->hidden_post = std::move(hidden_post);
  }
  return out;
}

Matrix FeedForward::backward(const Matrix& dy, const FeedForwardTrace& trace) {
  Matrix dhidden_post = contract.backward(trace.hidden_post, dy);
  Matrix dhidden_pre = gelu_backward(trace.hidden_pre, dhidden_post);
  return expand.backward(trace.input, dhidden_pre);
}

void FeedForward::collect_params(std::vector<Parameter*>& out) {
  expand.collect_params(out);
  contract.collect_params(out);
}

}  // namespace mqg
