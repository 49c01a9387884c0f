#pragma once

#include <string>
#include <vector>

#include "mqg/matrix.h"
#include "mqg/param.h"
#include "mqg/tensor_ops.h"

namespace mqg {

// y = x * W + b, W is [in x out].
class Linear {
 public:
  Linear() = default;
  Linear(const std::string& name, int in_dim, int out_dim, double init_std, Rng& rng);

  Matrix forward(const Matrix& x) const;
  // Accumulates into W.grad / b.grad; returns dx. x is the forward input.
  Matrix backward(const Matrix& x, const Matrix& dy);

  void collect_params(std::vector<Parameter*>& out);

  Parameter weight;
  Parameter bias;
};

class LayerNormLayer {
 public:
  LayerNormLayer() = default;
  LayerNormLayer(const std::string& name, int dim, double eps = 1e-5);

  Matrix forward(const Matrix& x, LayerNormTrace* trace = nullptr) const;
  Matrix backward(const Matrix& dy, const LayerNormTrace& trace);

  void collect_params(std::vector<Parameter*>& out);

  Parameter gain;
  Parameter shift;
  double eps = 1e-5;
};

struct FeedForwardTrace {
  Matrix input;
  Matrix hidden_pre;  // before activation
  Matrix hidden_post;
};

// Two linear maps with GELU between them.
class FeedForward {
 public:
  FeedForward() = default;
  FeedForward(const std::string& name, int d_model, int ffn_dim, double init_std, Rng& rng);

  Matrix forward(const Matrix& x, FeedForwardTrace* trace = nullptr) const;
  Matrix backward(const Matrix& dy, const FeedForwardTrace& trace);

  void collect_params(std::vector<Parameter*>& out);

  Linear expand;
  Linear contract;
};

}  // namespace mqg
