#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mqg/layers.h"
#include "mqg/matrix.h"
#include "mqg/param.h"

namespace mqg {

struct AttentionConfig {
  int d_model = 0;
  int heads = 0;

  int d_k() const { return d_model / heads; }
  void validate() const;
};

struct AttentionTrace {
  Matrix q_in, k_in, v_in;
  Matrix q, k, v;             // projected, heads still concatenated
  std::vector<Matrix> probs;  // one [Lq x Lk] attention matrix per head
  Matrix concat;
};

struct AttentionGrads {
  Matrix dq_in, dk_in, dv_in;
  std::vector<double> dbias;  // gradient of the shared additive bias, if requested
};

// Multi-head attention with learned Q/K/V/output projections. The optional
// additive bias is one score per key position, shared by every head and every
// query row, added after the 1/sqrt(d_k) scaling and before the softmax; a
// constant bias therefore cannot change the output (softmax shift invariance).
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(const std::string& name, const AttentionConfig& config, double init_std,
                     Rng& rng);

  Matrix forward(const Matrix& q_in, const Matrix& k_in, const Matrix& v_in,
                 const Mask* mask = nullptr, const std::vector<double>* bias = nullptr,
                 AttentionTrace* trace = nullptr) const;

  AttentionGrads backward(const Matrix& dy, const AttentionTrace& trace,
                          bool want_dbias = false);

  // Incremental decoding support: pre-projected key/value caches.
  Matrix project_keys(const Matrix& x) const { return k_proj_.forward(x); }
  Matrix project_values(const Matrix& x) const { return v_proj_.forward(x); }
  // Attends q_in over already-projected keys/values (no trace; inference only).
  Matrix attend_projected(const Matrix& q_in, const Matrix& k, const Matrix& v,
                          const Mask* mask = nullptr,
                          const std::vector<double>* bias = nullptr) const;

  void collect_params(std::vector<Parameter*>& out);
  const AttentionConfig& config() const { return config_; }

 private:
  Matrix attend(const Matrix& q, const Matrix& k, const Matrix& v, const Mask* mask,
                const std::vector<double>* bias, AttentionTrace* trace) const;

  AttentionConfig config_;
  Linear q_proj_, k_proj_, v_proj_, out_proj_;
};

// Norm(x + sublayer_out), the residual wrapper around every sub-layer.
Matrix residual_norm(const Matrix& x, const Matrix& sublayer_out, const LayerNormLayer& norm,
                     LayerNormTrace* trace = nullptr);

}  // namespace mqg
