#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mqg/matrix.h"
#include "mqg/rng.h"

namespace mqg {

// Row-wise softmax with an optional additive bias vector (broadcast over all
// rows, added after any scaling the caller has applied) and an optional
// boolean mask. Masked positions get probability exactly 0; a fully masked
// row is an error. Stabilized by per-row max subtraction.
Matrix row_softmax(const Matrix& scores, const Matrix* bias = nullptr,
                   const Mask* mask = nullptr);

// d(scores) given the forward output and upstream gradient. The bias gradient
// is the column sum of the returned matrix, accumulated by the caller.
Matrix row_softmax_backward(const Matrix& probs, const Matrix& dprobs);

struct LayerNormTrace {
  Matrix normalized;           // x_hat, per-row mean 0 / var 1
  std::vector<double> inv_std; // 1 / sqrt(var + eps) per row
};

Matrix layer_norm(const Matrix& x, const Matrix& gain, const Matrix& shift, double eps,
                  LayerNormTrace* trace = nullptr);
// Returns dx; accumulates parameter gradients into dgain / dshift (1 x cols).
Matrix layer_norm_backward(const Matrix& dy, const LayerNormTrace& trace,
                           const Matrix& gain, Matrix& dgain, Matrix& dshift);

struct CrossEntropyResult {
  double loss = 0.0;
  Matrix logit_grad;
  int counted_positions = 0;
};

// Mean negative log-likelihood over non-pad positions; gradient rows are
// (softmax - one_hot) / count at non-pad positions and zero at pad positions.
CrossEntropyResult cross_entropy_loss(const Matrix& logits, const std::vector<int>& targets,
                                      int pad_id);

// Exact GELU (erf form); smooth, so finite-difference checks stay tight.
Matrix gelu(const Matrix& x);
Matrix gelu_backward(const Matrix& x, const Matrix& dy);

struct DropoutTrace {
  std::vector<uint8_t> keep;
  double keep_prob = 1.0;
};

// Inverted dropout; identity when rate == 0.
Matrix dropout(const Matrix& x, double rate, Rng& rng, DropoutTrace* trace);
Matrix dropout_backward(const Matrix& dy, const DropoutTrace& trace);

// log(softmax(row)) of a single row vector, stabilized.
std::vector<double> log_softmax_row(const std::vector<double>& logits);

}  // namespace mqg
