#include "mqg/tensor_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mqg {

Matrix row_softmax(const Matrix& scores, const Matrix* bias, const Mask* mask) {
  if (bias != nullptr && (bias->rows() != 1 || bias->cols() != scores.cols())) {
    throw std::invalid_argument("row_softmax: bias shape " + bias->shape_str() +
                                " incompatible with scores " + scores.shape_str());
  }
  if (mask != nullptr && (mask->rows() != scores.rows() || mask->cols() != scores.cols())) {
    throw std::invalid_argument("row_softmax: mask shape mismatch for scores " +
                                scores.shape_str());
  }
  Matrix out(scores.rows(), scores.cols());
  for (int r = 0; r < scores.rows(); ++r) {
    double max_z = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < scores.cols(); ++c) {
      if (mask != nullptr && !mask->allow(r, c)) continue;
      double z = scores(r, c) + (bias != nullptr ? bias->at(0, c) : 0.0);
      max_z = std::max(max_z, z);
    }
    if (max_z == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("row_softmax: fully masked row " + std::to_string(r));
    }
    double denom = 0.0;
    for (int c = 0; c < scores.cols(); ++c) {
      if (mask != nullptr && !mask->allow(r, c)) {
        out(r, c) = 0.0;
        continue;
      }
      double z = scores(r, c) + (bias != nullptr ? bias->at(0, c) : 0.0);
      double e = std::exp(z - max_z);
      out(r, c) = e;
      denom += e;
    }
    for (int c = 0; c < scores.cols(); ++c) out(r, c) /= denom;
  }
  return out;
}

Matrix row_softmax_backward(const Matrix& probs, const Matrix& dprobs) {
  if (!probs.same_shape(dprobs)) {
    throw std::invalid_argument("row_softmax_backward: shape mismatch " + probs.shape_str() +
                                " vs " + dprobs.shape_str());
  }
  Matrix dscores(probs.rows(), probs.cols());
  for (int r = 0; r < probs.rows(); ++r) {
    double dot = 0.0;
    for (int c = 0; c < probs.cols(); ++c) dot += dprobs(r, c) * probs(r, c);
    for (int c = 0; c < probs.cols(); ++c) {
      dscores(r, c) = probs(r, c) * (dprobs(r, c) - dot);
    }
  }
  return dscores;
}

Matrix layer_norm(const Matrix& x, const Matrix& gain, const Matrix& shift, double eps,
                  LayerNormTrace* trace) {
  if (gain.rows() != 1 || gain.cols() != x.cols() || shift.rows() != 1 ||
      shift.cols() != x.cols()) {
    throw std::invalid_argument("layer_norm: gain/shift must be 1x" +
                                std::to_string(x.cols()));
  }
  if (eps <= 0.0) throw std::invalid_argument("layer_norm: eps must be > 0");
  Matrix out(x.rows(), x.cols());
  Matrix normalized(x.rows(), x.cols());
  std::vector<double> inv_std(x.rows());
  const int n = x.cols();
  for (int r = 0; r < x.rows(); ++r) {
    const double* src = x.row_ptr(r);
    double mean = 0.0;
    for (int c = 0; c < n; ++c) mean += src[c];
    mean /= n;
    double var = 0.0;
    for (int c = 0; c < n; ++c) {
      double d = src[c] - mean;
      var += d * d;
    }
    var /= n;
    double is = 1.0 / std::sqrt(var + eps);
    inv_std[r] = is;
    for (int c = 0; c < n; ++c) {
      double xn = (src[c] - mean) * is;
      normalized(r, c) = xn;
      out(r, c) = xn * gain(0, c) + shift(0, c);
    }
  }
  if (trace != nullptr) {
    trace->normalized = std::move(normalized);
    trace->inv_std = std::move(inv_std);
  }
  return out;
}

Matrix layer_norm_backward(const Matrix& dy, const LayerNormTrace& trace, const Matrix& gain,
                           Matrix& dgain, Matrix& dshift) {
  const Matrix& xn = trace.normalized;
  if (!dy.same_shape(xn)) {
    throw std::invalid_argument("layer_norm_backward: shape mismatch");
  }
  const int n = xn.cols();
  Matrix dx(dy.rows(), n);
  for (int r = 0; r < dy.rows(); ++r) {
    double sum_dxn = 0.0;
    double sum_dxn_xn = 0.0;
    for (int c = 0; c < n; ++c) {
      double dxn = dy(r, c) * gain(0, c);
      sum_dxn += dxn;
      sum_dxn_xn += dxn * xn(r, c);
      dgain(0, c) += dy(r, c) * xn(r, c);
      dshift(0, c) += dy(r, c);
    }
    double mean_dxn = sum_dxn / n;
    double mean_dxn_xn = sum_dxn_xn / n;
    for (int c = 0; c < n; ++c) {
      double dxn = dy(r, c) * gain(0, c);
      dx(r, c) = trace.inv_std[r] * (dxn - mean_dxn - xn(r, c) * mean_dxn_xn);
    }
  }
  return dx;
}

CrossEntropyResult cross_entropy_loss(const Matrix& logits, const std::vector<int>& targets,
                                      int pad_id) {
  if (static_cast<int>(targets.size()) != logits.rows()) {
    throw std::invalid_argument("cross_entropy_loss: " + std::to_string(targets.size()) +
                                " targets for " + std::to_string(logits.rows()) + " rows");
  }
  int count = 0;
  for (int t : targets) {
    if (t != pad_id) ++count;
  }
  if (count == 0) throw std::invalid_argument("cross_entropy_loss: all targets are pad");

  CrossEntropyResult result;
  result.logit_grad = Matrix(logits.rows(), logits.cols());
  result.counted_positions = count;
  const int vocab = logits.cols();
  double total = 0.0;
  for (int r = 0; r < logits.rows(); ++r) {
    if (targets[r] == pad_id) continue;
    if (targets[r] < 0 || targets[r] >= vocab) {
      throw std::invalid_argument("cross_entropy_loss: target id " +
                                  std::to_string(targets[r]) + " out of vocab " +
                                  std::to_string(vocab));
    }
    const double* row = logits.row_ptr(r);
    double max_z = row[0];
    for (int c = 1; c < vocab; ++c) max_z = std::max(max_z, row[c]);
    double denom = 0.0;
    for (int c = 0; c < vocab; ++c) denom += std::exp(row[c] - max_z);
    double log_denom = std::log(denom);
    total += -(row[targets[r]] - max_z - log_denom);
    for (int c = 0; c < vocab; ++c) {
      double p = std::exp(row[c] - max_z) / denom;
      result.logit_grad(r, c) = (p - (c == targets[r] ? 1.0 : 0.0)) / count;
    }
  }
  result.loss = total / count;
  return result;
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

Matrix gelu(const Matrix& x) {
  Matrix out = x;
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) {
      double v = x(r, c);
      out(r, c) = 0.5 * v * (1.0 + std::erf(v * kInvSqrt2));
    }
  }
  return out;
}

Matrix gelu_backward(const Matrix& x, const Matrix& dy) {
  if (!x.same_shape(dy)) throw std::invalid_argument("gelu_backward: shape mismatch");
  Matrix dx(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) {
      double v = x(r, c);
      double cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
      double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
      dx(r, c) = dy(r, c) * (cdf + v * pdf);
    }
  }
  return dx;
}

Matrix dropout(const Matrix& x, double rate, Rng& rng, DropoutTrace* trace) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must be in [0,1)");
  if (rate == 0.0) {
    if (trace != nullptr) {
      trace->keep.clear();
      trace->keep_prob = 1.0;
    }
    return x;
  }
  double keep_prob = 1.0 - rate;
  Matrix out(x.rows(), x.cols());
  std::vector<uint8_t> keep(x.size());
  size_t i = 0;
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c, ++i) {
      bool kept = rng.next_uniform() < keep_prob;
      keep[i] = kept ? 1 : 0;
      out(r, c) = kept ? x(r, c) / keep_prob : 0.0;
    }
  }
  if (trace != nullptr) {
    trace->keep = std::move(keep);
    trace->keep_prob = keep_prob;
  }
  return out;
}

Matrix dropout_backward(const Matrix& dy, const DropoutTrace& trace) {
  if (trace.keep.empty()) return dy;
  Matrix dx(dy.rows(), dy.cols());
  size_t i = 0;
  for (int r = 0; r < dy.rows(); ++r) {
    for (int c = 0; c < dy.cols(); ++c, ++i) {
      dx(r, c) = trace.keep[i] ? dy(r, c) / trace.keep_prob : 0.0;
    }
  }
  return dx;
}

std::vector<double> log_softmax_row(const std::vector<double>& logits) {
  double max_z = -std::numeric_limits<double>::infinity();
  for (double v : logits) max_z = std::max(max_z, v);
  double denom = 0.0;
  for (double v : logits) denom += std::exp(v - max_z);
  double log_denom = std::log(denom);
  std::vector<double> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - max_z - log_denom;
  return out;
}

}  // namespace mqg
