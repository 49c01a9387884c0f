#pragma once

#include <string>
#include <vector>

#include "mqg/matrix.h"
#include "mqg/rng.h"

namespace mqg {

// A trainable tensor with its gradient accumulator.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

  void zero_grad() { grad.fill(0.0); }
};

Parameter make_normal_param(const std::string& name, int rows, int cols, double stddev,
                            Rng& rng);
Parameter make_const_param(const std::string& name, int rows, int cols, double value);

struct AdamState {
  Matrix m;
  Matrix v;
  long step_count = 0;
};

struct AdamConfig {
  double lr = 3e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update from param.grad; deterministic.
void adam_step(Parameter& param, AdamState& state, const AdamConfig& cfg);

// Owns per-parameter Adam state for a list of parameters (single writer).
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Parameter*> params, AdamConfig cfg);

  void zero_grads();
  // Applies one update using the current accumulated grads, scaled by
  // 1/grad_scale (the number of accumulated examples), then re-zeroes grads.
  void step(double grad_scale = 1.0);

  const std::vector<Parameter*>& params() const { return params_; }
  std::vector<AdamState>& states() { return states_; }
  const AdamConfig& config() const { return cfg_; }
  long step_count() const { return steps_done_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<AdamState> states_;
  AdamConfig cfg_;
  long steps_done_ = 0;
};

}  // namespace mqg
