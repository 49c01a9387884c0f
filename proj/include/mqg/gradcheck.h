#pragma once

#include <functional>
#include <vector>

#include "mqg/param.h"
#include "mqg/rng.h"

namespace mqg {

struct GradCheckResult {
  double max_rel_error = 0.0;
  int probes_checked = 0;
  int probes_skipped = 0;
};

// Compares analytic gradients against central differences at probe_count
// randomly chosen scalar parameters. loss_and_grad must zero grads, run a
// full forward/backward, and leave the analytic gradients in param.grad;
// loss_only must evaluate the same loss without touching grads. Probes where
// both the analytic and numeric gradients are < 1e-8 in magnitude are skipped
// (relative error is undefined near zero).
GradCheckResult grad_check(const std::function<double()>& loss_and_grad,
                           const std::function<double()>& loss_only,
                           const std::vector<Parameter*>& params, int probe_count, double h,
                           Rng& rng);

}  // namespace mqg
