#include "mqg/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mqg {

GradCheckResult grad_check(const std::function<double()>& loss_and_grad,
                           const std::function<double()>& loss_only,
                           const std::vector<Parameter*>& params, int probe_count, double h,
                           Rng& rng) {
  if (h < 1e-6 || h > 1e-4) {
    throw std::invalid_argument("grad_check: h must be in [1e-6, 1e-4]");
  }
  if (params.empty()) throw std::invalid_argument("grad_check: no parameters");

  loss_and_grad();

  size_t total_scalars = 0;
  for (const Parameter* p : params) total_scalars += p->value.size();
  if (total_scalars == 0) throw std::invalid_argument("grad_check: empty parameters");

  GradCheckResult result;
  for (int probe = 0; probe < probe_count; ++probe) {
    size_t flat = rng.next_below(total_scalars);
    Parameter* target = nullptr;
    for (Parameter* p : params) {
      if (flat < p->value.size()) {
        target = p;
        break;
      }
      flat -= p->value.size();
    }
    int r = static_cast<int>(flat) / target->value.cols();
    int c = static_cast<int>(flat) % target->value.cols();

    double analytic = target->grad(r, c);
    double saved = target->value(r, c);
    target->value(r, c) = saved + h;
    double loss_plus = loss_only();
    target->value(r, c) = saved - h;
    double loss_minus = loss_only();
    target->value(r, c) = saved;
    double numeric = (loss_plus - loss_minus) / (2.0 * h);

    if (std::abs(analytic) < 1e-8 && std::abs(numeric) < 1e-8) {
      ++result.probes_skipped;
      continue;
    }
    double rel = std::abs(analytic - numeric) / std::max(std::abs(analytic), std::abs(numeric));
    result.max_rel_error = std::max(result.max_rel_error, rel);
    ++result.probes_checked;
  }
  return result;
}

}  // namespace mqg
