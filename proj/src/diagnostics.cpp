#include "oudelay/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oud {

namespace {

double residual_impl(const GridPath& x, const GridPath& w, double drift_coeff, double b0,
                     double s0, double s1, std::int64_t lag) {
  const std::int64_t n = x.steps_per_unit();
  if (w.steps_per_unit() != n) throw std::invalid_argument("grid mismatch between x and w");
  const std::int64_t g0 = grid_index(s0, n);
  const std::int64_t g1 = grid_index(s1, n);
  if (g1 <= g0) throw std::invalid_argument("empty residual window");
  const double dt = 1.0 / static_cast<double>(n);

  double integral = 0.0;
  double d_min = x.value(g0) - w.value(g0);
  double d_max = d_min;
  for (std::int64_t g = g0; g < g1; ++g) {
    integral += 0.5 * dt * ((x.value(g + lag) + b0) + (x.value(g + 1 + lag) + b0));
    const double d = x.value(g + 1) - drift_coeff * integral - w.value(g + 1);
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
  }
  return d_max - d_min;
}

}  // namespace

double delay_residual(const GridPath& x, const GridPath& w, double a, double b0, double s0,
                      double s1) {
  return residual_impl(x, w, a, b0, s0, s1, -x.steps_per_unit());
}

double anticipation_residual(const GridPath& x, const GridPath& w, double a, double b0, double s0,
                             double s1) {
  return residual_impl(x, w, -a, b0, s0, s1, x.steps_per_unit());
}

}  // namespace oud
