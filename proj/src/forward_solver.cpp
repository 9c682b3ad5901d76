#include "oudelay/forward_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oud {

GridPath solve_forward(const SegmentFunction& f, const GridPath& w, double a, double t_end) {
  const std::int64_t n = f.steps_per_unit;
  if (w.steps_per_unit() != n) throw std::invalid_argument("grid mismatch between f and w");
  const std::int64_t m = grid_index(t_end, n);
  if (m < 0) throw std::invalid_argument("t_end must be >= 0");
  if (m > 0 && !w.covers(0.0, t_end)) {
    throw window_error("driver does not cover [0, t_end]");
  }
  const double dt = 1.0 / static_cast<double>(n);
  std::vector<double> x(static_cast<std::size_t>(n + m + 1));
  for (std::int64_t i = 0; i <= n; ++i) {
    x[static_cast<std::size_t>(i)] = f.values[static_cast<std::size_t>(i)];
  }
  // step from global time g to g+1; delayed values at g-n, g+1-n are known
  for (std::int64_t g = 0; g < m; ++g) {
    const std::size_t i = static_cast<std::size_t>(g + n);
    x[i + 1] = x[i] +
               a * 0.5 * dt * (x[i - static_cast<std::size_t>(n)] + x[i + 1 - static_cast<std::size_t>(n)]) +
               (w.raw(g + 1) - w.raw(g));
  }
  return GridPath(n, -n, 0.0, std::move(x));
}

SegmentFunction semigroup_apply(const SegmentFunction& f, double s, double a) {
  const std::int64_t n = f.steps_per_unit;
  const std::int64_t si = grid_index(s, n);
  if (si < 0) throw std::invalid_argument("semigroup time must be >= 0");
  if (si == 0) return f;
  GridPath zero = GridPath::zero(n, -1.0, s);
  GridPath g = solve_forward(f, zero, a, s);
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (std::int64_t i = 0; i <= n; ++i) {
    out[static_cast<std::size_t>(i)] = g.raw(si - n + i);  // g(s + u), u = -1 + i/n
  }
  return SegmentFunction(n, std::move(out));
}

double stochastic_convolution(const GridPath& w, const FundamentalSolution& fs, double s,
                              double u) {
  const std::int64_t n = w.steps_per_unit();
  const std::int64_t si = grid_index(s, n);
  const std::int64_t ui = grid_index(u, n);
  if (si < 0) throw std::invalid_argument("s must be >= 0");
  if (ui < -n || ui > 0) throw std::invalid_argument("u must lie in [-1, 0]");
  const std::int64_t tau = si + ui;
  if (tau < 0) return 0.0;
  if (tau > 0 && !w.covers_index(tau)) throw window_error("driver does not cover [0, s+u]");
  const double dt = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::int64_t i = 0; i < tau; ++i) {
    total += fs.eval(static_cast<double>(tau - i) * dt) * (w.raw(i + 1) - w.raw(i));
  }
  return total;
}

double verify_variation_of_constants(const SegmentFunction& f, const GridPath& w, double a,
                                     const FundamentalSolution& fs, double t_end) {
  const std::int64_t n = f.steps_per_unit;
  const std::int64_t m = grid_index(t_end, n);
  GridPath x = solve_forward(f, w, a, t_end);
  GridPath zero = GridPath::zero(n, -1.0, t_end);
  GridPath det = solve_forward(f, zero, a, t_end);  // (T_s f)(u) = det(s + u)
  const double dt = 1.0 / static_cast<double>(n);
  double worst = 0.0;
  for (std::int64_t tau = 0; tau <= m; ++tau) {
    double conv = 0.0;
    for (std::int64_t i = 0; i < tau; ++i) {
      conv += fs.eval(static_cast<double>(tau - i) * dt) * (w.raw(i + 1) - w.raw(i));
    }
    const double dev = x.raw(tau) - det.raw(tau) - conv;
    worst = std::max(worst, std::abs(dev));
  }
  return worst;
}

}  // namespace oud
