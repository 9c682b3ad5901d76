#include "oudelay/process_assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oudelay/forward_solver.hpp"

namespace oud {

namespace {

SegmentFunction last_segment(const GridPath& p) {
  const std::int64_t n = p.steps_per_unit();
  std::vector<double> v(static_cast<std::size_t>(n + 1));
  for (std::int64_t i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = p.raw(i - n);
  return SegmentFunction(n, std::move(v));
}

GridPath glue_tilde(const LeftTailResult& left, const GridPath& w, double a, double t_end) {
  const std::int64_t n = w.steps_per_unit();
  const GridPath fwd = solve_forward(last_segment(left.x_left), w, a, t_end);
  const std::int64_t lo = left.x_left.left_index();
  const std::int64_t hi = grid_index(t_end, n);
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t g = lo; g < 0; ++g) out[static_cast<std::size_t>(g - lo)] = left.x_left.raw(g);
  for (std::int64_t g = 0; g <= hi; ++g) out[static_cast<std::size_t>(g - lo)] = fwd.raw(g);
  return GridPath(n, lo, 0.0, std::move(out));
}

}  // namespace

GridPath assemble_tilde(const GridPath& w, double a, const FundamentalSolution& fs, double tol,
                        double t_left_out, double t_end, int k_f,
                        std::optional<int> k_q_override, const RGrid* r_table) {
  const LeftTailResult left =
      construct_left(w, a, fs, tol, t_left_out, k_q_override, k_f, r_table);
  return glue_tilde(left, w, a, t_end);
}

double compute_b0(const LeftTailResult& left, const GridPath& w) {
  return left.x_left.raw(0) - w.value(0);
}

ProcessRealization assemble_delay(const GridPath& w, double a, const FundamentalSolution& fs,
                                  double tol, double t_left_out, double t_end, int k_f,
                                  std::optional<int> k_q_override, const RGrid* r_table) {
  const LeftTailResult left =
      construct_left(w, a, fs, tol, t_left_out, k_q_override, k_f, r_table);
  GridPath x_tilde = glue_tilde(left, w, a, t_end);
  const double b0 = compute_b0(left, w);
  // independent recomputation of the pinning constant from the glued path
  if (std::abs((x_tilde.raw(0) - w.value(0)) - b0) > 1e-8) {
    throw std::runtime_error("internal error: b0 disagrees with x_tilde(0) - W_0");
  }

  const std::int64_t n = w.steps_per_unit();
  const std::int64_t lo = x_tilde.left_index();
  const std::int64_t hi = x_tilde.right_index();
  GridPath x(n, lo, -b0, std::vector<double>(x_tilde.raw_values().begin(),
                                             x_tilde.raw_values().end()));
  std::vector<double> a_vals(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t g = lo; g <= hi; ++g) {
    a_vals[static_cast<std::size_t>(g - lo)] = x.value(g) - w.value(g);
  }

  ProcessRealization pr{w,
                        std::move(x_tilde),
                        b0,
                        std::move(x),
                        GridPath(n, lo, 0.0, std::move(a_vals)),
                        ProcessKind::delay,
                        a,
                        k_f,
                        left.k_q,
                        left.tail_bound};
  return pr;
}

ProcessRealization assemble_anticipation(const GridPath& w, double a,
                                         const FundamentalSolution& fs, double tol,
                                         double t_end_left, double t_right_out, int k_f,
                                         std::optional<int> k_q_override, const RGrid* r_table) {
  ProcessRealization pr = assemble_delay(w.reverse_time(), a, fs, tol, -t_right_out,
                                         -t_end_left, k_f, k_q_override, r_table);
  pr.w = w;
  pr.x_tilde = pr.x_tilde.reverse_time();
  pr.x = pr.x.reverse_time();
  pr.a_path = pr.a_path.reverse_time();
  pr.kind = ProcessKind::anticipation;
  return pr;
}

GridPath shifted_driver(const GridPath& w, double u, const GridPath& a_path) {
  const double a_u = a_path.value_at(u);
  return w.shift_time(-u).shift_constant(a_u);
}

HomogeneityResult homogeneity_check(const ProcessRealization& pr, double v,
                                    const FundamentalSolution& fs, double tol,
                                    double t_left_out, double t_end, int k_f) {
  if (pr.kind != ProcessKind::delay) throw std::invalid_argument("homogeneity_check expects a delay realization");
  const GridPath wv = shifted_driver(pr.w, v, pr.a_path);
  const ProcessRealization pr2 =
      assemble_delay(wv, pr.a, fs, tol, t_left_out, t_end, k_f);

  const std::int64_t n = pr.x.steps_per_unit();
  const std::int64_t vi = grid_index(v, n);
  const std::int64_t lo = std::max(pr2.x.left_index(), pr.x.left_index() - vi);
  const std::int64_t hi = std::min(pr2.x.right_index(), pr.x.right_index() - vi);
  if (hi < lo) throw window_error("no overlap between shifted and reconstructed windows");

  HomogeneityResult res;
  for (std::int64_t g = lo; g <= hi; ++g) {
    res.sup_dev = std::max(res.sup_dev, std::abs(pr.x.value(g + vi) - pr2.x.value(g)));
  }
  res.b0_dev = std::abs(pr2.b0 - pr.b0);
  return res;
}

}  // namespace oud
