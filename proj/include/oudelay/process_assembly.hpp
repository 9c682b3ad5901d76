#pragma once

#include <optional>

#include "oudelay/fundamental_solution.hpp"
#include "oudelay/grid.hpp"
#include "oudelay/left_tail.hpp"

namespace oud {

enum class ProcessKind { delay, anticipation };

/// A fully assembled two-sided process on a finite window, together with the
/// driver and the pieces needed for the time-shift apparatus.
struct ProcessRealization {
  GridPath w;        // driver
  GridPath x_tilde;  // shift-invariant solution, offset-free
  double b0 = 0.0;   // x = x_tilde - b0
  GridPath x;        // the process pinned by X_0 = W_0
  GridPath a_path;   // A = X - W
  ProcessKind kind = ProcessKind::delay;
  double a = 0.0;
  int k_f = 0;
  int k_q = 0;
  double tail_bound = 0.0;
};

/// The shift-invariant solution of dX_s = a X_{s-1} ds + dW_s on
/// [t_left_out, t_end]: the left-bounded construction on [t_left_out, 0]
/// glued to the method-of-steps solve on [0, t_end] through the shared
/// segment on [-1, 0].  Offset-free: computed from raw increments only, so
/// bit-identical under constant shifts of w.
GridPath assemble_tilde(const GridPath& w, double a, const FundamentalSolution& fs, double tol,
                        double t_left_out, double t_end, int k_f = 25,
                        std::optional<int> k_q_override = std::nullopt,
                        const RGrid* r_table = nullptr);

/// b0 = x_left(0) - W_0 (with the boundary convention of construct_left,
/// x_left(0) = q(0) carries the whole series value at 0).
double compute_b0(const LeftTailResult& left, const GridPath& w);

/// Delay process: x = x_tilde - b0, so that X_0 = W_0; drift a (X_{s-1} + b0).
ProcessRealization assemble_delay(const GridPath& w, double a, const FundamentalSolution& fs,
                                  double tol, double t_left_out, double t_end, int k_f = 25,
                                  std::optional<int> k_q_override = std::nullopt,
                                  const RGrid* r_table = nullptr);

/// Anticipation process on [t_end_left, t_right_out]: the delay construction
/// on the time-reversed driver, reversed back; drift -a (X_{s+1} + b0).
ProcessRealization assemble_anticipation(const GridPath& w, double a,
                                         const FundamentalSolution& fs, double tol,
                                         double t_end_left, double t_right_out, int k_f = 25,
                                         std::optional<int> k_q_override = std::nullopt,
                                         const RGrid* r_table = nullptr);

/// W^u = W_{. + u} + A_u * 1, restricted to where the shifted path is known.
GridPath shifted_driver(const GridPath& w, double u, const GridPath& a_path);

struct HomogeneityResult {
  double sup_dev = 0.0;  // sup |X_{t+v}(W) - X_t(W^v)| over the common window
  double b0_dev = 0.0;   // |b0(W^v) - b0(W)|
};

/// Rebuilds the delay process from scratch on the shifted driver W^v and
/// compares it pointwise with the time shift of pr.x.
HomogeneityResult homogeneity_check(const ProcessRealization& pr, double v,
                                    const FundamentalSolution& fs, double tol,
                                    double t_left_out, double t_end, int k_f = 25);

}  // namespace oud
