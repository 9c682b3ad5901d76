#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oudelay/fundamental_solution.hpp"
#include "oudelay/grid.hpp"

namespace oud {

/// The left-bounded solution on [t_left, 0] together with the series data
/// that built it.
struct LeftTailResult {
  double a = 0.0;
  int k_f = 0;          // series depth per segment
  int k_q = 0;          // number of segments / q-terms
  double tail_bound = 0.0;  // certified truncation bound for the q series
  double max_g_end = 0.0;   // max_k |g_k(0)|, boundedness diagnostic
  SegmentFunction f;        // = g[0]
  std::vector<SegmentFunction> g;  // g[k] on [-1,0], k = 0..k_q
  GridPath q;       // on [t_left, 0], offset-free
  GridPath x_left;  // on [t_left, 0], offset-free
};

/// r(v + k) tabulated on the grid of [t_left, 0] for k = 0..k_q.  The table
/// depends only on (a, grid, k_q); sharing it across Monte Carlo samples
/// removes the polynomial evaluations from the per-path cost.
struct RGrid {
  std::int64_t steps_per_unit = 0;
  std::int64_t left_index = 0;  // grid index of t_left
  std::vector<std::vector<double>> values;  // values[k][i], i from t_left to 0

  static RGrid build(const FundamentalSolution& fs, std::int64_t steps_per_unit,
                     double t_left, int k_q);
};

/// The truncated iterated-integral series on [-1, 0]:
///   v0 -> sum_{k=1}^{k_f} a^k (k-fold integral from -1 of the shifted driver
///   increments) + (W_{v0 - c} - W_{-c-1}),  c = k_offset.
/// k_offset = 0 gives f, k_offset = k gives g_k.  Levels are integrated
/// innermost-out with the factor a applied per level; only raw driver
/// increments enter, so the value is bit-invariant under constant shifts.
SegmentFunction series_f(const GridPath& w, double a, int k_offset, int k_f);

/// q(v) = sum_{k=0}^{k_q} g_k(0) r(v + k) on the grid of [t_left, 0]
/// (fixed ascending-k summation order; terms with v + k < 0 vanish).
GridPath series_q(const GridPath& w, double a, const FundamentalSolution& fs, int k_q, int k_f,
                  double t_left);

/// Builds the left-bounded solution on [t_left, 0]:
///   x(v) = g_k(v + k) + q(v) on [-k-1, -k),  k = floor(-v),
/// with the right-segment formula at exact integer boundaries, where the
/// segment part vanishes and x(-k) = q(-k); in particular x(0) = q(0) is
/// the continuous extension.  k_q is auto-selected from the fitted decay
/// envelope unless overridden; k_f defaults to 25 (factorial decay puts the
/// dropped terms below machine precision for |a| < 1).
LeftTailResult construct_left(const GridPath& w, double a, const FundamentalSolution& fs,
                              double tol, double t_left,
                              std::optional<int> k_q_override = std::nullopt, int k_f = 25,
                              const RGrid* r_table = nullptr);

/// Max jump between the adjacent segment formulas at the interior integer
/// boundaries of the construction.
double segment_glue_check(const LeftTailResult& result, const FundamentalSolution& fs);

}  // namespace oud
