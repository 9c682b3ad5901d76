#pragma once

#include "oudelay/fundamental_solution.hpp"

namespace oud {

/// Driver-window budget for one construction: the minimal sampled window of W
/// that lets every downstream operation run without exhausting data.
struct WindowPlan {
  double t_left = 0.0;   // required left edge of the W window
  double t_right = 0.0;  // required right edge
  int k_f = 0;           // series depth per segment
  int k_q = 0;           // predicted number of q-series terms
};

/// Predicted k_q for construct_left's auto selection, using m_guess in place
/// of the path-dependent max |g_k(0)| (the selection guard adds a
/// 3*sqrt(2 log k) allowance on top, matching construct_left).  Throws if the
/// budget exceeds 400 terms.
int k_q_budget(const FundamentalSolution& fs, double tol, double t_left_out,
               double m_guess = 6.0);

/// Minimal W window for building a process on [t_left_out, t_end] and then
/// shifting it by up to max_shift in either direction.  The left extent is
/// k_q + k_f + 1 plus a few segments of slack for the path-dependent part of
/// the k_q selection.
WindowPlan resolve_window(const FundamentalSolution& fs, double tol, double t_left_out,
                          double t_end, double max_shift = 0.0, int k_f = 25);

}  // namespace oud
