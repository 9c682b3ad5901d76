#pragma once

#include "oudelay/grid.hpp"

namespace oud {

/// Integrated-equation residual of the delayed drift over [s0, s1]:
///   sup over grid pairs (s, t) of
///   | X_t - X_s - a int_s^t (X_{v-1} + b0) dv - (W_t - W_s) |,
/// evaluated in O(n) through the running defect
///   D(t) = X_t - a * int_{s0}^t (X_{v-1} + b0) dv - W_t
/// (the pairwise residual equals max D - min D).  The drift integral uses the
/// plain trapezoid rule; the residual is first order in dt.
double delay_residual(const GridPath& x, const GridPath& w, double a, double b0, double s0,
                      double s1);

/// Same with the advanced drift -a (X_{v+1} + b0).
double anticipation_residual(const GridPath& x, const GridPath& w, double a, double b0, double s0,
                             double s1);

}  // namespace oud
