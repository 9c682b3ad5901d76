#pragma once

#include "oudelay/fundamental_solution.hpp"
#include "oudelay/grid.hpp"

namespace oud {

/// Method-of-steps solve of
///   dX_s = a X_{s-1} ds + dW_s,  s >= 0,   X_u = f(u) on [-1, 0],
/// on [-1, t_end].  The drift integral over each step uses the trapezoid
/// rule on the already-known delayed segment; the noise enters through raw
/// increments of w, so the result is invariant under constant shifts of w.
GridPath solve_forward(const SegmentFunction& f, const GridPath& w, double a, double t_end);

/// The deterministic delay semigroup: u -> (T_s f)(u) = g(s + u), where g
/// solves g' = a g(. - 1) with initial segment f (solve_forward with W = 0).
SegmentFunction semigroup_apply(const SegmentFunction& f, double s, double a);

/// Left-point Ito sum for int_0^{s+u} r(s - v + u) dW_v; exactly 0 when
/// s + u < 0.
double stochastic_convolution(const GridPath& w, const FundamentalSolution& fs, double s,
                              double u);

/// Max deviation over the grid of [0, t_end] between the method-of-steps
/// solution and its variation-of-constants representation
///   X_{s+u} = (T_s f)(u) + (I(s, W))(u).
/// First order in dt (the left-point Ito sum dominates).
double verify_variation_of_constants(const SegmentFunction& f, const GridPath& w, double a,
                                     const FundamentalSolution& fs, double t_end);

}  // namespace oud
