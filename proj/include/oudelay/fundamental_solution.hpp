#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace oud {

/// Exponential bound |r(s)| <= C * exp(-lambda * s), fitted empirically.
struct DecayEnvelope {
  double coeff = 0.0;   // C
  double lambda = 0.0;  // decay rate, > 0 for a in (-1, 0)

  double at(double s) const;
};

/// The fundamental solution r(s; a) of the delay renewal equation
///   r(s) = 1_{[0,inf)}(s) + a * int_0^s r(u - 1) 1_{[1,inf)}(u) du,
/// evaluated through its per-interval polynomial form
///   r(s) = sum_{l=0}^{k-1} (a^l / l!) (s - l)^l   on [k-1, k).
/// r vanishes on (-inf, 0) and beyond max_interval (where the fitted
/// envelope certifies the tail is below the caller's tolerance).
class FundamentalSolution {
 public:
  static FundamentalSolution build(double a, int max_interval);

  double a() const { return a_; }
  int max_interval() const { return max_interval_; }

  /// Right-continuous evaluation (r(0) = 1).
  double eval(double s) const;

  /// Left limit r(s-); differs from eval only at s = 0 and, up to rounding,
  /// at the interval joints.
  double eval_left(double s) const;

  /// Max residual of the renewal equation over the grid of [0, s_max],
  /// with the integral term computed by composite trapezoid started at the
  /// integrand's breakpoint u = 1.  dt must be 1/n for integer n >= 2.
  double verify_renewal_residual(double s_max, double dt) const;

  /// Least-squares fit of log running-unit-window maxima of |r| against s.
  /// Throws if |r| underflows on the whole window.
  DecayEnvelope estimate_decay(double s_min, double s_max) const;

  const std::optional<DecayEnvelope>& decay() const { return decay_; }
  void set_decay(const DecayEnvelope& d) { decay_ = d; }

  /// Envelope value at s; throws if no decay fit is available.
  double envelope(double s) const;

 private:
  FundamentalSolution() = default;

  double eval_interval(int k, double s) const;  // polynomial of [k-1, k)

  double a_ = 0.0;
  int max_interval_ = 0;
  std::vector<double> coeff_;  // coeff_[l] = a^l / l!
  std::optional<DecayEnvelope> decay_;
};

}  // namespace oud
