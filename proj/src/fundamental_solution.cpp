#include "oudelay/fundamental_solution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oudelay/grid.hpp"
#include "oudelay/quadrature.hpp"

namespace oud {

double DecayEnvelope::at(double s) const { return coeff * std::exp(-lambda * s); }

FundamentalSolution FundamentalSolution::build(double a, int max_interval) {
  if (!(a > -1.0 && a < 0.0)) {
    throw std::invalid_argument("a must lie in (-1, 0)");
  }
  if (max_interval < 1) throw std::invalid_argument("max_interval must be >= 1");

  FundamentalSolution fs;
  fs.a_ = a;
  fs.max_interval_ = max_interval;
  fs.coeff_.resize(static_cast<std::size_t>(max_interval));
  fs.coeff_[0] = 1.0;
  // a^l / l! via the term ratio; never overflows for |a| < 1.
  for (int l = 1; l < max_interval; ++l) {
    fs.coeff_[static_cast<std::size_t>(l)] =
        fs.coeff_[static_cast<std::size_t>(l - 1)] * a / static_cast<double>(l);
  }
  if (max_interval >= 20) {
    fs.decay_ = fs.estimate_decay(5.0, std::min(15.0, static_cast<double>(max_interval)));
  }
  return fs;
}

double FundamentalSolution::eval_interval(int k, double s) const {
  // Interval [k-1, k): sum_{l=0}^{k-1} coeff_[l] * (s - l)^l, ascending l.
  double total = 0.0;
  for (int l = 0; l < k; ++l) {
    const double x = s - static_cast<double>(l);
    if (l == 0) {
      total += coeff_[0];
      continue;
    }
    if (x <= 0.0) continue;  // only possible at the left joint, where the term is 0
    const double lx = static_cast<double>(l) * std::log(x);
    if (lx < 600.0) {
      total += coeff_[static_cast<std::size_t>(l)] * std::pow(x, l);
    } else {
      // log-domain fallback for deep intervals where (s-l)^l alone overflows
      const double mag = static_cast<double>(l) * std::log(-a_) -
                         std::lgamma(static_cast<double>(l) + 1.0) + lx;
      const double sign = (l % 2 != 0) ? -1.0 : 1.0;  // a < 0
      total += sign * std::exp(mag);
    }
  }
  return total;
}

double FundamentalSolution::eval(double s) const {
  if (s < 0.0) return 0.0;
  const int k = static_cast<int>(std::floor(s)) + 1;
  if (k > max_interval_) {
    // right edge of the table: the next interval's extra term vanishes there
    if (s == static_cast<double>(max_interval_)) return eval_interval(max_interval_, s);
    return 0.0;
  }
  return eval_interval(k, s);
}

double FundamentalSolution::eval_left(double s) const {
  if (s <= 0.0) return 0.0;
  const int k = static_cast<int>(std::ceil(s));
  if (k > max_interval_) return 0.0;
  return eval_interval(k, s);
}

double FundamentalSolution::verify_renewal_residual(double s_max, double dt) const {
  const std::int64_t n = steps_per_unit_of(dt);
  if (n < 2) throw std::invalid_argument("dt must be 1/n with n >= 2");
  const std::int64_t m = grid_index(s_max, n);
  double worst = 0.0;
  double acc = 0.0;  // trapezoid of r(u-1) from u = 1, the integrand breakpoint
  double prev = eval(0.0);
  for (std::int64_t i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n);
    if (i > n) {
      const double cur = eval(s - 1.0);
      acc += 0.5 * dt * (prev + cur);
      prev = cur;
    }
    const double res = eval(s) - 1.0 - a_ * acc;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

DecayEnvelope FundamentalSolution::estimate_decay(double s_min, double s_max) const {
  if (!(s_max - s_min >= 5.0)) {
    throw std::invalid_argument("decay fit needs a window of length >= 5");
  }
  const int windows = static_cast<int>(std::floor(s_max - s_min));
  const int fine = 128;
  // Unit-window running maxima of |r| at their argmax positions; r oscillates
  // through zeros, so a pointwise log fit would be ill-posed.
  std::vector<double> pos, peak;
  for (int j = 0; j < windows; ++j) {
    const double s0 = s_min + static_cast<double>(j);
    double best = 0.0, arg = s0;
    for (int i = 0; i <= fine; ++i) {
      const double s = s0 + static_cast<double>(i) / fine;
      const double v = std::abs(eval(s));
      if (v > best) {
        best = v;
        arg = s;
      }
    }
    if (best > 1e-300) {
      pos.push_back(arg);
      peak.push_back(best);
    }
  }
  if (pos.size() < 2) {
    throw std::runtime_error("|r| underflows on the fit window; shrink s_max");
  }
  // One-sided trimmed least squares: windows without an oscillation crest sit
  // below the amplitude envelope and would tilt the slope, so refit keeping
  // only the points near or above the current line until the kept set is
  // stable. Monotone |r| keeps every point and reduces to a plain fit.
  std::vector<char> keep(peak.size(), 1);
  double slope = 0.0;
  for (int iter = 0; iter < 6; ++iter) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < peak.size(); ++i) {
      if (!keep[i]) continue;
      const double y = std::log(peak[i]);
      sx += pos[i];
      sy += y;
      sxx += pos[i] * pos[i];
      sxy += pos[i] * y;
      ++n;
    }
    if (n < 2) break;
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    int dropped = 0;
    for (std::size_t i = 0; i < peak.size(); ++i) {
      const char k = (std::log(peak[i]) >= slope * pos[i] + intercept - 0.15) ? 1 : 0;
      if (keep[i] && !k) ++dropped;
      keep[i] = k;
    }
    if (dropped == 0) break;
  }
  DecayEnvelope env;
  env.lambda = -slope;
  // calibrate the constant so the envelope bounds |r| on the whole fit window
  double coeff = 0.0;
  for (int i = 0; i <= windows * fine; ++i) {
    const double s = s_min + static_cast<double>(i) / fine;
    coeff = std::max(coeff, std::abs(eval(s)) * std::exp(env.lambda * s));
  }
  env.coeff = coeff;
  return env;
}

double FundamentalSolution::envelope(double s) const {
  if (!decay_) throw std::runtime_error("no decay envelope fitted");
  return decay_->at(s);
}

}  // namespace oud
