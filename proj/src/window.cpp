#include "oudelay/window.hpp"

#include <cmath>
#include <stdexcept>

namespace oud {

int k_q_budget(const FundamentalSolution& fs, double tol, double t_left_out, double m_guess) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(t_left_out < 0.0)) throw std::invalid_argument("t_left_out must be < 0");
  if (!fs.decay()) throw std::runtime_error("envelope unavailable: fundamental solution has no decay fit");
  const int k_min = static_cast<int>(std::ceil(-t_left_out - 1e-12));
  const double geo = 1.0 / (1.0 - std::exp(-fs.decay()->lambda));
  for (int k = k_min; k <= 400; ++k) {
    const double guard = m_guess + 3.0 * std::sqrt(2.0 * std::log(static_cast<double>(std::max(k, 2))));
    // same certified tail bound the construction uses, with m_guess in place
    // of the realized max |g_k(0)|
    if (guard * fs.envelope(t_left_out + static_cast<double>(k + 1)) * geo < tol) return k;
  }
  throw std::runtime_error("infeasible budget: k_q would exceed 400 terms for this tol");
}

WindowPlan resolve_window(const FundamentalSolution& fs, double tol, double t_left_out,
                          double t_end, double max_shift, int k_f) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  if (!(max_shift >= 0.0)) throw std::invalid_argument("max_shift must be >= 0");
  WindowPlan plan;
  plan.k_f = k_f;
  plan.k_q = k_q_budget(fs, tol, t_left_out);
  // +3 segments of slack: the realized max |g_k(0)| can exceed m_guess
  plan.t_left = -static_cast<double>(plan.k_q + k_f + 1 + 3) - max_shift;
  plan.t_right = t_end + max_shift;
  return plan;
}

}  // namespace oud
