#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oudelay/fundamental_solution.hpp"
#include "oudelay/grid.hpp"
#include "oudelay/measure.hpp"
#include "oudelay/process_assembly.hpp"

namespace oud {

enum class DriverKind { bm, delay, anticipation };

/// Bounded test functionals of a path Y, evaluated at the two fixed times
/// s1 = -0.25 and s2 = 0.5:
///   f1(Y) = tanh(Y_{s1})
///   f2(Y) = tanh(Y_{s1}) * exp(-Y_{s2}^2)
///   f3(Y) = cos(Y_{s1} - Y_{s2})
enum class Functional { f1, f2, f3 };

inline constexpr double kFunctionalS1 = -0.25;
inline constexpr double kFunctionalS2 = 0.5;

double functional_value(Functional f, double y_s1, double y_s2);
std::string functional_name(Functional f);
std::string kind_name(DriverKind k);
DriverKind parse_kind(const std::string& s);
Functional parse_functional(const std::string& s);

/// One paired change-of-measure comparison: lhs averages F over the
/// time-shifted path, rhs averages F times the shift density, over the same
/// drivers.
struct DensityReport {
  DriverKind kind = DriverKind::bm;
  Functional functional = Functional::f1;
  double t = 0.0;
  std::int64_t n_samples = 0;
  double lhs_mean = 0.0;
  double rhs_mean = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double paired_se = 0.0;
  double z_score = 0.0;
  bool negative_control = false;
  bool pass = false;  // |lhs_mean - rhs_mean| <= 4 * paired_se
};

/// Density of the time shift for the plain driver: m(W_{-t}) / m(W_0),
/// computed in the log domain.
double rn_density_bm(const GridPath& w, double t, const MeasureModel& m);

/// Same for a constructed process: m(X_{-t}) / m(X_0).
double rn_density_x(const ProcessRealization& pr, double t, const MeasureModel& m);

/// Finite difference (X_{-t}(W + eps*1) - X_{-t}(W)) / eps; the map is
/// exactly affine with unit slope, so the result is 1 up to rounding for any
/// eps > 0.
double grad_x0_check(const GridPath& w, double a, const FundamentalSolution& fs, double tol,
                     double t, double eps, double t_left_out);

/// One (shift, functional) comparison evaluated in a batch.
struct McTask {
  double t = 0.0;
  Functional f = Functional::f1;
  bool negative_control = false;  // replace the density by 1 for t != 0
};

struct McParams {
  DriverKind kind = DriverKind::bm;
  double a = -0.5;
  double dt = 1.0 / 256.0;
  double tol = 1e-4;  // left-tail truncation tolerance (constructed kinds)
  int k_f = 18;
  MeasureModel measure{};
};

/// Paired Monte Carlo over n driver samples, evaluating every task on the
/// same sampled paths.  Per-sample seeds are derived from (base_seed, i) and
/// all reductions use a fixed pairwise summation order, so the reports are
/// byte-identical for any worker count.
std::vector<DensityReport> mc_run(const McParams& params, const std::vector<McTask>& tasks,
                                  std::int64_t n, std::uint64_t base_seed, int workers = 1);

DensityReport mc_shift_identity(const McParams& params, Functional f, double t, std::int64_t n,
                                std::uint64_t base_seed, int workers = 1);

DensityReport mc_negative_control(const McParams& params, Functional f, double t, std::int64_t n,
                                  std::uint64_t base_seed, int workers = 1);

}  // namespace oud
