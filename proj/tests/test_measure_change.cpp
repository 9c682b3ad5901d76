#include <doctest.h>

#include <cmath>
#include <vector>

#include "oudelay/measure_change.hpp"
#include "oudelay/path_sampler.hpp"
#include "oudelay/window.hpp"

using namespace oud;

TEST_CASE("driver-shift density matches the Gaussian ratio") {
  // path with W_{-1} = 1 and W_0 = 0
  GridPath w(4, -8, 0.0, std::vector<double>{0, 0, 0, 0, 1, 0.5, 0.25, 0.1, 0, 0, 0, 0, 0});
  const MeasureModel m;
  CHECK(rn_density_bm(w, 0.0, m) == 1.0);
  CHECK(rn_density_bm(w, 1.0, m) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(rn_density_bm(w, 1.0, m) > 0.0);
}

TEST_CASE("the density ratio inverts along the shifted path") {
  const MeasureModel m(0.2, 1.3);
  const GridPath w = sample_w(-3.0, 3.0, 0.25, m, 301);
  for (double t : {0.25, 1.0, 2.0}) {
    const double forward = rn_density_bm(w, t, m);
    // density of the opposite shift, evaluated on the t-shifted path
    const double backward = rn_density_bm(w.shift_time(t), -t, m);
    CHECK(forward * backward == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("process density agrees with its log-domain recomputation") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, 1e-6, -2.0, 1.0);
  const MeasureModel m;
  const GridPath w = sample_w(plan.t_left, plan.t_right, 1.0 / 64.0, m, 311);
  const ProcessRealization pr = assemble_delay(w, a, fs, 1e-6, -2.0, 1.0);
  CHECK(rn_density_x(pr, 0.0, m) == 1.0);
  const double d = rn_density_x(pr, 0.5, m);
  const double ref = m.pdf(pr.x.value_at(-0.5)) / m.pdf(pr.x.value_at(0.0));
  CHECK(d > 0.0);
  CHECK(d == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("the process is affine in the time-0 value with unit slope") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, 1e-6, -2.0, 0.0);
  const MeasureModel m;
  const GridPath w = sample_w(plan.t_left, 1.0, 1.0 / 64.0, m, 321);
  for (double eps : {1e-3, 1.0}) {
    CHECK(std::abs(grad_x0_check(w, a, fs, 1e-6, 0.5, eps, -2.0) - 1.0) <= 1e-9);
    CHECK(std::abs(grad_x0_check(w, a, fs, 1e-6, 0.0, eps, -2.0) - 1.0) <= 1e-9);
  }
}

TEST_CASE("a zero shift produces an exactly paired estimator") {
  McParams p;  // bm defaults
  p.dt = 0.25;
  const DensityReport r = mc_shift_identity(p, Functional::f2, 0.0, 2000, 401);
  CHECK(r.lhs_mean == r.rhs_mean);
  CHECK(r.paired_se == 0.0);
  CHECK(r.z_score == 0.0);
  CHECK(r.pass);
}

TEST_CASE("the driver-shift identity passes at desk scale") {
  McParams p;
  p.dt = 0.25;
  const DensityReport r = mc_shift_identity(p, Functional::f2, 0.5, 4000, 411);
  CHECK(r.n_samples == 4000);
  CHECK(r.pass);
  CHECK(std::abs(r.z_score) <= 4.0);
}

TEST_CASE("dropping the density is detected (statistical power)") {
  McParams p;
  p.dt = 0.25;
  p.measure = MeasureModel(1.0, 0.5);
  const DensityReport r = mc_negative_control(p, Functional::f1, 2.0, 4000, 421);
  CHECK(r.negative_control);
  CHECK(std::abs(r.z_score) > 4.0);
  CHECK_FALSE(r.pass);
}

TEST_CASE("constructed-process batches run and stay near the identity") {
  McParams p;
  p.kind = DriverKind::delay;
  p.a = -0.5;
  p.dt = 1.0 / 64.0;
  p.tol = 1e-3;
  p.k_f = 12;
  const DensityReport r = mc_shift_identity(p, Functional::f1, 0.5, 500, 431);
  CHECK(r.paired_se > 0.0);
  CHECK(std::abs(r.lhs_mean - r.rhs_mean) <= 4.0 * r.paired_se + 2e-2);
}

TEST_CASE("reports are byte-identical across worker counts") {
  McParams p;
  p.kind = DriverKind::delay;
  p.a = -0.5;
  p.dt = 1.0 / 32.0;
  p.tol = 1e-3;
  p.k_f = 10;
  const std::vector<McTask> tasks = {{0.5, Functional::f1, false}, {1.0, Functional::f3, false}};
  const auto one = mc_run(p, tasks, 512, 441, 1);
  const auto three = mc_run(p, tasks, 512, 441, 3);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].lhs_mean == three[i].lhs_mean);
    CHECK(one[i].rhs_mean == three[i].rhs_mean);
    CHECK(one[i].lhs_se == three[i].lhs_se);
    CHECK(one[i].paired_se == three[i].paired_se);
    CHECK(one[i].z_score == three[i].z_score);
  }
}
