#include <doctest.h>

#include <cmath>
#include <vector>

#include "oudelay/diagnostics.hpp"
#include "oudelay/path_sampler.hpp"
#include "oudelay/process_assembly.hpp"
#include "oudelay/window.hpp"

using namespace oud;

namespace {

GridPath ramp(std::int64_t spu, double t_left, double t_right) {
  const std::int64_t lo = grid_index(t_left, spu);
  const std::int64_t hi = grid_index(t_right, spu);
  std::vector<double> v(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t g = lo; g <= hi; ++g) {
    v[static_cast<std::size_t>(g - lo)] = static_cast<double>(g) / static_cast<double>(spu);
  }
  return GridPath(spu, lo, 0.0, std::move(v));
}

}  // namespace

TEST_CASE("zero driver assembles to the zero process") {
  const FundamentalSolution fs = FundamentalSolution::build(-0.5, 40);
  const GridPath w = GridPath::zero(64, -64.0, 64.0);
  const GridPath xt = assemble_tilde(w, -0.5, fs, 1e-8, -3.0, 2.0);
  for (double v : xt.raw_values()) CHECK(v == 0.0);
  const ProcessRealization pr = assemble_delay(w, -0.5, fs, 1e-8, -3.0, 2.0);
  CHECK(pr.b0 == 0.0);
  for (std::int64_t g = pr.x.left_index(); g <= pr.x.right_index(); ++g) {
    CHECK(pr.x.value(g) == 0.0);
  }
  const ProcessRealization pa = assemble_anticipation(w, -0.5, fs, 1e-8, -2.0, 3.0);
  for (std::int64_t g = pa.x.left_index(); g <= pa.x.right_index(); ++g) {
    CHECK(pa.x.value(g) == 0.0);
  }
}

TEST_CASE("ramp driver reproduces the closed-form pinning constant") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const GridPath w = ramp(256, -60.0, 1.0);
  const LeftTailResult left = construct_left(w, a, fs, 1e-8, -2.0);
  const double f0 = (std::exp(a) - 1.0) / a;
  double r_sum = 0.0;
  for (int k = 0; k <= left.k_q; ++k) r_sum += fs.eval(static_cast<double>(k));
  CHECK(compute_b0(left, w) == doctest::Approx(f0 * r_sum).epsilon(1e-9));
}

TEST_CASE("pinning and shift rules hold pathwise") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, 1e-8, -2.0, 1.0);
  const MeasureModel m;
  const GridPath w = sample_w(plan.t_left, plan.t_right, 1.0 / 128.0, m, 201);
  const ProcessRealization pr = assemble_delay(w, a, fs, 1e-8, -2.0, 1.0);

  SUBCASE("x equals x_tilde - b0 bitwise and X_0 = W_0") {
    CHECK(pr.x.base() == -pr.b0);
    for (std::size_t i = 0; i < pr.x.size(); ++i) {
      CHECK(pr.x.raw_values()[i] == pr.x_tilde.raw_values()[i]);
    }
    CHECK(std::abs(pr.x.value_at(0.0) - w.value_at(0.0)) <= 1e-10);
    CHECK(std::abs(pr.a_path.value_at(0.0)) <= 1e-10);
  }
  SUBCASE("constant shifts of the driver") {
    const LeftTailResult left = construct_left(w, a, fs, 1e-8, -2.0);
    const LeftTailResult left_s = construct_left(w.shift_constant(1.3), a, fs, 1e-8, -2.0);
    CHECK(compute_b0(left_s, w.shift_constant(1.3)) ==
          doctest::Approx(compute_b0(left, w) - 1.3).epsilon(1e-12));
    const ProcessRealization pr_s =
        assemble_delay(w.shift_constant(0.7), a, fs, 1e-8, -2.0, 1.0);
    for (std::int64_t g = pr.x.left_index(); g <= pr.x.right_index(); ++g) {
      CHECK(std::abs(pr_s.x.value(g) - (pr.x.value(g) + 0.7)) <= 1e-10);
    }
  }
}

TEST_CASE("the assembled delay process solves its equation across 0") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, 1e-8, -7.0, 6.0);
  const MeasureModel m;
  const GridPath w = sample_w(plan.t_left, plan.t_right, 1.0 / 256.0, m, 211);
  const ProcessRealization pr = assemble_delay(w, a, fs, 1e-8, -7.0, 6.0);
  // the shift-invariant path has no b0 in its drift; the pinned path does
  CHECK(delay_residual(pr.x_tilde, w, a, 0.0, -6.0, 6.0) <= 1e-3);
  CHECK(delay_residual(pr.x, w, a, pr.b0, -6.0, 6.0) <= 1e-3);
}

TEST_CASE("anticipation is the exact mirror of delay and solves its equation") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, 1e-8, -7.0, 6.0);
  const MeasureModel m;
  const GridPath w = sample_w(-7.0, -plan.t_left, 1.0 / 256.0, m, 221);
  const ProcessRealization pa = assemble_anticipation(w, a, fs, 1e-8, -6.0, 7.0);
  const ProcessRealization pd = assemble_delay(w.reverse_time(), a, fs, 1e-8, -7.0, 6.0);
  CHECK(pa.b0 == pd.b0);
  for (std::int64_t g = pa.x.left_index(); g <= pa.x.right_index(); ++g) {
    CHECK(pa.x.value(g) == pd.x.value(-g));
  }
  CHECK(anticipation_residual(pa.x, w, a, pa.b0, -6.0, 6.0) <= 1e-3);
}

TEST_CASE("shifted drivers evaluate the homogeneity flow") {
  const double a = -0.5;
  const FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, 1e-8, -3.0, 3.0, 1.0);
  const MeasureModel m;
  const GridPath w = sample_w(plan.t_left, plan.t_right, 1.0 / 128.0, m, 231);
  const ProcessRealization pr = assemble_delay(w, a, fs, 1e-8, -3.0, 3.0);

  SUBCASE("u = 0 leaves the driver essentially unchanged (A_0 ~ 0)") {
    const GridPath w0 = shifted_driver(w, 0.0, pr.a_path);
    CHECK(w0.raw_at(1.0) == w.raw_at(1.0));
    CHECK(std::abs(w0.base() - w.base()) <= 1e-12 * (1.0 + std::abs(pr.b0)));
  }
  SUBCASE("the shifted driver starts at the process value: (W^u)_0 = X_u") {
    const GridPath wu = shifted_driver(w, 1.0, pr.a_path);
    CHECK(std::abs(wu.value_at(0.0) - pr.x.value_at(1.0)) <= 1e-12);
  }
  SUBCASE("reconstruction from W^v reproduces the time-shifted process") {
    const HomogeneityResult h0 = homogeneity_check(pr, 0.0, fs, 1e-8, -3.0, 3.0);
    CHECK(h0.sup_dev <= 1e-12);
    const HomogeneityResult h1 = homogeneity_check(pr, 1.0, fs, 1e-8, -3.0, 3.0);
    CHECK(h1.sup_dev <= 4e-3);  // dt = 1/128 here; the acceptance run uses 1/256
    CHECK(h1.b0_dev <= 4e-3);
  }
}
