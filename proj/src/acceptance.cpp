#include "oudelay/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "oudelay/diagnostics.hpp"
#include "oudelay/fundamental_solution.hpp"
#include "oudelay/left_tail.hpp"
#include "oudelay/measure_change.hpp"
#include "oudelay/path_sampler.hpp"
#include "oudelay/process_assembly.hpp"
#include "oudelay/rng.hpp"
#include "oudelay/window.hpp"

namespace oud {

namespace {

using nlohmann::ordered_json;

GridPath ramp_path(std::int64_t spu, double t_left, double t_right) {
  const std::int64_t lo = grid_index(t_left, spu);
  const std::int64_t hi = grid_index(t_right, spu);
  std::vector<double> v(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t g = lo; g <= hi; ++g) {
    v[static_cast<std::size_t>(g - lo)] = static_cast<double>(g) / static_cast<double>(spu);
  }
  return GridPath(spu, lo, 0.0, std::move(v));
}

CriterionResult criterion_fundamental() {
  CriterionResult c{"fundamental", true, ordered_json::object()};
  ordered_json per_a = ordered_json::array();
  for (double a : {-0.1, -0.5, -0.9}) {
    const FundamentalSolution fs = FundamentalSolution::build(a, 30);
    const double residual = fs.verify_renewal_residual(10.0, 1e-3);
    double jump = 0.0;
    for (int k = 1; k <= 10; ++k) {
      jump = std::max(jump, std::abs(fs.eval(static_cast<double>(k)) -
                                     fs.eval_left(static_cast<double>(k))));
    }
    // envelope fitted on [5, 15] inside build(); validate on held-out [15, 25]
    double held_out_ratio = 0.0;
    for (int i = 15 * 128; i <= 25 * 128; ++i) {
      const double s = static_cast<double>(i) / 128.0;
      held_out_ratio = std::max(held_out_ratio, std::abs(fs.eval(s)) / fs.envelope(s));
    }
    const bool ok = residual <= 1e-5 && jump <= 1e-12 && held_out_ratio <= 1.1;
    c.pass = c.pass && ok;
    per_a.push_back({{"a", a},
                     {"renewal_residual", residual},
                     {"integer_jump", jump},
                     {"held_out_envelope_ratio", held_out_ratio},
                     {"pass", ok}});
  }
  c.details["cases"] = per_a;
  return c;
}

CriterionResult criterion_series_fixture() {
  CriterionResult c{"series-fixture", true, ordered_json::object()};
  ordered_json per_a = ordered_json::array();
  const GridPath ramp = ramp_path(512, -27.0, 0.0);
  for (double a : {-0.1, -0.5, -0.9}) {
    const SegmentFunction f = series_f(ramp, a, 0, 25);
    const double expected = (std::exp(a) - 1.0) / a;
    const double err = std::abs(f.back() - expected);
    const bool ok = err <= 1e-10;
    c.pass = c.pass && ok;
    per_a.push_back({{"a", a}, {"f0", f.back()}, {"expected", expected}, {"error", err}, {"pass", ok}});
  }
  c.details["cases"] = per_a;
  return c;
}

CriterionResult criterion_left_tail(std::uint64_t seed) {
  CriterionResult c{"left-tail", true, ordered_json::object()};
  const double a = -0.5;
  const double dt = 1.0 / 256.0;
  const double tol = 1e-8;
  FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, tol, -9.0, 0.0);
  const MeasureModel m;
  double worst_resid = 0.0, worst_glue = 0.0;
  int k_q_used = 0;
  for (int s = 0; s < 20; ++s) {
    const GridPath w = sample_w(plan.t_left, 1.0, dt, m, mix_key(seed, 300 + s));
    const LeftTailResult left = construct_left(w, a, fs, tol, -9.0);
    worst_resid = std::max(worst_resid, delay_residual(left.x_left, w, a, 0.0, -8.0, 0.0));
    worst_glue = std::max(worst_glue, segment_glue_check(left, fs));
    k_q_used = left.k_q;
  }
  c.pass = worst_resid <= 1e-3 && worst_glue <= 1e-6;
  c.details = {{"a", a},
               {"seeds", 20},
               {"max_sde_residual", worst_resid},
               {"max_glue_jump", worst_glue},
               {"k_q", k_q_used}};
  return c;
}

CriterionResult criterion_invariances(std::uint64_t seed) {
  CriterionResult c{"invariances", true, ordered_json::object()};
  const double a = -0.5;
  const double dt = 1.0 / 256.0;
  const double tol = 1e-8;
  FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, tol, -2.0, 1.0);
  const MeasureModel m;
  bool tilde_bitwise = true;
  double worst_shift = 0.0, worst_pin = 0.0, worst_grad = 0.0;
  for (int s = 0; s < 20; ++s) {
    const GridPath w = sample_w(plan.t_left, plan.t_right, dt, m, mix_key(seed, 400 + s));

    const GridPath xt = assemble_tilde(w, a, fs, tol, -2.0, 1.0);
    const GridPath xt_shift = assemble_tilde(w.shift_constant(-2.5), a, fs, tol, -2.0, 1.0);
    for (std::size_t i = 0; i < xt.size(); ++i) {
      if (xt.raw_values()[i] != xt_shift.raw_values()[i]) tilde_bitwise = false;
    }

    const ProcessRealization pr = assemble_delay(w, a, fs, tol, -2.0, 1.0);
    const ProcessRealization pr_shift =
        assemble_delay(w.shift_constant(0.7), a, fs, tol, -2.0, 1.0);
    for (std::int64_t g = pr.x.left_index(); g <= pr.x.right_index(); ++g) {
      worst_shift = std::max(worst_shift,
                             std::abs(pr_shift.x.value(g) - (pr.x.value(g) + 0.7)));
    }
    worst_pin = std::max(worst_pin, std::abs(pr.x.value_at(0.0) - w.value_at(0.0)));

    for (double eps : {1e-3, 1.0}) {
      const double grad = grad_x0_check(w, a, fs, tol, 0.5, eps, -2.0);
      worst_grad = std::max(worst_grad, std::abs(grad - 1.0));
    }
  }
  c.pass = tilde_bitwise && worst_shift <= 1e-10 && worst_pin <= 1e-10 && worst_grad <= 1e-9;
  c.details = {{"seeds", 20},
               {"tilde_shift_bitwise", tilde_bitwise},
               {"max_shift_deviation", worst_shift},
               {"max_pin_deviation", worst_pin},
               {"max_grad_deviation", worst_grad}};
  return c;
}

CriterionResult criterion_homogeneity(std::uint64_t seed) {
  CriterionResult c{"homogeneity", true, ordered_json::object()};
  const double a = -0.5;
  const double tol = 1e-8;
  FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const MeasureModel m;
  const std::vector<double> shifts = {-2.0, -1.0, 1.0, 2.0};

  auto run_at = [&](double dt, int n_seeds) {
    const WindowPlan plan = resolve_window(fs, tol, -3.0, 3.0, 2.0);
    double worst = 0.0, worst_b0 = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
      const GridPath w = sample_w(plan.t_left, plan.t_right, dt, m, mix_key(seed, 500 + s));
      const ProcessRealization pr = assemble_delay(w, a, fs, tol, -3.0, 3.0);
      for (double v : shifts) {
        const HomogeneityResult h = homogeneity_check(pr, v, fs, tol, -3.0, 3.0);
        worst = std::max(worst, h.sup_dev);
        worst_b0 = std::max(worst_b0, h.b0_dev);
      }
    }
    return std::pair<double, double>{worst, worst_b0};
  };

  const auto [dev_coarse, b0_coarse] = run_at(1.0 / 256.0, 5);
  const auto [dev_fine, b0_fine] = run_at(1.0 / 512.0, 1);
  c.pass = dev_coarse <= 2e-3 && b0_coarse <= 2e-3 && dev_fine < dev_coarse;
  c.details = {{"seeds", 5},
               {"max_deviation_dt256", dev_coarse},
               {"max_b0_deviation_dt256", b0_coarse},
               {"max_deviation_dt512", dev_fine},
               {"max_b0_deviation_dt512", b0_fine},
               {"refines", dev_fine < dev_coarse}};
  return c;
}

CriterionResult criterion_reversal(std::uint64_t seed) {
  CriterionResult c{"reversal", true, ordered_json::object()};
  const double a = -0.5;
  const double dt = 1.0 / 256.0;
  const double tol = 1e-8;
  FundamentalSolution fs = FundamentalSolution::build(a, 40);
  const WindowPlan plan = resolve_window(fs, tol, -7.0, 6.0);  // mirrored construction window
  const MeasureModel m;
  double worst_resid = 0.0;
  bool mirror_exact = true;
  for (int s = 0; s < 3; ++s) {
    const GridPath w = sample_w(-7.0, -plan.t_left, dt, m, mix_key(seed, 600 + s));
    const ProcessRealization pr = assemble_anticipation(w, a, fs, tol, -6.0, 7.0);
    worst_resid = std::max(worst_resid, anticipation_residual(pr.x, w, a, pr.b0, -6.0, 6.0));

    const ProcessRealization pr_d = assemble_delay(w.reverse_time(), a, fs, tol, -7.0, 6.0);
    for (std::int64_t g = pr.x.left_index(); g <= pr.x.right_index(); ++g) {
      if (pr.x.value(g) != pr_d.x.value(-g)) mirror_exact = false;
    }
  }
  c.pass = worst_resid <= 1e-3 && mirror_exact;
  c.details = {{"seeds", 3},
               {"max_advanced_residual", worst_resid},
               {"mirror_exact", mirror_exact}};
  return c;
}

CriterionResult criterion_density_driver(std::uint64_t seed, int workers) {
  CriterionResult c{"density-driver", true, ordered_json::object()};
  McParams p;
  p.kind = DriverKind::bm;
  p.dt = 0.25;
  std::vector<McTask> tasks;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    for (Functional f : {Functional::f1, Functional::f2, Functional::f3}) {
      tasks.push_back({t, f, false});
    }
  }
  const auto reports = mc_run(p, tasks, 100000, mix_key(seed, 700), workers);
  ordered_json arr = ordered_json::array();
  for (const DensityReport& r : reports) {
    c.pass = c.pass && r.pass;
    arr.push_back({{"t", r.t},
                   {"functional", functional_name(r.functional)},
                   {"z", r.z_score},
                   {"pass", r.pass}});
  }
  c.details = {{"n", 100000}, {"reports", arr}};
  return c;
}

CriterionResult criterion_density_process(std::uint64_t seed, int workers) {
  CriterionResult c{"density-process", true, ordered_json::object()};
  const std::vector<McTask> tasks = {{0.5, Functional::f1, false}, {1.0, Functional::f1, false}};
  ordered_json arr = ordered_json::array();

  auto run = [&](DriverKind kind, double dt, double allowance, std::uint64_t salt) {
    McParams p;
    p.kind = kind;
    p.a = -0.5;
    p.dt = dt;
    p.tol = 1e-4;
    p.k_f = 18;
    double worst_excess = -1e300;
    for (const DensityReport& r : mc_run(p, tasks, 100000, mix_key(seed, salt), workers)) {
      const double excess = std::abs(r.lhs_mean - r.rhs_mean) - 4.0 * r.paired_se;
      worst_excess = std::max(worst_excess, excess);
      const bool ok = excess <= allowance;
      c.pass = c.pass && ok;
      arr.push_back({{"kind", kind_name(kind)},
                     {"dt", dt},
                     {"t", r.t},
                     {"bias_beyond_4se", excess},
                     {"allowance", allowance},
                     {"pass", ok}});
    }
    return worst_excess;
  };

  run(DriverKind::delay, 1.0 / 256.0, 5e-3, 800);
  run(DriverKind::anticipation, 1.0 / 256.0, 5e-3, 801);
  // the discretization-bias allowance tightens from 1e-2 to 5e-3 as the step
  // halves; both levels must hold
  run(DriverKind::delay, 1.0 / 128.0, 1e-2, 802);
  c.details = {{"n", 100000}, {"reports", arr}};
  return c;
}

CriterionResult criterion_power(std::uint64_t seed, int workers) {
  CriterionResult c{"power", true, ordered_json::object()};
  const MeasureModel biased(1.0, 0.5);
  ordered_json arr = ordered_json::array();

  {
    McParams p;
    p.kind = DriverKind::bm;
    p.dt = 0.25;
    p.measure = biased;
    const DensityReport r =
        mc_negative_control(p, Functional::f1, 2.0, 100000, mix_key(seed, 900), workers);
    const bool detected = std::abs(r.z_score) > 4.0;
    c.pass = c.pass && detected;
    arr.push_back({{"kind", "bm"}, {"z", r.z_score}, {"detected", detected}});
  }
  {
    McParams p;
    p.kind = DriverKind::delay;
    p.a = -0.5;
    p.dt = 1.0 / 128.0;
    p.tol = 1e-4;
    p.k_f = 18;
    p.measure = biased;
    const DensityReport r =
        mc_negative_control(p, Functional::f1, 2.0, 100000, mix_key(seed, 901), workers);
    const bool detected = std::abs(r.z_score) > 4.0;
    c.pass = c.pass && detected;
    arr.push_back({{"kind", "delay"}, {"z", r.z_score}, {"detected", detected}});
  }
  c.details = {{"n", 100000}, {"reports", arr}};
  return c;
}

ordered_json report_to_json(const DensityReport& r) {
  return {{"kind", kind_name(r.kind)},
          {"functional", functional_name(r.functional)},
          {"t", r.t},
          {"n_samples", r.n_samples},
          {"lhs_mean", r.lhs_mean},
          {"rhs_mean", r.rhs_mean},
          {"lhs_se", r.lhs_se},
          {"rhs_se", r.rhs_se},
          {"paired_se", r.paired_se},
          {"z_score", r.z_score},
          {"negative_control", r.negative_control},
          {"pass", r.pass}};
}

CriterionResult criterion_determinism(std::uint64_t seed) {
  CriterionResult c{"determinism", true, ordered_json::object()};
  McParams p;
  p.kind = DriverKind::delay;
  p.a = -0.5;
  p.dt = 1.0 / 128.0;
  p.tol = 1e-4;
  p.k_f = 18;
  const std::vector<McTask> tasks = {{0.5, Functional::f1, false}};
  const std::string one =
      report_to_json(mc_run(p, tasks, 20000, mix_key(seed, 1000), 1).front()).dump();
  const std::string two =
      report_to_json(mc_run(p, tasks, 20000, mix_key(seed, 1000), 2).front()).dump();
  const std::string four =
      report_to_json(mc_run(p, tasks, 20000, mix_key(seed, 1000), 4).front()).dump();
  c.pass = (one == two) && (one == four);
  c.details = {{"n", 20000}, {"workers_compared", {1, 2, 4}}, {"byte_identical", c.pass}};
  return c;
}

}  // namespace

SuiteReport run_suite(std::uint64_t seed, const std::string& filter, int workers) {
  SuiteReport report;
  report.seed = seed;
  report.filter = filter;
  report.all_pass = true;

  const std::vector<std::pair<std::string, std::function<CriterionResult()>>> registry = {
      {"fundamental", [&] { return criterion_fundamental(); }},
      {"series-fixture", [&] { return criterion_series_fixture(); }},
      {"left-tail", [&] { return criterion_left_tail(seed); }},
      {"invariances", [&] { return criterion_invariances(seed); }},
      {"homogeneity", [&] { return criterion_homogeneity(seed); }},
      {"reversal", [&] { return criterion_reversal(seed); }},
      {"density-driver", [&] { return criterion_density_driver(seed, workers); }},
      {"density-process", [&] { return criterion_density_process(seed, workers); }},
      {"power", [&] { return criterion_power(seed, workers); }},
      {"determinism", [&] { return criterion_determinism(seed); }},
  };

  for (const auto& [name, fn] : registry) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    report.criteria.push_back(fn());
    report.all_pass = report.all_pass && report.criteria.back().pass;
  }
  return report;
}

nlohmann::ordered_json suite_to_json(const SuiteReport& report) {
  ordered_json j;
  j["version"] = kVersion;
  j["seed"] = report.seed;
  j["filter"] = report.filter;
  j["all_pass"] = report.all_pass;
  ordered_json arr = ordered_json::array();
  for (const CriterionResult& c : report.criteria) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  }
  j["criteria"] = arr;
  return j;
}

}  // namespace oud
