#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oudelay/acceptance.hpp"
#include "oudelay/diagnostics.hpp"
#include "oudelay/forward_solver.hpp"
#include "oudelay/fundamental_solution.hpp"
#include "oudelay/left_tail.hpp"
#include "oudelay/measure_change.hpp"
#include "oudelay/path_sampler.hpp"
#include "oudelay/process_assembly.hpp"
#include "oudelay/window.hpp"

namespace {

using nlohmann::ordered_json;

/// Flat-JSON config files: {"flag-name": value, ...}; CLI flags win.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    ordered_json j;
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (!opt->results().empty()) {
        j[name] = opt->results().at(0);
      } else if (default_also) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    ordered_json j;
    input >> j;
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_string()) {
        item.inputs = {value.get<std::string>()};
      } else {
        item.inputs = {value.dump()};
      }
      items.push_back(item);
    }
    return items;
  }
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot open output file: " + path);
      out << text;
    }
  }
};

std::string csv_header(const ordered_json& config, const std::string& columns) {
  std::string h = "# oudelay " + std::string(oud::kVersion) + "\n";
  h += "# config " + config.dump() + "\n";
  h += columns + "\n";
  return h;
}

ordered_json density_report_json(const oud::DensityReport& r) {
  return {{"kind", oud::kind_name(r.kind)},
          {"functional", oud::functional_name(r.functional)},
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

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-dimensional delayed / anticipating processes driven by two-sided "
               "Brownian motion: construction, diagnostics, and change-of-measure checks"};
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "flat JSON config file; CLI flags take precedence");
  app.require_subcommand(1);

  int workers = 1;
  app.add_option("--workers", workers, "worker threads for Monte Carlo batches")
      ->envname("OUDELAY_WORKERS");

  // shared knobs (each subcommand registers the subset it uses)
  double a = -0.5, dt = 1.0 / 256.0, tol = 1e-8;
  double t_left = -8.0, t_right = 1.0, t_end = 4.0, t_shift = 0.5;
  double mean = 0.0, stddev = 1.0;
  std::uint64_t seed = 1;
  std::int64_t n = 100000;
  std::string kind_s = "delay", functional_s = "f1", emit = "csv";
  Output out;

  auto add_measure = [&](CLI::App* sub) {
    sub->add_option("--mean", mean, "mean of the time-0 value distribution");
    sub->add_option("--stddev", stddev, "stddev of the time-0 value distribution")
        ->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", out.path, "output file (default stdout)"); };

  CLI::App* c_sample = app.add_subcommand("sample", "sample a two-sided driver path, CSV (t, W)");
  c_sample->add_option("--t-left", t_left)->required();
  c_sample->add_option("--t-right", t_right)->required();
  c_sample->add_option("--dt", dt);
  c_sample->add_option("--seed", seed);
  add_measure(c_sample);
  add_out(c_sample);

  CLI::App* c_rtable = app.add_subcommand("r-table", "tabulate the fundamental solution, CSV (s, r)");
  c_rtable->add_option("--a", a)->check(CLI::Range(-0.999999, -1e-9));
  double s_max = 10.0;
  c_rtable->add_option("--s-max", s_max)->check(CLI::PositiveNumber);
  c_rtable->add_option("--dt", dt);
  add_out(c_rtable);

  CLI::App* c_forward = app.add_subcommand(
      "forward", "method-of-steps solve from a constant initial segment, CSV (t, X)");
  c_forward->add_option("--a", a)->check(CLI::Range(-0.999999, -1e-9));
  c_forward->add_option("--dt", dt);
  c_forward->add_option("--t-end", t_end)->check(CLI::NonNegativeNumber);
  double init_const = 1.0;
  c_forward->add_option("--init-const", init_const, "value of the initial segment on [-1, 0]");
  bool zero_driver = false;
  c_forward->add_flag("--zero-driver", zero_driver, "deterministic solve (W = 0)");
  c_forward->add_option("--seed", seed);
  add_measure(c_forward);
  add_out(c_forward);

  CLI::App* c_left = app.add_subcommand(
      "left-tail", "left-bounded construction on [t_left, 0], CSV (t, W, q, X)");
  c_left->add_option("--a", a)->check(CLI::Range(-0.999999, -1e-9));
  c_left->add_option("--dt", dt);
  c_left->add_option("--tol", tol)->check(CLI::PositiveNumber);
  c_left->add_option("--t-left", t_left);
  c_left->add_option("--seed", seed);
  add_measure(c_left);
  add_out(c_left);

  CLI::App* c_sim = app.add_subcommand("simulate", "full process assembly");
  c_sim->add_option("--kind", kind_s)->check(CLI::IsMember({"delay", "anticipation"}));
  c_sim->add_option("--a", a)->check(CLI::Range(-0.999999, -1e-9));
  c_sim->add_option("--dt", dt);
  c_sim->add_option("--tol", tol)->check(CLI::PositiveNumber);
  c_sim->add_option("--t-end", t_end)->check(CLI::PositiveNumber);
  c_sim->add_option("--t-left", t_left, "left edge of the emitted window");
  c_sim->add_option("--seed", seed);
  c_sim->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));
  add_measure(c_sim);
  add_out(c_sim);

  CLI::App* c_density = app.add_subcommand("verify-density",
                                           "paired Monte Carlo check of the shift density");
  c_density->add_option("--kind", kind_s)->check(CLI::IsMember({"bm", "delay", "anticipation"}));
  c_density->add_option("--a", a)->check(CLI::Range(-0.999999, -1e-9));
  c_density->add_option("--t", t_shift, "time shift");
  c_density->add_option("--functional", functional_s)->check(CLI::IsMember({"f1", "f2", "f3"}));
  c_density->add_option("--n", n)->check(CLI::Range(std::int64_t{1000}, std::int64_t{100000000}));
  c_density->add_option("--dt", dt);
  c_density->add_option("--tol", tol)->check(CLI::PositiveNumber);
  c_density->add_option("--seed", seed);
  bool negative_control = false;
  c_density->add_flag("--negative-control", negative_control,
                      "replace the density by 1 (the check must then fail for large t)");
  add_measure(c_density);
  add_out(c_density);

  CLI::App* c_accept = app.add_subcommand("accept", "run the acceptance suite");
  c_accept->add_option("--seed", seed);
  std::string filter;
  c_accept->add_option("--filter", filter, "run only criteria whose name contains this substring");
  add_out(c_accept);

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->config_formatter(std::make_shared<ConfigJson>());
    sub->set_config("--config", "", "flat JSON config file; CLI flags take precedence");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const oud::MeasureModel measure(mean, stddev);

    if (*c_sample) {
      const oud::GridPath w = oud::sample_w(t_left, t_right, dt, measure, seed);
      ordered_json cfg = {{"t_left", t_left}, {"t_right", t_right}, {"dt", dt},
                          {"seed", seed},    {"mean", mean},       {"stddev", stddev}};
      std::string text = csv_header(cfg, "t,W");
      for (std::int64_t g = w.left_index(); g <= w.right_index(); ++g) {
        text += fmt(static_cast<double>(g) * w.dt()) + "," + fmt(w.value(g)) + "\n";
      }
      out.write(text);
    } else if (*c_rtable) {
      const int max_k = static_cast<int>(std::ceil(s_max)) + 1;
      const oud::FundamentalSolution fs = oud::FundamentalSolution::build(a, std::max(max_k, 2));
      const std::int64_t spu = oud::steps_per_unit_of(dt);
      ordered_json cfg = {{"a", a}, {"s_max", s_max}, {"dt", dt}};
      std::string text = csv_header(cfg, "s,r");
      const std::int64_t m = oud::grid_index(s_max, spu);
      for (std::int64_t g = 0; g <= m; ++g) {
        const double s = static_cast<double>(g) / static_cast<double>(spu);
        text += fmt(s) + "," + fmt(fs.eval(s)) + "\n";
      }
      out.write(text);
    } else if (*c_forward) {
      const std::int64_t spu = oud::steps_per_unit_of(dt);
      const oud::SegmentFunction f = oud::SegmentFunction::constant(spu, init_const);
      const oud::GridPath w = zero_driver
                                  ? oud::GridPath::zero(spu, -1.0, std::max(t_end, dt))
                                  : oud::sample_w(-1.0, std::max(t_end, dt), dt, measure, seed);
      const oud::GridPath x = oud::solve_forward(f, w, a, t_end);
      ordered_json cfg = {{"a", a},        {"dt", dt},   {"t_end", t_end},
                          {"init_const", init_const}, {"zero_driver", zero_driver}, {"seed", seed}};
      std::string text = csv_header(cfg, "t,X");
      for (std::int64_t g = x.left_index(); g <= x.right_index(); ++g) {
        text += fmt(static_cast<double>(g) * x.dt()) + "," + fmt(x.value(g)) + "\n";
      }
      out.write(text);
    } else if (*c_left) {
      const oud::FundamentalSolution fs = oud::FundamentalSolution::build(a, 40);
      const oud::WindowPlan plan = oud::resolve_window(fs, tol, t_left, 0.0);
      const oud::GridPath w = oud::sample_w(plan.t_left, 1.0, dt, measure, seed);
      const oud::LeftTailResult left = oud::construct_left(w, a, fs, tol, t_left);
      ordered_json cfg = {{"a", a},     {"dt", dt},   {"tol", tol},
                          {"t_left", t_left}, {"seed", seed}, {"k_f", left.k_f},
                          {"k_q", left.k_q}, {"tail_bound", left.tail_bound}};
      std::string text = csv_header(cfg, "t,W,q,X");
      for (std::int64_t g = left.x_left.left_index(); g <= left.x_left.right_index(); ++g) {
        const double t = static_cast<double>(g) * left.x_left.dt();
        text += fmt(t) + "," + fmt(w.value(g)) + "," + fmt(left.q.value(g)) + "," +
                fmt(left.x_left.value(g)) + "\n";
      }
      out.write(text);
    } else if (*c_sim) {
      const oud::FundamentalSolution fs = oud::FundamentalSolution::build(a, 40);
      const oud::DriverKind kind = oud::parse_kind(kind_s);
      std::optional<oud::ProcessRealization> pr;
      std::optional<oud::GridPath> w;
      if (kind == oud::DriverKind::delay) {
        const oud::WindowPlan plan = oud::resolve_window(fs, tol, t_left, t_end);
        w = oud::sample_w(plan.t_left, plan.t_right, dt, measure, seed);
        pr = oud::assemble_delay(*w, a, fs, tol, t_left, t_end);
      } else if (kind == oud::DriverKind::anticipation) {
        const oud::WindowPlan plan = oud::resolve_window(fs, tol, -t_end, -t_left);
        w = oud::sample_w(-plan.t_right, -plan.t_left, dt, measure, seed);
        pr = oud::assemble_anticipation(*w, a, fs, tol, -t_end, -t_left);
      } else {
        throw CLI::ValidationError("--kind", "simulate supports delay or anticipation");
      }
      const double res =
          (kind == oud::DriverKind::delay)
              ? oud::delay_residual(pr->x, *w, a, pr->b0, t_left + 1.0, t_end)
              : oud::anticipation_residual(pr->x, *w, a, pr->b0, -t_end, -t_left - 1.0);
      ordered_json cfg = {{"kind", kind_s}, {"a", a},       {"dt", dt},
                          {"tol", tol},     {"t_end", t_end}, {"t_left", t_left},
                          {"seed", seed},   {"mean", mean},   {"stddev", stddev}};
      ordered_json diag = {{"b0", pr->b0},
                           {"k_f", pr->k_f},
                           {"k_q", pr->k_q},
                           {"tail_bound", pr->tail_bound},
                           {"sde_residual", res}};
      if (emit == "json") {
        ordered_json j = {{"version", oud::kVersion}, {"config", cfg}, {"diagnostics", diag}};
        ordered_json rows = ordered_json::array();
        for (std::int64_t g = pr->x.left_index(); g <= pr->x.right_index(); ++g) {
          rows.push_back({static_cast<double>(g) * pr->x.dt(), w->value(g), pr->x.value(g),
                          pr->a_path.value(g)});
        }
        j["columns"] = {"t", "W", "X", "A"};
        j["rows"] = rows;
        out.write(j.dump(2) + "\n");
      } else {
        cfg["diagnostics"] = diag;
        std::string text = csv_header(cfg, "t,W,X,A");
        for (std::int64_t g = pr->x.left_index(); g <= pr->x.right_index(); ++g) {
          const double t = static_cast<double>(g) * pr->x.dt();
          text += fmt(t) + "," + fmt(w->value(g)) + "," + fmt(pr->x.value(g)) + "," +
                  fmt(pr->a_path.value(g)) + "\n";
        }
        out.write(text);
      }
    } else if (*c_density) {
      oud::McParams p;
      p.kind = oud::parse_kind(kind_s);
      p.a = a;
      p.dt = dt;
      p.tol = tol;
      p.measure = measure;
      const oud::DensityReport r =
          negative_control
              ? oud::mc_negative_control(p, oud::parse_functional(functional_s), t_shift, n,
                                         seed, workers)
              : oud::mc_shift_identity(p, oud::parse_functional(functional_s), t_shift, n, seed,
                                       workers);
      ordered_json j = {{"version", oud::kVersion},
                        {"config",
                         {{"kind", kind_s},
                          {"a", a},
                          {"t", t_shift},
                          {"functional", functional_s},
                          {"n", n},
                          {"dt", dt},
                          {"tol", tol},
                          {"seed", seed},
                          {"mean", mean},
                          {"stddev", stddev},
                          {"negative_control", negative_control}}},
                        {"report", density_report_json(r)}};
      out.write(j.dump(2) + "\n");
    } else if (*c_accept) {
      const oud::SuiteReport report = oud::run_suite(seed, filter, workers);
      for (const oud::CriterionResult& c : report.criteria) {
        std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
      }
      out.write(suite_to_json(report).dump(2) + "\n");
      return report.all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
