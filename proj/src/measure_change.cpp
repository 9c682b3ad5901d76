#include "oudelay/measure_change.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "oudelay/path_sampler.hpp"
#include "oudelay/quadrature.hpp"
#include "oudelay/rng.hpp"
#include "oudelay/window.hpp"

namespace oud {

double functional_value(Functional f, double y_s1, double y_s2) {
  switch (f) {
    case Functional::f1:
      return std::tanh(y_s1);
    case Functional::f2:
      return std::tanh(y_s1) * std::exp(-y_s2 * y_s2);
    case Functional::f3:
      return std::cos(y_s1 - y_s2);
  }
  throw std::invalid_argument("unknown functional");
}

std::string functional_name(Functional f) {
  switch (f) {
    case Functional::f1: return "f1";
    case Functional::f2: return "f2";
    case Functional::f3: return "f3";
  }
  return "?";
}

std::string kind_name(DriverKind k) {
  switch (k) {
    case DriverKind::bm: return "bm";
    case DriverKind::delay: return "delay";
    case DriverKind::anticipation: return "anticipation";
  }
  return "?";
}

DriverKind parse_kind(const std::string& s) {
  if (s == "bm") return DriverKind::bm;
  if (s == "delay") return DriverKind::delay;
  if (s == "anticipation") return DriverKind::anticipation;
  throw std::invalid_argument("unknown kind: " + s);
}

Functional parse_functional(const std::string& s) {
  if (s == "f1") return Functional::f1;
  if (s == "f2") return Functional::f2;
  if (s == "f3") return Functional::f3;
  throw std::invalid_argument("unknown functional: " + s);
}

double rn_density_bm(const GridPath& w, double t, const MeasureModel& m) {
  return std::exp(m.log_pdf(w.value_at(-t)) - m.log_pdf(w.value_at(0.0)));
}

double rn_density_x(const ProcessRealization& pr, double t, const MeasureModel& m) {
  return std::exp(m.log_pdf(pr.x.value_at(-t)) - m.log_pdf(pr.x.value_at(0.0)));
}

double grad_x0_check(const GridPath& w, double a, const FundamentalSolution& fs, double tol,
                     double t, double eps, double t_left_out) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const ProcessRealization base = assemble_delay(w, a, fs, tol, t_left_out, 0.0);
  const ProcessRealization bumped =
      assemble_delay(w.shift_constant(eps), a, fs, tol, t_left_out, 0.0);
  return (bumped.x.value_at(-t) - base.x.value_at(-t)) / eps;
}

namespace {

struct McSetup {
  double w_left = 0.0, w_right = 0.0;  // driver sampling window
  double t_lo = 0.0, t_hi = 0.0;       // process evaluation window
  double t_left_ctor = 0.0;            // construct_left t_left (mirrored for anticipation)
  RGrid r_table;
  bool constructed = false;
};

McSetup plan_mc(const McParams& p, const std::vector<McTask>& tasks,
                const FundamentalSolution* fs) {
  McSetup s;
  double lo = std::min(kFunctionalS1, 0.0);
  double hi = std::max(kFunctionalS2, 0.0);
  for (const McTask& task : tasks) {
    lo = std::min({lo, kFunctionalS1 - task.t, -task.t});
    hi = std::max({hi, kFunctionalS2 - task.t, -task.t});
  }
  s.t_lo = std::min(lo, -1.0);
  s.t_hi = std::max(hi, 1.0);
  s.constructed = (p.kind != DriverKind::bm);
  if (!s.constructed) {
    s.w_left = s.t_lo;
    s.w_right = s.t_hi;
    return s;
  }
  const std::int64_t spu = steps_per_unit_of(p.dt);
  if (p.kind == DriverKind::delay) {
    s.t_left_ctor = s.t_lo;
    const WindowPlan plan = resolve_window(*fs, p.tol, s.t_left_ctor, s.t_hi, 0.0, p.k_f);
    s.w_left = plan.t_left;
    s.w_right = plan.t_right;
    s.r_table = RGrid::build(*fs, spu, s.t_left_ctor, plan.k_q + 8);
  } else {
    s.t_left_ctor = -s.t_hi;  // left edge of the mirrored construction
    const WindowPlan plan = resolve_window(*fs, p.tol, s.t_left_ctor, -s.t_lo, 0.0, p.k_f);
    s.w_left = -plan.t_right;
    s.w_right = -plan.t_left;
    s.r_table = RGrid::build(*fs, spu, s.t_left_ctor, plan.k_q + 8);
  }
  return s;
}

struct Stats {
  double mean = 0.0, se = 0.0;
};

Stats column_stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  Stats s;
  s.mean = pairwise_sum(v) / n;
  if (v.size() < 2) return s;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - s.mean;
    sq[i] = d * d;
  }
  s.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  return s;
}

}  // namespace

std::vector<DensityReport> mc_run(const McParams& params, const std::vector<McTask>& tasks,
                                  std::int64_t n, std::uint64_t base_seed, int workers) {
  if (tasks.empty()) throw std::invalid_argument("mc_run needs at least one task");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");

  std::optional<FundamentalSolution> fs;
  if (params.kind != DriverKind::bm) fs = FundamentalSolution::build(params.a, 40);
  const McSetup setup = plan_mc(params, tasks, fs ? &*fs : nullptr);

  const std::size_t n_tasks = tasks.size();
  std::vector<std::vector<double>> lhs(n_tasks, std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<std::vector<double>> rhs(n_tasks, std::vector<double>(static_cast<std::size_t>(n)));

  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run_chunk = [&](std::int64_t i0, std::int64_t i1) {
    try {
      for (std::int64_t i = i0; i < i1; ++i) {
        const std::uint64_t seed = mix_key(base_seed, static_cast<std::uint64_t>(i));
        const GridPath w =
            sample_w(setup.w_left, setup.w_right, params.dt, params.measure, seed);
        std::optional<ProcessRealization> pr;
        if (params.kind == DriverKind::delay) {
          pr = assemble_delay(w, params.a, *fs, params.tol, setup.t_left_ctor, setup.t_hi,
                              params.k_f, std::nullopt, &setup.r_table);
        } else if (params.kind == DriverKind::anticipation) {
          pr = assemble_anticipation(w, params.a, *fs, params.tol, setup.t_lo, setup.t_hi,
                                     params.k_f, std::nullopt, &setup.r_table);
        }
        const GridPath& y = setup.constructed ? pr->x : w;
        const double y_s1 = y.value_at(kFunctionalS1);
        const double y_s2 = y.value_at(kFunctionalS2);
        for (std::size_t k = 0; k < n_tasks; ++k) {
          const McTask& task = tasks[k];
          const double l = functional_value(task.f, y.value_at(kFunctionalS1 - task.t),
                                            y.value_at(kFunctionalS2 - task.t));
          double density;
          if (task.negative_control && task.t != 0.0) {
            density = 1.0;
          } else if (setup.constructed) {
            density = rn_density_x(*pr, task.t, params.measure);
          } else {
            density = rn_density_bm(w, task.t, params.measure);
          }
          lhs[k][static_cast<std::size_t>(i)] = l;
          rhs[k][static_cast<std::size_t>(i)] = functional_value(task.f, y_s1, y_s2) * density;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    run_chunk(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int wk = 0; wk < workers; ++wk) {
      const std::int64_t i0 = static_cast<std::int64_t>(wk) * chunk;
      const std::int64_t i1 = std::min<std::int64_t>(n, i0 + chunk);
      if (i0 >= i1) break;
      pool.emplace_back(run_chunk, i0, i1);
    }
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<DensityReport> reports;
  reports.reserve(n_tasks);
  for (std::size_t k = 0; k < n_tasks; ++k) {
    const Stats ls = column_stats(lhs[k]);
    const Stats rs = column_stats(rhs[k]);
    std::vector<double> diff(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lhs[k][i] - rhs[k][i];
    const Stats ds = column_stats(diff);

    DensityReport rep;
    rep.kind = params.kind;
    rep.functional = tasks[k].f;
    rep.t = tasks[k].t;
    rep.n_samples = n;
    rep.lhs_mean = ls.mean;
    rep.rhs_mean = rs.mean;
    rep.lhs_se = ls.se;
    rep.rhs_se = rs.se;
    rep.paired_se = ds.se;
    rep.z_score = (ds.se > 0.0) ? ds.mean / ds.se : 0.0;
    rep.negative_control = tasks[k].negative_control;
    rep.pass = std::abs(ls.mean - rs.mean) <= 4.0 * ds.se;
    reports.push_back(rep);
  }
  return reports;
}

DensityReport mc_shift_identity(const McParams& params, Functional f, double t, std::int64_t n,
                                std::uint64_t base_seed, int workers) {
  return mc_run(params, {McTask{t, f, false}}, n, base_seed, workers).front();
}

DensityReport mc_negative_control(const McParams& params, Functional f, double t, std::int64_t n,
                                  std::uint64_t base_seed, int workers) {
  return mc_run(params, {McTask{t, f, true}}, n, base_seed, workers).front();
}

}  // namespace oud
