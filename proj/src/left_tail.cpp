#include "oudelay/left_tail.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oudelay/quadrature.hpp"

namespace oud {

namespace {

// Driver increment segment W_{v - c} - W_{-c-1} for v in [-1, 0], from raw
// values only.
std::vector<double> base_segment(const GridPath& w, std::int64_t n, int c) {
  const std::int64_t lo = -static_cast<std::int64_t>(c + 1) * n;  // time -c-1
  if (!w.covers_index(lo) || !w.covers_index(lo + n)) {
    throw window_error("driver does not cover [-" + std::to_string(c + 1) + ", -" +
                       std::to_string(c) + "]");
  }
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  const double anchor = w.raw(lo);
  for (std::int64_t i = 0; i <= n; ++i) {
    out[static_cast<std::size_t>(i)] = w.raw(lo + i) - anchor;
  }
  return out;
}

double guard_bound(double max_g_end, int k) {
  return max_g_end + 3.0 * std::sqrt(2.0 * std::log(static_cast<double>(std::max(k, 2))));
}

}  // namespace

RGrid RGrid::build(const FundamentalSolution& fs, std::int64_t steps_per_unit, double t_left,
                   int k_q) {
  RGrid table;
  table.steps_per_unit = steps_per_unit;
  table.left_index = grid_index(t_left, steps_per_unit);
  if (table.left_index > 0) throw std::invalid_argument("t_left must be <= 0");
  const std::size_t m = static_cast<std::size_t>(-table.left_index) + 1;
  table.values.resize(static_cast<std::size_t>(k_q) + 1);
  for (int k = 0; k <= k_q; ++k) {
    auto& row = table.values[static_cast<std::size_t>(k)];
    row.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = static_cast<double>(table.left_index + static_cast<std::int64_t>(i)) /
                       static_cast<double>(steps_per_unit);
      row[i] = fs.eval(v + static_cast<double>(k));
    }
  }
  return table;
}

SegmentFunction series_f(const GridPath& w, double a, int k_offset, int k_f) {
  if (!(a > -1.0 && a < 0.0)) throw std::invalid_argument("a must lie in (-1, 0)");
  if (k_f < 1) throw std::invalid_argument("k_f must be >= 1");
  if (k_offset < 0) throw std::invalid_argument("k_offset must be >= 0");
  const std::int64_t n = w.steps_per_unit();
  const double dt = 1.0 / static_cast<double>(n);

  std::vector<double> g(static_cast<std::size_t>(n + 1), 0.0);
  for (int k = k_f; k >= 1; --k) {
    std::vector<double> integrand = base_segment(w, n, k_offset + k);
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] += g[i];
    g = cumtrapz_corrected(integrand, dt);
    for (double& v : g) v *= a;
  }
  std::vector<double> base0 = base_segment(w, n, k_offset);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += base0[i];
  return SegmentFunction(n, std::move(g));
}

namespace {

struct Assembled {
  std::vector<SegmentFunction> g;
  GridPath q;
  GridPath x;
  double max_g_end;
};

// q and x on [t_left, 0] from the segment series g_0..g_kq.
Assembled assemble(const GridPath& w, std::vector<SegmentFunction> g,
                   const FundamentalSolution& fs, double t_left, const RGrid* table) {
  const std::int64_t n = w.steps_per_unit();
  const std::int64_t lo = grid_index(t_left, n);
  if (lo >= 0) throw std::invalid_argument("t_left must be < 0");
  const int k_q = static_cast<int>(g.size()) - 1;
  if (table &&
      (table->steps_per_unit != n || table->left_index > lo ||
       static_cast<int>(table->values.size()) <= k_q)) {
    throw std::invalid_argument("r table does not match the requested grid");
  }

  const std::size_t m = static_cast<std::size_t>(-lo) + 1;
  std::vector<double> q(m, 0.0);
  double max_g_end = 0.0;
  for (int k = 0; k <= k_q; ++k) {
    const double gk0 = g[static_cast<std::size_t>(k)].back();
    max_g_end = std::max(max_g_end, std::abs(gk0));
    if (table) {
      const auto& row = table->values[static_cast<std::size_t>(k)];
      const std::size_t off = static_cast<std::size_t>(lo - table->left_index);
      for (std::size_t i = 0; i < m; ++i) q[i] += gk0 * row[off + i];
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        const double v = static_cast<double>(lo + static_cast<std::int64_t>(i)) /
                         static_cast<double>(n);
        q[i] += gk0 * fs.eval(v + static_cast<double>(k));
      }
    }
  }

  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t gi = lo + static_cast<std::int64_t>(i);
    if (gi == 0) {
      // continuous extension at 0; the segment part of the right-boundary
      // formula is identically zero
      x[i] = q[i];
      continue;
    }
    const std::int64_t k_seg = (-gi - 1) / n;  // right segment at exact boundaries
    if (k_seg > k_q) throw window_error("segment index exceeds k_q");
    const std::size_t local = static_cast<std::size_t>(gi + (k_seg + 1) * n);
    x[i] = g[static_cast<std::size_t>(k_seg)].values[local] + q[i];
  }

  Assembled out{std::move(g), GridPath(n, lo, 0.0, std::move(q)), GridPath(n, lo, 0.0, std::move(x)),
                max_g_end};
  return out;
}

}  // namespace

GridPath series_q(const GridPath& w, double a, const FundamentalSolution& fs, int k_q, int k_f,
                  double t_left) {
  if (k_q < 0) throw std::invalid_argument("k_q must be >= 0");
  std::vector<SegmentFunction> g;
  g.reserve(static_cast<std::size_t>(k_q) + 1);
  for (int k = 0; k <= k_q; ++k) g.push_back(series_f(w, a, k, k_f));
  return assemble(w, std::move(g), fs, t_left, nullptr).q;
}

LeftTailResult construct_left(const GridPath& w, double a, const FundamentalSolution& fs,
                              double tol, double t_left, std::optional<int> k_q_override,
                              int k_f, const RGrid* r_table) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const std::int64_t lo = grid_index(t_left, w.steps_per_unit());
  if (lo >= 0) throw std::invalid_argument("t_left must be < 0");
  const int k_min = static_cast<int>(
      (-lo + w.steps_per_unit() - 1) / w.steps_per_unit());  // ceil(-t_left)
  if (!fs.decay()) throw std::runtime_error("envelope unavailable: fundamental solution has no decay fit");
  const DecayEnvelope env = *fs.decay();

  std::vector<SegmentFunction> g;
  double max_g_end = 0.0;
  int k_q;
  if (k_q_override) {
    k_q = *k_q_override;
    if (k_q < k_min) throw std::invalid_argument("k_q override too small for t_left");
    for (int k = 0; k <= k_q; ++k) {
      g.push_back(series_f(w, a, k, k_f));
      max_g_end = std::max(max_g_end, std::abs(g.back().back()));
    }
  } else {
    const double geo = 1.0 / (1.0 - std::exp(-env.lambda));
    int k = 0;
    for (;; ++k) {
      try {
        g.push_back(series_f(w, a, k, k_f));
      } catch (const window_error&) {
        if (k < k_min) throw;  // cannot even reach the requested window
        throw std::runtime_error(
            "tol unreachable: driver window exhausted before the q-series tail bound met tol");
      }
      max_g_end = std::max(max_g_end, std::abs(g.back().back()));
      // same certified bound that is checked after assembly
      if (k >= k_min &&
          guard_bound(max_g_end, k) * env.at(t_left + static_cast<double>(k + 1)) * geo < tol) {
        break;
      }
      if (k > 1000) throw std::runtime_error("tol unreachable: k_q selection exceeded 1000 terms");
    }
    k_q = k;
  }

  Assembled asm_out = assemble(w, std::move(g), fs, t_left, r_table);

  // geometric tail of the envelope past k_q, at the worst (leftmost) v
  const double tail_start = t_left + static_cast<double>(k_q + 1);
  const double tail_bound = guard_bound(asm_out.max_g_end, k_q) * env.at(tail_start) /
                            (1.0 - std::exp(-env.lambda));
  if (!k_q_override && tail_bound > tol) {
    throw std::runtime_error("tol unreachable: certified tail bound exceeds tol");
  }
  return LeftTailResult{a,
                        k_f,
                        k_q,
                        tail_bound,
                        asm_out.max_g_end,
                        asm_out.g.front(),
                        std::move(asm_out.g),
                        std::move(asm_out.q),
                        std::move(asm_out.x)};
}

double segment_glue_check(const LeftTailResult& result, const FundamentalSolution& fs) {
  const std::int64_t lo = result.x_left.left_index();
  const std::int64_t n = result.x_left.steps_per_unit();
  const int k_max = static_cast<int>((-lo - 1) / n);  // boundaries strictly inside the window
  double worst = 0.0;
  for (int k = 1; k <= std::min(k_max, result.k_q); ++k) {
    double left_val = result.g[static_cast<std::size_t>(k)].back();
    double right_val = result.g[static_cast<std::size_t>(k - 1)].front();
    for (int j = 0; j <= result.k_q; ++j) {
      const double g0 = result.g[static_cast<std::size_t>(j)].back();
      left_val += g0 * fs.eval_left(static_cast<double>(j - k));
      right_val += g0 * fs.eval(static_cast<double>(j - k));
    }
    worst = std::max(worst, std::abs(left_val - right_val));
  }
  return worst;
}

}  // namespace oud
