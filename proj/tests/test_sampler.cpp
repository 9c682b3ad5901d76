#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oudelay/path_sampler.hpp"

using namespace oud;

TEST_CASE("sampling is a pure function of (parameters, seed)") {
  const MeasureModel m;
  const GridPath w1 = sample_w(-2.0, 2.0, 1.0 / 64.0, m, 7);
  const GridPath w2 = sample_w(-2.0, 2.0, 1.0 / 64.0, m, 7);
  REQUIRE(w1.size() == w2.size());
  CHECK(w1.base() == w2.base());
  for (std::int64_t g = w1.left_index(); g <= w1.right_index(); ++g) {
    CHECK(w1.raw(g) == w2.raw(g));
  }
  const GridPath w3 = sample_w(-2.0, 2.0, 1.0 / 64.0, m, 8);
  CHECK(w3.raw(1) != w1.raw(1));
}

TEST_CASE("the origin anchors the raw path and carries the sampled offset") {
  const MeasureModel m(0.5, 2.0);
  const GridPath w = sample_w(-1.0, 1.0, 1.0 / 32.0, m, 3);
  CHECK(w.raw(0) == 0.0);
  CHECK(w.value(0) == w.base());
  const GridPath forced = sample_w(-1.0, 1.0, 1.0 / 32.0, m, 3, 4.25);
  CHECK(forced.base() == 4.25);
  CHECK(forced.raw(5) == w.raw(5));  // override changes only the offset
}

TEST_CASE("extending the window preserves already-sampled values") {
  const MeasureModel m;
  const GridPath small = sample_w(-2.0, 2.0, 1.0 / 128.0, m, 11);
  const GridPath big = sample_w(-40.0, 4.0, 1.0 / 128.0, m, 11);
  CHECK(big.base() == small.base());
  for (std::int64_t g = small.left_index(); g <= small.right_index(); ++g) {
    CHECK(big.raw(g) == small.raw(g));
  }
}

TEST_CASE("increment moments match Brownian scaling") {
  const double dt = 1.0 / 256.0;
  const MeasureModel m;
  const GridPath w = sample_w(-1.0, 391.0, dt, m, 17);
  const std::int64_t n = w.right_index();  // 100096 right-side increments
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t g = 0; g < n; ++g) {
    const double inc = w.raw(g + 1) - w.raw(g);
    sum += inc;
    sumsq += inc * inc;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = sumsq / nn - mean * mean;
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / nn));
  CHECK(var >= dt * 0.95);
  CHECK(var <= dt * 1.05);
}

TEST_CASE("left and right sides are independent") {
  const int paths = 2000;
  const MeasureModel m;
  double sl = 0, sr = 0, sll = 0, srr = 0, slr = 0;
  for (int i = 0; i < paths; ++i) {
    const GridPath w = sample_w(-1.0, 1.0, 0.25, m, 100 + static_cast<std::uint64_t>(i));
    const double left = w.raw(-2) - w.raw(-3);
    const double right = w.raw(3) - w.raw(2);
    sl += left;
    sr += right;
    sll += left * left;
    srr += right * right;
    slr += left * right;
  }
  const double n = paths;
  const double cov = slr / n - (sl / n) * (sr / n);
  const double corr = cov / std::sqrt((sll / n - (sl / n) * (sl / n)) *
                                      (srr / n - (sr / n) * (sr / n)));
  CHECK(std::abs(corr) <= 4.0 / std::sqrt(n));
}

TEST_CASE("the time-0 marginal follows the configured distribution") {
  const int paths = 4000;
  const MeasureModel m(0.3, 1.7);
  std::vector<double> w0(paths);
  for (int i = 0; i < paths; ++i) {
    w0[static_cast<std::size_t>(i)] =
        sample_w(-0.5, 0.5, 0.25, m, 5000 + static_cast<std::uint64_t>(i)).value(0);
  }
  std::sort(w0.begin(), w0.end());
  double ks = 0.0;
  for (int i = 0; i < paths; ++i) {
    const double f = m.cdf(w0[static_cast<std::size_t>(i)]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / paths));
    ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / paths));
  }
  CHECK(ks <= 1.63 / std::sqrt(static_cast<double>(paths)));  // 1% critical value
}

TEST_CASE("degenerate windows are rejected") {
  const MeasureModel m;
  CHECK_THROWS_AS(sample_w(0.0, 1.0, 0.25, m, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_w(-1.0, 0.0, 0.25, m, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_w(-1.0, 1.0, 0.3, m, 1), std::invalid_argument);
}
