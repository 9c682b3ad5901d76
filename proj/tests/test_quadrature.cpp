#include <doctest.h>

#include <cmath>
#include <vector>

#include "oudelay/quadrature.hpp"

using namespace oud;

TEST_CASE("cumtrapz is exact on linear integrands") {
  const int n = 16;
  const double dt = 1.0 / n;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = 2.0 * i * dt;  // integral of 2x is x^2
  const std::vector<double> out = cumtrapz(f, dt);
  CHECK(out[0] == 0.0);
  for (int i = 0; i <= n; ++i) {
    const double x = i * dt;
    CHECK(out[i] == doctest::Approx(x * x).epsilon(1e-14));
  }
}

TEST_CASE("endpoint-corrected trapezoid is fourth order on smooth integrands") {
  auto max_err = [](int n) {
    const double dt = 1.0 / n;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = std::sin(3.0 * i * dt);
    const std::vector<double> plain = cumtrapz(f, dt);
    const std::vector<double> corrected = cumtrapz_corrected(f, dt);
    double ep = 0.0, ec = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double exact = (1.0 - std::cos(3.0 * i * dt)) / 3.0;
      ep = std::max(ep, std::abs(plain[i] - exact));
      ec = std::max(ec, std::abs(corrected[i] - exact));
    }
    return std::pair<double, double>{ep, ec};
  };
  const auto [plain128, corr128] = max_err(128);
  const auto [plain256, corr256] = max_err(256);
  CHECK(corr128 < 1e-8);
  CHECK(corr128 < plain128 / 100.0);
  // roughly 16x reduction per halving
  CHECK(corr256 < corr128 / 8.0);
}

TEST_CASE("pairwise_sum matches the plain sum and splits deterministically") {
  std::vector<double> v(1000);
  double plain = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::cos(static_cast<double>(i));
    plain += v[i];
  }
  CHECK(pairwise_sum(v) == doctest::Approx(plain).epsilon(1e-12));
  CHECK(pairwise_sum(std::vector<double>{1.0, 2.0, 3.0}) == 6.0);
}
