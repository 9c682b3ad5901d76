#include "oudelay/path_sampler.hpp"

#include <cmath>
#include <vector>

#include "oudelay/rng.hpp"

namespace oud {

namespace {
constexpr std::int64_t kBlock = 4096;  // increments per RNG stream
}

GridPath sample_w(double t_left, double t_right, double dt, const MeasureModel& measure,
                  std::uint64_t seed, std::optional<double> w0_override) {
  const std::int64_t spu = steps_per_unit_of(dt);
  const std::int64_t lo = grid_index(t_left, spu);
  const std::int64_t hi = grid_index(t_right, spu);
  if (!(lo < 0 && 0 < hi)) {
    throw std::invalid_argument("window must satisfy t_left < 0 < t_right");
  }

  const double step_sd = std::sqrt(1.0 / static_cast<double>(spu));
  std::vector<double> values(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const std::int64_t origin = -lo;  // array index of time 0; raw value there is 0

  // side 0: increments to the right of 0, side 1: to the left.
  for (int side = 0; side <= 1; ++side) {
    const std::int64_t steps = (side == 0) ? hi : -lo;
    double acc = 0.0;
    std::int64_t j = 0;
    while (j < steps) {
      NormalStream z(seed, static_cast<std::uint64_t>(side),
                     static_cast<std::uint64_t>(j / kBlock));
      const std::int64_t end = std::min(steps, (j / kBlock + 1) * kBlock);
      for (; j < end; ++j) {
        acc += step_sd * z();
        const std::int64_t idx = (side == 0) ? origin + j + 1 : origin - j - 1;
        values[static_cast<std::size_t>(idx)] = acc;
      }
    }
  }

  double w0;
  if (w0_override) {
    w0 = *w0_override;
  } else {
    NormalStream z(seed, 2, 0);
    w0 = measure.sample(z);
  }
  return GridPath(spu, lo, w0, std::move(values));
}

}  // namespace oud
