#pragma once

#include <cstdint>
#include <optional>

#include "oudelay/grid.hpp"
#include "oudelay/measure.hpp"

namespace oud {

/// Samples two-sided Brownian motion with W_0 ~ measure on the grid of
/// [t_left, t_right].  Increments on the two sides of 0 come from separate
/// streams keyed by (seed, side, block), so the same seed reproduces the
/// path bit for bit for any window and worker layout.  The test hook
/// w0_override pins W_0 exactly (the measure forbids stddev -> 0 limits).
GridPath sample_w(double t_left, double t_right, double dt, const MeasureModel& measure,
                  std::uint64_t seed, std::optional<double> w0_override = std::nullopt);

}  // namespace oud
