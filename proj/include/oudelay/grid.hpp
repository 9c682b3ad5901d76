#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oud {

/// Thrown when an operation needs driver data outside the sampled window.
class window_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Converts a time to its global grid index, rejecting non-aligned values.
/// Grid times are integer multiples of 1/steps_per_unit; the unit delay
/// always lands exactly on a node.
inline std::int64_t grid_index(double t, std::int64_t steps_per_unit) {
  const double x = t * static_cast<double>(steps_per_unit);
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " is not aligned to the grid (1/" +
                                std::to_string(steps_per_unit) + ")");
  }
  return static_cast<std::int64_t>(r);
}

/// Validates that 1/dt is a positive integer and returns it.
inline std::int64_t steps_per_unit_of(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double inv = 1.0 / dt;
  const double r = std::round(inv);
  if (std::abs(inv - r) > 1e-9 * inv || r < 1.0) {
    throw std::invalid_argument("1/dt must be a positive integer");
  }
  return static_cast<std::int64_t>(r);
}

/// A real-valued function sampled on a uniform grid over a finite window.
///
/// The stored value at a node is base() + raw(i).  The additive offset is
/// kept separate so that constant shifts W + x*1 touch only base() and the
/// raw samples stay bit-identical; every quantity of the construction that
/// is invariant under constant shifts is computed from raw values alone.
class GridPath {
 public:
  GridPath(std::int64_t steps_per_unit, std::int64_t left_index, double base,
           std::vector<double> values)
      : spu_(steps_per_unit),
        left_(left_index),
        base_(base),
        values_(std::move(values)) {
    if (spu_ < 1) throw std::invalid_argument("steps_per_unit must be >= 1");
    if (values_.size() < 2) throw std::invalid_argument("GridPath needs at least 2 points");
  }

  static GridPath zero(std::int64_t steps_per_unit, double t_left, double t_right) {
    const std::int64_t l = grid_index(t_left, steps_per_unit);
    const std::int64_t r = grid_index(t_right, steps_per_unit);
    if (r <= l) throw std::invalid_argument("empty window");
    return GridPath(steps_per_unit, l, 0.0,
                    std::vector<double>(static_cast<std::size_t>(r - l + 1), 0.0));
  }

  std::int64_t steps_per_unit() const { return spu_; }
  double dt() const { return 1.0 / static_cast<double>(spu_); }
  std::int64_t left_index() const { return left_; }
  std::int64_t right_index() const { return left_ + static_cast<std::int64_t>(values_.size()) - 1; }
  double t_left() const { return static_cast<double>(left_) * dt(); }
  double t_right() const { return static_cast<double>(right_index()) * dt(); }
  std::size_t size() const { return values_.size(); }
  double base() const { return base_; }
  std::span<const double> raw_values() const { return values_; }

  bool covers_index(std::int64_t g) const { return g >= left_ && g <= right_index(); }
  bool covers(double t0, double t1) const {
    return covers_index(grid_index(t0, spu_)) && covers_index(grid_index(t1, spu_));
  }

  /// Raw (offset-free) sample at global grid index g.
  double raw(std::int64_t g) const {
    if (!covers_index(g)) {
      throw window_error("grid index " + std::to_string(g) + " outside window [" +
                         std::to_string(left_) + ", " + std::to_string(right_index()) + "]");
    }
    return values_[static_cast<std::size_t>(g - left_)];
  }

  double value(std::int64_t g) const { return base_ + raw(g); }
  double raw_at(double t) const { return raw(grid_index(t, spu_)); }
  double value_at(double t) const { return base_ + raw_at(t); }

  /// W + x*1: only the offset moves, raw samples are untouched.
  GridPath shift_constant(double x) const {
    return GridPath(spu_, left_, base_ + x, values_);
  }

  /// v -> value at (v - t), restricted to the part of the original window
  /// where the shifted path is defined.
  GridPath shift_time(double t) const {
    const std::int64_t s = grid_index(t, spu_);
    const std::int64_t lo = std::max(left_, left_ + s);
    const std::int64_t hi = std::min(right_index(), right_index() + s);
    if (hi - lo + 1 < 2) throw window_error("time shift exhausts the sampled window");
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t g = lo; g <= hi; ++g) {
      out[static_cast<std::size_t>(g - lo)] = values_[static_cast<std::size_t>(g - s - left_)];
    }
    return GridPath(spu_, lo, base_, std::move(out));
  }

  /// v -> value at (-v).
  GridPath reverse_time() const {
    std::vector<double> out(values_.rbegin(), values_.rend());
    return GridPath(spu_, -right_index(), base_, std::move(out));
  }

 private:
  std::int64_t spu_;
  std::int64_t left_;
  double base_;
  std::vector<double> values_;
};

/// A function on [-1, 0] sampled on the grid (1/dt + 1 points).
struct SegmentFunction {
  std::int64_t steps_per_unit = 0;
  std::vector<double> values;  // index i <-> time -1 + i*dt

  SegmentFunction() = default;
  SegmentFunction(std::int64_t spu, std::vector<double> v)
      : steps_per_unit(spu), values(std::move(v)) {
    if (values.size() != static_cast<std::size_t>(spu + 1)) {
      throw std::invalid_argument("SegmentFunction needs 1/dt + 1 values");
    }
  }

  static SegmentFunction constant(std::int64_t spu, double c) {
    return SegmentFunction(spu, std::vector<double>(static_cast<std::size_t>(spu + 1), c));
  }

  /// Value at u in [-1, 0]; u must be grid aligned.
  double at(double u) const {
    const std::int64_t g = grid_index(u, steps_per_unit);
    if (g < -steps_per_unit || g > 0) throw std::invalid_argument("segment argument outside [-1,0]");
    return values[static_cast<std::size_t>(g + steps_per_unit)];
  }

  double front() const { return values.front(); }  // u = -1
  double back() const { return values.back(); }    // u = 0
};

}  // namespace oud
