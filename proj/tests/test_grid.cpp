#include <doctest.h>

#include <cmath>

#include "oudelay/grid.hpp"

using namespace oud;

TEST_CASE("grid_index maps aligned times and rejects misaligned ones") {
  CHECK(grid_index(0.0, 256) == 0);
  CHECK(grid_index(1.0, 256) == 256);
  CHECK(grid_index(-2.5, 2) == -5);
  CHECK(grid_index(0.25, 4) == 1);
  CHECK_THROWS_AS(grid_index(0.3, 4), std::invalid_argument);
  CHECK_THROWS_AS(grid_index(1.0 / 3.0, 256), std::invalid_argument);
}

TEST_CASE("steps_per_unit_of accepts only integer 1/dt") {
  CHECK(steps_per_unit_of(0.25) == 4);
  CHECK(steps_per_unit_of(1.0 / 512.0) == 512);
  CHECK(steps_per_unit_of(1.0) == 1);
  CHECK_THROWS_AS(steps_per_unit_of(0.3), std::invalid_argument);
  CHECK_THROWS_AS(steps_per_unit_of(-0.25), std::invalid_argument);
  CHECK_THROWS_AS(steps_per_unit_of(0.0), std::invalid_argument);
}

TEST_CASE("GridPath accessors and window checks") {
  GridPath p(4, -8, 1.5, {0, 1, 2, 3, 4, 5, 6, 7, 8});  // window [-2, 0]
  CHECK(p.t_left() == -2.0);
  CHECK(p.t_right() == 0.0);
  CHECK(p.size() == 9);
  CHECK(p.raw(-8) == 0.0);
  CHECK(p.raw(0) == 8.0);
  CHECK(p.value(0) == doctest::Approx(9.5));
  CHECK(p.value_at(-1.0) == doctest::Approx(5.5));
  CHECK(p.covers(-2.0, 0.0));
  CHECK_FALSE(p.covers(-2.25, 0.0));
  CHECK_THROWS_AS(p.raw(1), window_error);
  CHECK_THROWS_AS((GridPath{4, 0, 0.0, {1.0}}), std::invalid_argument);
}

TEST_CASE("shift_constant moves only the offset") {
  GridPath p(2, -2, 0.5, {0, 1, 2, 3});
  GridPath q = p.shift_constant(2.0);
  for (std::int64_t g = -2; g <= 1; ++g) {
    CHECK(q.raw(g) == p.raw(g));  // bitwise
    CHECK(q.value(g) == doctest::Approx(p.value(g) + 2.0));
  }
  GridPath r = q.shift_constant(-2.0);
  CHECK(r.base() == p.base());
}

TEST_CASE("shift_time restricts to the known subwindow") {
  GridPath p(2, -4, 0.0, {0, 1, 2, 3, 4, 5, 6, 7, 8});  // [-2, 2]
  SUBCASE("zero shift is the identity") {
    GridPath s = p.shift_time(0.0);
    CHECK(s.left_index() == p.left_index());
    CHECK(s.raw(0) == p.raw(0));
  }
  SUBCASE("value semantics: s(v) = p(v - t)") {
    GridPath s = p.shift_time(1.0);  // window [-1, 2]
    CHECK(s.t_left() == -1.0);
    CHECK(s.t_right() == 2.0);
    CHECK(s.raw_at(0.0) == p.raw_at(-1.0));
    CHECK(s.raw_at(2.0) == p.raw_at(1.0));
  }
  SUBCASE("forward then backward returns the original on the overlap") {
    GridPath s = p.shift_time(0.5).shift_time(-0.5);
    CHECK(s.t_left() == -1.5);
    CHECK(s.t_right() == 1.5);
    for (std::int64_t g = s.left_index(); g <= s.right_index(); ++g) {
      CHECK(s.raw(g) == p.raw(g));
    }
  }
  SUBCASE("composition equals the combined shift") {
    GridPath one = p.shift_time(0.5).shift_time(1.0);
    GridPath two = p.shift_time(1.5);
    CHECK(one.left_index() == two.left_index());
    for (std::int64_t g = one.left_index(); g <= one.right_index(); ++g) {
      CHECK(one.raw(g) == two.raw(g));
    }
  }
  SUBCASE("window exhaustion throws") {
    CHECK_THROWS_AS(p.shift_time(4.5), window_error);
  }
}

TEST_CASE("reverse_time mirrors the window") {
  GridPath p(1, -5, 0.25, {0, 1, 2, 3, 4, 5, 6, 7, 8});  // [-5, 3]
  GridPath r = p.reverse_time();
  CHECK(r.t_left() == -3.0);
  CHECK(r.t_right() == 5.0);
  CHECK(r.raw_at(0.0) == p.raw_at(0.0));
  CHECK(r.raw_at(-3.0) == p.raw_at(3.0));
  GridPath rr = r.reverse_time();
  CHECK(rr.t_left() == p.t_left());
  for (std::int64_t g = -5; g <= 3; ++g) CHECK(rr.raw(g) == p.raw(g));
}

TEST_CASE("SegmentFunction validates its length and maps [-1, 0]") {
  SegmentFunction f(4, {0, 1, 2, 3, 4});
  CHECK(f.front() == 0.0);
  CHECK(f.back() == 4.0);
  CHECK(f.at(-0.5) == 2.0);
  CHECK_THROWS_AS(f.at(0.25), std::invalid_argument);
  CHECK_THROWS_AS(SegmentFunction(4, {0, 1, 2}), std::invalid_argument);
  CHECK(SegmentFunction::constant(8, 3.0).at(-0.25) == 3.0);
}
