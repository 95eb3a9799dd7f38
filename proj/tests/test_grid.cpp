#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ptrlab/grid.hpp"

using namespace ptrlab;

TEST_CASE("1D grid: spacing, boundary weights, CFL") {
  const DomainGrid g = build_grid({1.0}, {256}, 1.5);
  CHECK(g.dim == 1);
  CHECK(g.h == doctest::Approx(1.0 / 255).epsilon(1e-14));
  CHECK(g.n_boundary() == 2);
  CHECK(g.boundary_weight[0] == 1.0);
  CHECK(g.boundary_weight[1] == 1.0);
  CHECK(g.boundary_measure() == 2.0);
  // 2T is an even integer multiple of dt by construction.
  CHECK(g.n_time % 2 == 0);
  CHECK(g.n_time * g.dt == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g.dt <= 0.9 * g.h + 1e-15);
}

TEST_CASE("1D grid with c_max=2: dt respects the CFL rule 0.9 h / c_max") {
  const DomainGrid g = build_grid({1.0}, {256}, 1.5, 2.0);
  CHECK(g.dt <= 0.9 * g.h / 2.0 + 1e-15);
}

TEST_CASE("2D grid: unit-square perimeter within 1 percent") {
  const DomainGrid g = build_grid({1.0, 1.0}, {64, 64}, 1.5);
  CHECK(g.dim == 2);
  CHECK(g.n_boundary() == 4 * 63);
  CHECK(g.boundary_measure() == doctest::Approx(4.0).epsilon(0.01));
  CHECK(g.dt <= 0.9 / std::sqrt(2.0) * g.h + 1e-15);
  // Chain ordering: starts at the origin corner, no duplicates.
  CHECK(g.boundary_nodes[0] == 0);
  for (int p = 0; p < g.n_boundary(); ++p)
    CHECK(g.boundary_pos[g.boundary_nodes[p]] == p);
}

TEST_CASE("grid cell factors: interior 1, faces 1/2, corners 1/4") {
  const DomainGrid g = build_grid({1.0, 1.0}, {32, 32}, 1.0);
  CHECK(g.cell_factor(g.node(0, 0)) == 0.25);
  CHECK(g.cell_factor(g.node(5, 0)) == 0.5);
  CHECK(g.cell_factor(g.node(5, 7)) == 1.0);
  // Trapezoid weights tile the unit square exactly.
  double area = 0.0;
  for (int n = 0; n < g.n_nodes(); ++n) area += g.cell_factor(n) * g.h * g.h;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid validation errors") {
  CHECK_THROWS_AS(build_grid({-1.0}, {64}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({1.0}, {8}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({1.0}, {64}, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({1.0, 2.0}, {64, 64}, 1.0), std::invalid_argument);
}
