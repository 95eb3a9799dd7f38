#include <doctest.h>

#include <cmath>

#include "ptrlab/boundary_ops.hpp"
#include "ptrlab/presets.hpp"
#include "ptrlab/random.hpp"

using namespace ptrlab;

namespace {
PresetInstance inst_1d(int res = 64) {
  return instantiate_preset(find_preset("1d-homog"), res, 1.0);
}
}  // namespace

TEST_CASE("time reversal: involution, support reflection, linear ramp") {
  auto [grid, medium] = inst_1d();
  BoundarySignal f = BoundarySignal::zeros(grid);
  for (int b = 0; b < f.n_boundary; ++b)
    for (int k = 0; k < f.n_time; ++k) f.at(b, k) = grid.time_at(k);

  const BoundarySignal rf = time_reverse(f);
  for (int k = 0; k < f.n_time; ++k)
    CHECK(rf.at(0, k) == doctest::Approx(grid.horizon - grid.time_at(k)));

  // R(Rf) = f bit-exactly.
  const BoundarySignal rrf = time_reverse(rf);
  CHECK(rrf.v == f.v);

  // Support in [0, T] reflects to [T, 2T].
  BoundarySignal g = BoundarySignal::zeros(grid);
  for (int k = 0; k < g.n_time / 2; ++k) g.at(0, k) = 1.0;
  const BoundarySignal rg = time_reverse(g);
  for (int k = 0; k < g.n_time / 2; ++k) CHECK(rg.at(0, k) == 0.0);
  for (int k = g.n_time / 2; k < g.n_time; ++k) CHECK(rg.at(0, k) == 1.0);
}

TEST_CASE("time filter on the constant signal reproduces the window lengths") {
  auto [grid, medium] = inst_1d();
  const double T = grid.T();
  BoundarySignal ones = BoundarySignal::zeros(grid);
  for (auto& v : ones.v) v = 1.0;

  // Section-2 variant: Jf(t) = max(0, T - t).
  const BoundarySignal js = time_filter(ones, FilterVariant::kSection2);
  for (int k = 0; k < grid.n_time; k += 3) {
    const double t = grid.time_at(k);
    CHECK(js.at(0, k) == doctest::Approx(std::max(0.0, T - t)).epsilon(1e-12));
  }

  // Intro variant: Jf(t) = min(t, 2T - t) / 2.
  const BoundarySignal ji = time_filter(ones, FilterVariant::kIntro);
  for (int k = 0; k < grid.n_time; k += 3) {
    const double t = grid.time_at(k);
    CHECK(ji.at(1, k) ==
          doctest::Approx(0.5 * std::min(t, grid.horizon - t)).epsilon(1e-12));
  }

  // Zero in, zero out.
  const BoundarySignal z = time_filter(BoundarySignal::zeros(grid),
                                       FilterVariant::kIntro);
  for (double v : z.v) CHECK(v == 0.0);
}

TEST_CASE("time filter is linear and adjoint across the two variants") {
  auto [grid, medium] = inst_1d();
  const BoundarySignal f = random_smooth_signal(grid, 11);
  const BoundarySignal g = random_smooth_signal(grid, 12);

  BoundarySignal combo = f;
  combo *= 2.5;
  axpy(-1.25, g, combo);
  BoundarySignal expect = time_filter(f, FilterVariant::kIntro);
  expect *= 2.5;
  axpy(-1.25, time_filter(g, FilterVariant::kIntro), expect);
  const BoundarySignal got = time_filter(combo, FilterVariant::kIntro);
  for (std::size_t i = 0; i < got.v.size(); ++i)
    CHECK(got.v[i] == doctest::Approx(expect.v[i]).epsilon(1e-12));

  // <J_intro f, g> = <f, J_section2 g>: the two definitions are transposes
  // on the midpoint lattice.
  const double lhs =
      inner_product_boundary(grid, time_filter(f, FilterVariant::kIntro), g);
  const double rhs =
      inner_product_boundary(grid, f, time_filter(g, FilterVariant::kSection2));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("projector: masks, idempotence, degenerate windows") {
  auto [grid, medium] = inst_1d();
  // B = dM x [0, T] keeps exactly the first half of the lattice.
  ProjectorSpec full;
  full.patches.push_back({whole_boundary(grid), grid.T()});
  const auto mask = projector_mask(grid, full);
  for (int b = 0; b < grid.n_boundary(); ++b)
    for (int k = 0; k < grid.n_time; ++k)
      CHECK(static_cast<bool>(mask[b * grid.n_time + k]) == (k < grid.n_time / 2));

  const BoundarySignal f = random_smooth_signal(grid, 21);
  const BoundarySignal pf = project(f, mask);
  const BoundarySignal ppf = project(pf, mask);
  CHECK(ppf.v == pf.v);  // idempotent bit-exactly

  // T_j = 0: the window [T, T] contains no midpoint sample, so the projector
  // is empty (samples straddle T at T +- dt/2).
  ProjectorSpec degenerate;
  degenerate.patches.push_back({whole_boundary(grid), 0.0});
  CHECK(mask_empty(projector_mask(grid, degenerate)));

  // Validation errors.
  ProjectorSpec bad;
  bad.patches.push_back({{}, 0.5});
  CHECK_THROWS_AS(projector_mask(grid, bad), std::invalid_argument);
  ProjectorSpec late;
  late.patches.push_back({whole_boundary(grid), grid.T() + 0.5});
  CHECK_THROWS_AS(projector_mask(grid, late), std::invalid_argument);
}

TEST_CASE("boundary inner product: measure, projector self-adjointness, R isometry") {
  auto [grid, medium] = inst_1d();  // T = 1.0
  BoundarySignal ones = BoundarySignal::zeros(grid);
  for (auto& v : ones.v) v = 1.0;
  // Two endpoints x horizon 2T x 1 = 4, exact on the midpoint lattice.
  CHECK(inner_product_boundary(grid, ones, ones) ==
        doctest::Approx(4.0).epsilon(1e-12));

  const BoundarySignal f = random_smooth_signal(grid, 31);
  const BoundarySignal g = random_smooth_signal(grid, 32);
  ProjectorSpec spec;
  spec.patches.push_back({{0}, 0.35});
  const auto mask = projector_mask(grid, spec);
  const double pf_g = inner_product_boundary(grid, project(f, mask), g);
  const double f_pg = inner_product_boundary(grid, f, project(g, mask));
  CHECK(pf_g == doctest::Approx(f_pg).epsilon(1e-14));
  CHECK(inner_product_boundary(grid, project(f, mask), f) >= 0.0);

  // R preserves the inner product exactly (midpoint lattice, any parity).
  const double rf_rg =
      inner_product_boundary(grid, time_reverse(f), time_reverse(g));
  CHECK(rf_rg == doctest::Approx(inner_product_boundary(grid, f, g)).epsilon(1e-14));
}

TEST_CASE("boundary patches: cyclic windows and 1D degeneracy") {
  auto inst2 = instantiate_preset(find_preset("2d-homog"), 32, 1.0);
  const auto patch = boundary_patch(inst2.grid, 0, 3.2 * inst2.grid.h);
  CHECK(patch.size() == 7);  // center +- 3 nodes, cyclic through the corner

  auto [grid1, m1] = inst_1d();
  const auto p1 = boundary_patch(grid1, 1, 0.4);
  CHECK(p1 == std::vector<int>{1});
}
