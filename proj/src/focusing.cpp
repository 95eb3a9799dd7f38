#include "ptrlab/focusing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptrlab/wave_solver.hpp"

namespace ptrlab {

void validate_focus_spec(const DomainGrid& grid, const FocusSpec& spec) {
  if (spec.z_pos < 0 || spec.z_pos >= grid.n_boundary())
    throw std::invalid_argument("focus: z_hat out of range");
  if (!(spec.T0 > 0.0 && spec.T0 < spec.T_hat && spec.T_hat < grid.T()))
    throw std::invalid_argument("focus: need 0 < T0 < T_hat < T");
  if (spec.alphas.empty())
    throw std::invalid_argument("focus: alpha schedule must be nonempty");
  for (std::size_t i = 1; i < spec.alphas.size(); ++i)
    if (!(spec.alphas[i] < spec.alphas[i - 1]))
      throw std::invalid_argument("focus: alpha schedule must decrease");
  if (spec.j_max < 0) throw std::invalid_argument("focus: j_max must be >= 0");
}

std::vector<int> focus_patch(const DomainGrid& grid, const FocusSpec& spec,
                             int j) {
  const double r0 =
      spec.r0 > 0.0 ? spec.r0 : grid.boundary_measure() / 8.0;
  return boundary_patch(grid, spec.z_pos, r0 * std::pow(2.0, -j));
}

FocusingSource focusing_source(const ConnectingOperator& op,
                               const BoundarySignal& f, const FocusSpec& spec,
                               const IterationConfig& config, int j,
                               double alpha) {
  const DomainGrid& grid = op.grid();
  validate_focus_spec(grid, spec);
  if (j < 0) j = spec.j_max;
  if (alpha <= 0.0) alpha = spec.alphas.back();

  ProjectorSpec b;
  b.patches.push_back({focus_patch(grid, spec, j), spec.T_hat});
  b.patches.push_back({whole_boundary(grid), spec.T0});
  ProjectorSpec b_prime;
  b_prime.patches.push_back({whole_boundary(grid), spec.T0});

  IterationConfig cfg = config;
  cfg.alpha = alpha;
  const auto mask_b = projector_mask(grid, b);
  const auto mask_bp = projector_mask(grid, b_prime);
  if (cfg.omega <= 0.0) {
    // ||P' K P'|| <= ||P K P|| for B' inside B, so one estimate covers both runs.
    const NormEstimate est =
        estimate_pkp_norm(op, mask_b, cfg.omega_power_iters, cfg.seed);
    cfg.omega = 2.2 * (1.0 + est.value);
  }

  FocusingSource src;
  src.run_b = ptr_iterate(op, f, mask_b, cfg);
  src.run_bprime = ptr_iterate(op, f, mask_bp, cfg);
  // The wave of h(B) - h(B') converges to (chi_{N_B} - chi_{N_B'}) u^f(T),
  // the part of u^f(T) supported on the slab M(Gamma_j,T_hat) \ M(dM,T0).
  src.h_tilde = src.run_b.h - src.run_bprime.h;
  return src;
}

ConcentrationReport focusing_profile(const DomainGrid& grid,
                                     const Medium& medium,
                                     const BoundarySignal& h_tilde,
                                     const FocusSpec& spec) {
  validate_focus_spec(grid, spec);
  ConcentrationReport rep;
  rep.x_hat = normal_geodesic_point(grid, medium, spec.z_pos, spec.T_hat);
  rep.scale_factor =
      std::pow(spec.T_hat - spec.T0, -0.5 * (grid.dim + 1));

  const ForwardSolution sol = solve_forward(grid, medium, h_tilde, {grid.T()});
  const std::vector<double>& u = sol.snapshots[0].u;
  const double total2 = inner_product_volume(grid, medium, u, u);
  rep.total_mass = std::sqrt(total2);

  const DistanceField to_xhat =
      travel_time_from_point(grid, medium, rep.x_hat.x, rep.x_hat.y);
  rep.radii = {2.0 * grid.h, 4.0 * grid.h, 8.0 * grid.h};
  const double hm = std::pow(grid.h, grid.dim);
  for (double rho : rep.radii) {
    double mass2 = 0.0;
    for (int n = 0; n < grid.n_nodes(); ++n)
      if (to_xhat.d[n] <= rho)
        mass2 += u[n] * u[n] * grid.cell_factor(n) *
                 std::pow(medium.c[n], -grid.dim) * hm;
    rep.mass_fraction.push_back(total2 > 0.0 ? mass2 / total2 : 0.0);
  }

  const DistanceField from_z = travel_time_distance(
      grid, medium, {grid.boundary_nodes[spec.z_pos]});
  const DistanceField from_bnd =
      travel_time_distance(grid, medium, grid.boundary_nodes);
  double slab2 = 0.0;
  for (int n = 0; n < grid.n_nodes(); ++n)
    if (from_z.d[n] <= spec.T_hat && from_bnd.d[n] > spec.T0)
      slab2 += u[n] * u[n] * grid.cell_factor(n) *
               std::pow(medium.c[n], -grid.dim) * hm;
  rep.slab_fraction = total2 > 0.0 ? slab2 / total2 : 0.0;
  return rep;
}

PointValueEstimate point_value_recover(const ConnectingOperator& op,
                                       const DomainGrid& grid,
                                       const Medium& medium,
                                       const BoundarySignal& f,
                                       const FocusSpec& spec,
                                       const BoundarySignal& probe,
                                       const IterationConfig& config,
                                       const std::vector<double>& thicknesses) {
  validate_focus_spec(grid, spec);
  std::vector<double> deltas = thicknesses;
  if (deltas.empty()) deltas = {8.0 * grid.h, 4.0 * grid.h, 2.0 * grid.h};
  for (double d : deltas)
    if (!(d > 0.0 && d < spec.T_hat))
      throw std::invalid_argument("point_value_recover: bad slab thickness");

  PointValueEstimate est;
  const double expo = 0.5 * (grid.dim + 1);
  const C0Estimate c0 = c0_constant(grid, medium, spec.z_pos, spec.T_hat,
                                    2.0 * deltas.front());
  est.c0 = c0.value;

  for (double delta : deltas) {
    FocusSpec fs = spec;
    fs.T0 = spec.T_hat - delta;
    const FocusingSource src = focusing_source(op, f, fs, config);
    // <u^{h~}(T), u^g(T)> from boundary data; the focused wave integrates
    // u^f against the slab, so dividing by vol(slab) ~ delta^{(m+1)/2} / C0
    // recovers the point value.
    const double paired = op.blago_inner_product(src.h_tilde, probe);
    est.schedule_values.push_back(c0.value * paired / std::pow(delta, expo));
  }
  est.value = est.schedule_values.back();  // finest slab
  const auto [mn, mx] =
      std::minmax_element(est.schedule_values.begin(), est.schedule_values.end());
  est.spread = (*mx - *mn) / std::max(std::abs(est.value), 1e-300);
  est.reliable = est.spread <= 0.5;
  return est;
}

BoundarySignal plateau_probe_1d(const DomainGrid& grid, const Medium& medium,
                                double x_max) {
  if (grid.dim != 1)
    throw std::invalid_argument("plateau_probe_1d: 1D grids only");
  if (medium.c_max - medium.c_min > 1e-9 * medium.c_max)
    throw std::invalid_argument("plateau_probe_1d: homogeneous media only");
  for (double e : medium.eta)
    if (std::abs(e) > 1e-12)
      throw std::invalid_argument("plateau_probe_1d: requires eta == 0");
  for (double qv : medium.q)
    if (std::abs(qv) > 1e-12)
      throw std::invalid_argument("plateau_probe_1d: requires q == 0");

  const double c0 = medium.c[0];
  const double T = grid.T();
  const double tau_tot = grid.extent_x / c0;  // travel time across
  const double w = std::max(6.0 * grid.dt, 0.02);
  // Unit-integral bump at t0: u^g(x, T) == 1 for x <= x_max needs the front
  // past x_max (t0 <= T - x_max/c0 - 3w) and no reflected arrival there yet
  // (t0 >= T + x_max/c0 - 2 tau_tot + 3w), plus support inside t > 0.
  const double lo = std::max(3.0 * w, T + x_max / c0 - 2.0 * tau_tot + 3.0 * w);
  const double hi = T - x_max / c0 - 3.0 * w;
  if (!(lo < hi))
    throw std::invalid_argument(
        "plateau_probe_1d: no admissible bump time for this x_max/T");
  const double t0 = 0.5 * (lo + hi);

  BoundarySignal g = BoundarySignal::zeros(grid);
  const double norm = 1.0 / (w * std::sqrt(2.0 * M_PI));
  for (int k = 0; k < grid.n_time; ++k) {
    const double t = grid.time_at(k);
    const double z = (t - t0) / w;
    g.at(0, k) = norm * std::exp(-0.5 * z * z);
  }
  return g;
}

}  // namespace ptrlab
