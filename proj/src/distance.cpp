#include "ptrlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptrlab {

namespace {

struct ConditionMasks {
  std::vector<std::uint8_t> b1;  // B~1 = B1_j u B3_e
  std::vector<std::uint8_t> b2;  // B~2 = B2_j u B3_e
  std::vector<std::uint8_t> b3;  // B~3 = B1_j u B2_j u B3_e
  std::vector<std::uint8_t> b4;  // B~4 = B3_e
};

double patch_radius(const DomainGrid& grid, const DistanceQuery& q, int j) {
  const double r0 = q.r0 > 0.0 ? q.r0 : grid.boundary_measure() / 8.0;
  return r0 * std::pow(2.0, -j);
}

std::vector<double> eps_schedule(const DomainGrid& grid,
                                 const DistanceQuery& q) {
  if (!q.eps_list.empty()) return q.eps_list;
  return {4.0 * grid.h, 2.0 * grid.h};
}

ConditionMasks build_masks(const DomainGrid& grid, const DistanceQuery& q,
                           double tau, int j, double eps) {
  const double T = grid.T();
  ProjectorSpec::Patch b1{boundary_patch(grid, q.z_pos, patch_radius(grid, q, j)),
                          q.T1};
  ProjectorSpec::Patch b2{boundary_patch(grid, q.y_pos, patch_radius(grid, q, j)),
                          std::min(tau, T)};
  ProjectorSpec::Patch b3{whole_boundary(grid), std::max(0.0, q.T1 - eps)};

  ConditionMasks m;
  m.b1 = projector_mask(grid, ProjectorSpec{{b1, b3}});
  m.b2 = projector_mask(grid, ProjectorSpec{{b2, b3}});
  m.b3 = projector_mask(grid, ProjectorSpec{{b1, b2, b3}});
  m.b4 = projector_mask(grid, ProjectorSpec{{b3}});
  return m;
}

ConditionOutcome classify(double value, double scale, double theta) {
  const double mag = std::abs(value);
  const double band = theta * std::abs(scale);
  if (mag >= 0.5 * band && mag <= 2.0 * band)
    return ConditionOutcome::kIndeterminate;
  return mag > band ? ConditionOutcome::kTrue : ConditionOutcome::kFalse;
}

}  // namespace

void validate_distance_query(const DomainGrid& grid, const Medium& medium,
                             const DistanceQuery& query) {
  if (query.z_pos < 0 || query.z_pos >= grid.n_boundary() ||
      query.y_pos < 0 || query.y_pos >= grid.n_boundary())
    throw std::invalid_argument("distance query: boundary position out of range");
  if (!(query.T1 >= 0.0 && query.T1 <= grid.T()))
    throw std::invalid_argument("distance query: T1 out of [0, T]");
  if (!(query.theta > 0.0))
    throw std::invalid_argument("distance query: theta must be positive");
  // Standing assumption T > d(y, z) + T1 (then d(x,y) <= T1 + d(z,y) < T, so
  // the bisection bracket [0, T] contains the answer).
  const DistanceField from_z = travel_time_distance(
      grid, medium, {grid.boundary_nodes[query.z_pos]});
  const double dyz = from_z.d[grid.boundary_nodes[query.y_pos]];
  if (!(grid.T() > dyz + query.T1))
    throw std::invalid_argument("distance query: need T > d(y,z) + T1");
  // T1 <= tau(z): the inward normal geodesic must still be minimizing.
  if (query.T1 > 0.0 &&
      !normal_geodesic_point(grid, medium, query.z_pos, query.T1).minimizing)
    throw std::invalid_argument("distance query: T1 exceeds tau(z)");
}

ConditionResult condition_test(const ConnectingOperator& op,
                               const BoundarySignal& f,
                               const DistanceQuery& query, double tau, int j,
                               double eps, const IterationConfig& config) {
  const DomainGrid& grid = op.grid();
  const ConditionMasks masks = build_masks(grid, query, tau, j, eps);

  IterationConfig cfg = config;
  cfg.alpha = query.alpha;
  ConditionResult res;
  if (cfg.omega <= 0.0) {
    // B~3 contains the other three projectors, so its norm bound covers all
    // four runs.
    const NormEstimate est =
        estimate_pkp_norm(op, masks.b3, cfg.omega_power_iters, cfg.seed);
    res.queries += est.queries;
    cfg.omega = 2.2 * (1.0 + est.value);
  }

  const IterationResult h1 = ptr_iterate(op, f, masks.b1, cfg);
  const IterationResult h2 = ptr_iterate(op, f, masks.b2, cfg);
  const IterationResult h3 = ptr_iterate(op, f, masks.b3, cfg);
  const IterationResult h4 = ptr_iterate(op, f, masks.b4, cfg);
  res.queries += h1.queries + h2.queries + h3.queries + h4.queries;

  BoundarySignal p = h1.h;
  p += h2.h;
  p -= h3.h;
  p -= h4.h;

  res.value = op.blago_inner_product(p, p);
  res.scale = op.blago_inner_product(f, f);
  res.queries += 4;
  res.outcome = classify(res.value, res.scale, query.theta);
  return res;
}

DistanceEstimate boundary_distance(const ConnectingOperator& op,
                                   const BoundarySignal& f,
                                   const DistanceQuery& query,
                                   const IterationConfig& config) {
  const DomainGrid& grid = op.grid();
  const double T = grid.T();
  const int j_fine = std::max(0, query.j_levels - 1);
  const double eps_fine = eps_schedule(grid, query).back();

  DistanceEstimate est;
  IterationConfig cfg = config;
  cfg.alpha = query.alpha;

  // Shared relaxation constant: estimated once on the largest projector the
  // bisection will see (tau = T).
  const ConditionMasks widest = build_masks(grid, query, T, j_fine, eps_fine);
  if (cfg.omega <= 0.0) {
    const NormEstimate norm_est =
        estimate_pkp_norm(op, widest.b3, cfg.omega_power_iters, cfg.seed);
    est.queries += norm_est.queries;
    cfg.omega = 2.2 * (1.0 + norm_est.value);
  }

  const double scale = op.blago_inner_product(f, f);
  est.queries += 2;

  // h1 and h4 do not depend on tau; solve them once.
  const IterationResult run1 = ptr_iterate(op, f, widest.b1, cfg);
  const IterationResult run4 = ptr_iterate(op, f, widest.b4, cfg);
  est.queries += run1.queries + run4.queries;

  const BoundarySignal* warm2 = nullptr;
  const BoundarySignal* warm3 = nullptr;
  BoundarySignal h2_prev, h3_prev;

  long n_indeterminate = 0, n_evals = 0;
  auto evaluate = [&](double tau) {
    const ConditionMasks masks = build_masks(grid, query, tau, j_fine, eps_fine);
    const IterationResult run2 = ptr_iterate(op, f, masks.b2, cfg, warm2);
    const IterationResult run3 = ptr_iterate(op, f, masks.b3, cfg, warm3);
    est.queries += run2.queries + run3.queries + 2;
    BoundarySignal p = run1.h;
    p += run2.h;
    p -= run3.h;
    p -= run4.h;
    const double value = op.blago_inner_product(p, p);
    h2_prev = run2.h;
    h3_prev = run3.h;
    warm2 = &h2_prev;
    warm3 = &h3_prev;
    const ConditionOutcome outcome = classify(value, scale, query.theta);
    ++n_evals;
    if (outcome == ConditionOutcome::kIndeterminate) ++n_indeterminate;
    est.trace.push_back({tau, value, static_cast<int>(outcome)});
    // Decision by the plain threshold; the indeterminate band is reported.
    return std::abs(value) > query.theta * std::abs(scale);
  };

  double lo = 0.0, hi = T;  // condition is false at tau=0 (p telescopes to 0)
  if (!evaluate(hi)) {
    est.lo = lo;
    est.hi = hi;
    est.ok = false;
    return est;
  }
  while (hi - lo > 2.0 * grid.dt) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(mid))
      hi = mid;
    else
      lo = mid;
  }
  est.lo = lo;
  est.hi = hi;
  est.value = 0.5 * (lo + hi);
  est.ok = n_indeterminate < n_evals;
  return est;
}

BoundaryDistanceFunction boundary_distance_function(
    const ConnectingOperator& op, const BoundarySignal& f, int z_pos,
    double T1, const std::vector<int>& boundary_sample, DistanceQuery proto,
    const IterationConfig& config) {
  BoundaryDistanceFunction r;
  r.z_pos = z_pos;
  r.T1 = T1;
  r.sample_positions = boundary_sample;
  for (int y : boundary_sample) {
    DistanceQuery q = proto;
    q.z_pos = z_pos;
    q.y_pos = y;
    q.T1 = T1;
    // Per-node failures are recorded, not fatal.
    try {
      const DistanceEstimate est = boundary_distance(op, f, q, config);
      r.r.push_back(est.ok ? est.value
                           : std::numeric_limits<double>::quiet_NaN());
      r.valid.push_back(est.ok);
    } catch (const std::exception&) {
      r.r.push_back(std::numeric_limits<double>::quiet_NaN());
      r.valid.push_back(false);
    }
  }
  return r;
}

ArrivalMap arrival_time_map(const MeasurementOracle& oracle,
                            int source_stride) {
  const DomainGrid& grid = oracle.grid();
  if (source_stride < 1)
    throw std::invalid_argument("arrival_time_map: stride must be >= 1");
  const int nb = grid.n_boundary();
  const int nt = grid.n_time;
  const int k_src = 3;  // impulse a few samples in
  const double t_src = grid.time_at(k_src);

  ArrivalMap map;
  for (int p = 0; p < nb; p += source_stride) map.sources.push_back(p);
  const int ns = static_cast<int>(map.sources.size());
  map.d.assign(static_cast<std::size_t>(ns) * nb, 0.0);
  map.flagged.assign(static_cast<std::size_t>(ns) * nb, 0);

  std::vector<int> source_row(nb, -1);
  for (int s = 0; s < ns; ++s) source_row[map.sources[s]] = s;

  for (int s = 0; s < ns; ++s) {
    const BoundarySignal probe = make_impulse(grid, map.sources[s], k_src);
    const BoundarySignal trace = oracle.apply(probe);
    ++map.queries;
    for (int r = 0; r < nb; ++r) {
      double peak = 0.0;
      for (int k = 0; k < nt; ++k)
        peak = std::max(peak, std::abs(trace.at(r, k)));
      double arrival = -1.0;
      if (peak > 0.0) {
        const double thresh = 0.05 * peak;
        for (int k = 0; k < nt; ++k) {
          if (std::abs(trace.at(r, k)) >= thresh) {
            arrival = grid.time_at(k) - t_src;
            break;
          }
        }
      }
      const std::size_t idx = static_cast<std::size_t>(s) * nb + r;
      if (arrival < 0.0 || arrival > grid.horizon) {
        map.d[idx] = grid.horizon;
        map.flagged[idx] = 1;
      } else {
        map.d[idx] = std::max(arrival, 0.0);
      }
    }
  }

  // Symmetrize over pairs where both directions were measured.
  for (int s = 0; s < ns; ++s) {
    for (int r = 0; r < nb; ++r) {
      const int sr = source_row[r];
      if (sr < 0 || map.sources[s] >= r) continue;
      const std::size_t ij = static_cast<std::size_t>(s) * nb + r;
      const std::size_t ji =
          static_cast<std::size_t>(sr) * nb + map.sources[s];
      const double avg = 0.5 * (map.d[ij] + map.d[ji]);
      map.d[ij] = map.d[ji] = avg;
      map.flagged[ij] = map.flagged[ji] =
          static_cast<std::uint8_t>(map.flagged[ij] | map.flagged[ji]);
    }
  }
  return map;
}

BoundarySpeed boundary_wavespeed(const ArrivalMap& map, const DomainGrid& grid,
                                 int separation) {
  const int nb = grid.n_boundary();
  BoundarySpeed speed;
  speed.c.assign(nb, 0.0);
  speed.near_corner.assign(nb, 0);

  std::vector<int> source_row(nb, -1);
  for (std::size_t s = 0; s < map.sources.size(); ++s)
    source_row[map.sources[s]] = static_cast<int>(s);

  if (grid.dim == 1) {
    // Only the opposite endpoint is available; the ratio recovers the
    // path-harmonic-mean speed (exact for constant media).
    const int row = source_row[0] >= 0 ? source_row[0] : 0;
    const double d01 = map.d[static_cast<std::size_t>(row) * nb + 1];
    const double c = d01 > 0.0 ? grid.extent_x / d01 : 0.0;
    speed.c.assign(nb, c);
    return speed;
  }

  if (separation < 1) separation = std::max(2, nb / 24);
  // Chain positions of the four corners, for flagging windows that bend.
  std::vector<std::uint8_t> is_corner(nb, 0);
  for (int p = 0; p < nb; ++p) {
    const int n = grid.boundary_nodes[p];
    const int i = n % grid.nx, j = n / grid.nx;
    if ((i == 0 || i == grid.nx - 1) && (j == 0 || j == grid.ny - 1))
      is_corner[p] = 1;
  }

  std::vector<double> raw(nb, 0.0);
  for (int p = 0; p < nb; ++p) {
    const int a = ((p - separation) % nb + nb) % nb;
    const int b = (p + separation) % nb;
    for (int o = -separation; o <= separation; ++o)
      if (is_corner[((p + o) % nb + nb) % nb]) speed.near_corner[p] = 1;
    const int row = source_row[a];
    double d = 0.0;
    if (row >= 0) {
      d = map.d[static_cast<std::size_t>(row) * nb + b];
    } else {
      // Strided map: fall back to the nearest available source.
      int best = -1, best_gap = nb;
      for (int src : map.sources) {
        const int gap = std::min(std::abs(src - a), nb - std::abs(src - a));
        if (gap < best_gap) {
          best_gap = gap;
          best = source_row[src];
        }
      }
      d = map.d[static_cast<std::size_t>(best) * nb + b];
    }
    const int na = grid.boundary_nodes[a], nbn = grid.boundary_nodes[b];
    const double dx = grid.x_of(na) - grid.x_of(nbn);
    const double dy = grid.y_of(na) - grid.y_of(nbn);
    const double chord = std::sqrt(dx * dx + dy * dy);
    raw[p] = d > 0.0 ? chord / d : 0.0;
  }
  // 3-node moving average along the chain.
  for (int p = 0; p < nb; ++p) {
    const double sum = raw[((p - 1) % nb + nb) % nb] + raw[p] + raw[(p + 1) % nb];
    speed.c[p] = sum / 3.0;
  }
  return speed;
}

}  // namespace ptrlab
