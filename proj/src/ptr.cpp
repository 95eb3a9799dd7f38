#include "ptrlab/ptr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptrlab/wave_solver.hpp"

namespace ptrlab {

namespace {

double resolve_omega(const ConnectingOperator& op,
                     const std::vector<std::uint8_t>& mask,
                     const IterationConfig& config, long& queries) {
  if (config.omega > 0.0) return config.omega;
  // omega > 2 (1 + ||PKP||) with margin against estimation error.
  const NormEstimate est =
      estimate_pkp_norm(op, mask, config.omega_power_iters, config.seed);
  queries += est.queries;
  return 2.2 * (1.0 + est.value);
}

void check_config(const IterationConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw std::invalid_argument("iteration: alpha must lie in (0, 1)");
  if (!(config.tol_fp > 0.0))
    throw std::invalid_argument("iteration: tol_fp must be positive");
}

}  // namespace

IterationResult ptr_iterate(const ConnectingOperator& op,
                            const BoundarySignal& f,
                            const std::vector<std::uint8_t>& mask,
                            const IterationConfig& config,
                            const BoundarySignal* warm_start) {
  check_config(config);
  const DomainGrid& grid = op.grid();
  validate_signal(grid, f);

  IterationResult res;
  res.omega = resolve_omega(op, mask, config, res.queries);
  const double alpha = config.alpha;
  const double omega = res.omega;

  // F = (1/omega) P K f
  BoundarySignal F = op.apply(f);
  res.queries += 2;
  apply_mask_in_place(F, mask);
  const double rhs_norm = boundary_norm(grid, F) * omega;  // ||P K f||
  F *= 1.0 / omega;

  const long n_max = config.n_max > 0
                         ? config.n_max
                         : static_cast<long>(std::ceil(10.0 * omega / alpha));

  BoundarySignal h = warm_start ? project(*warm_start, mask)
                                : BoundarySignal::zeros(grid);
  res.step_change.reserve(std::min<long>(n_max, 1 << 20));

  for (long n = 0; n < n_max; ++n) {
    // a_n = Lambda h_n, b_n = Lambda(R J h_n); the step consumes exactly the
    // two measurements.
    const BoundarySignal a = op.oracle().apply(h);
    const BoundarySignal b =
        op.oracle().apply(time_reverse(time_filter(h, op.convention().variant)));
    res.queries += 2;
    BoundarySignal kh = op.combine(a, b);  // K h_n (resolved sign)
    apply_mask_in_place(kh, mask);

    // h_{n+1} = (1 - alpha/omega) h_n - (1/omega) P K h_n + F
    BoundarySignal h_next = h;
    h_next *= (1.0 - alpha / omega);
    axpy(-1.0 / omega, kh, h_next);
    h_next += F;

    BoundarySignal diff = h_next;
    diff -= h;
    const double delta = boundary_norm(grid, diff);
    res.step_change.push_back(delta);
    h = std::move(h_next);
    ++res.steps;

    // omega * ||h_{n+1} - h_n|| equals the normal-equation residual of h_n,
    // so the stop rule bounds the final residual directly.
    const double hn = boundary_norm(grid, h);
    if (delta <= config.tol_fp * std::max(hn, 1e-300) &&
        omega * delta <= 5.0 * config.tol_fp * std::max(rhs_norm, 1e-300)) {
      res.converged = true;
      break;
    }
  }

  if (res.step_change.size() >= 2) {
    const double first = res.step_change.front();
    const double last = res.step_change.back();
    if (first > 0.0 && last > 0.0)
      res.observed_rate = std::pow(last / first,
                                   1.0 / static_cast<double>(res.steps - 1));
  }

  if (config.verify_residual) {
    BoundarySignal r = op.apply(h);  // K h, 2 extra queries
    res.queries += 2;
    apply_mask_in_place(r, mask);
    axpy(alpha, h, r);
    axpy(-omega, F, r);  // minus P K f
    res.residual_rel = rhs_norm > 0.0 ? boundary_norm(grid, r) / rhs_norm
                                      : boundary_norm(grid, r);
  }
  res.h = std::move(h);
  return res;
}

IterationResult ptr_iterate(const ConnectingOperator& op,
                            const BoundarySignal& f, const ProjectorSpec& B,
                            const IterationConfig& config) {
  return ptr_iterate(op, f, projector_mask(op.grid(), B), config);
}

CgResult cg_solve(const ConnectingOperator& op, const BoundarySignal& f,
                  const std::vector<std::uint8_t>& mask, double alpha,
                  double tol, long max_steps) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cg_solve: alpha must be positive");
  const DomainGrid& grid = op.grid();
  if (max_steps <= 0) max_steps = 1000;

  CgResult res;
  BoundarySignal rhs = op.apply(f);
  res.queries += 2;
  apply_mask_in_place(rhs, mask);
  const double rhs_norm = boundary_norm(grid, rhs);
  res.h = BoundarySignal::zeros(grid);
  if (rhs_norm == 0.0) {
    res.converged = true;
    return res;
  }

  auto matvec = [&](const BoundarySignal& v) {
    BoundarySignal av = op.apply(v);
    res.queries += 2;
    apply_mask_in_place(av, mask);
    axpy(alpha, v, av);
    return av;
  };

  // Plain CG with iterative-refinement restarts: the discrete PKP is
  // symmetric only up to quadrature error, which can stall a single sweep
  // near round-off; restarting on the true residual grinds past the stall.
  const int max_restarts = 3;
  for (int round = 0; round < max_restarts; ++round) {
    BoundarySignal r = rhs;
    if (round > 0) {
      BoundarySignal ax = matvec(res.h);
      r -= ax;
    }
    double rn = boundary_norm(grid, r);
    if (rn <= tol * rhs_norm) {
      res.converged = true;
      break;
    }
    BoundarySignal p = r;
    double rs = rn * rn;
    bool stalled = false;
    while (res.steps < max_steps) {
      const BoundarySignal ap = matvec(p);
      const double p_ap = inner_product_boundary(grid, p, ap);
      if (p_ap <= 0.0)
        throw std::runtime_error(
            "cg_solve: non-positive curvature; the connecting-operator sign "
            "convention is wrong for this medium");
      const double gamma = rs / p_ap;
      axpy(gamma, p, res.h);
      axpy(-gamma, ap, r);
      ++res.steps;
      const double rs_new = inner_product_boundary(grid, r, r);
      if (std::sqrt(rs_new) <= tol * rhs_norm) {
        res.converged = true;
        break;
      }
      if (rs_new >= rs) {  // stagnation
        stalled = true;
        break;
      }
      const double beta = rs_new / rs;
      rs = rs_new;
      BoundarySignal p_next = r;
      axpy(beta, p, p_next);
      p = std::move(p_next);
    }
    if (res.converged || (!stalled && res.steps >= max_steps)) break;
  }

  BoundarySignal ax = matvec(res.h);
  ax -= rhs;
  res.residual_rel = boundary_norm(grid, ax) / rhs_norm;
  res.converged = res.residual_rel <= tol * 10.0;
  return res;
}

std::vector<ControlPoint> control_limit(const ConnectingOperator& op,
                                        const DomainGrid& grid,
                                        const Medium& medium,
                                        const BoundarySignal& f,
                                        const ProjectorSpec& B,
                                        const std::vector<double>& alphas,
                                        IterationConfig config) {
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] < alphas[i - 1]))
      throw std::invalid_argument("control_limit: alpha schedule must be strictly decreasing");
  const auto mask = projector_mask(grid, B);

  // Validation target chi_N u^f(T), N = union of M(Gamma_j, T_j), computed by
  // the forward solver outside the oracle black box.
  std::vector<std::uint8_t> chi(grid.n_nodes(), 0);
  for (const auto& patch : B.patches) {
    const auto ind = domain_of_influence(grid, medium, patch.gamma, patch.T_j);
    for (int n = 0; n < grid.n_nodes(); ++n) chi[n] |= ind[n];
  }
  const ForwardSolution uf = solve_forward(grid, medium, f, {grid.T()});
  std::vector<double> target = uf.snapshots[0].u;
  for (int n = 0; n < grid.n_nodes(); ++n)
    if (!chi[n]) target[n] = 0.0;
  const double uf_norm = volume_norm(grid, medium, uf.snapshots[0].u);

  // The relaxation constant depends only on B; resolve it once.
  long omega_queries = 0;
  config.omega = resolve_omega(op, mask, config, omega_queries);

  std::vector<ControlPoint> points;
  const BoundarySignal* warm = nullptr;
  for (double alpha : alphas) {
    ControlPoint pt;
    pt.alpha = alpha;
    IterationConfig cfg = config;
    cfg.alpha = alpha;
    pt.iteration = ptr_iterate(op, f, mask, cfg, warm);
    if (points.empty()) pt.iteration.queries += omega_queries;

    const ForwardSolution uh =
        solve_forward(grid, medium, pt.iteration.h, {grid.T()});
    std::vector<double> err = uh.snapshots[0].u;
    for (int n = 0; n < grid.n_nodes(); ++n) err[n] -= target[n];
    pt.e_alpha = uf_norm > 0.0 ? volume_norm(grid, medium, err) / uf_norm
                               : volume_norm(grid, medium, err);
    points.push_back(std::move(pt));
    warm = &points.back().iteration.h;
  }
  return points;
}

NoisyAverageResult averaged_noisy_iterate(const ConnectingOperator& op,
                                          const BoundarySignal& f,
                                          const std::vector<std::uint8_t>& mask,
                                          const IterationConfig& config,
                                          long K_avg,
                                          const std::vector<long>& checkpoints) {
  check_config(config);
  if (K_avg < 1)
    throw std::invalid_argument("averaged_noisy_iterate: K_avg must be >= 1");
  const DomainGrid& grid = op.grid();

  NoisyAverageResult res;
  res.omega = resolve_omega(op, mask, config, res.queries);
  const double alpha = config.alpha;
  const double omega = res.omega;

  // F is measured once; its noise realization stays frozen in the recursion.
  BoundarySignal F = op.apply(f);
  res.queries += 2;
  apply_mask_in_place(F, mask);
  F *= 1.0 / omega;

  std::vector<long> marks = checkpoints;
  std::sort(marks.begin(), marks.end());

  BoundarySignal h = BoundarySignal::zeros(grid);
  BoundarySignal sum = BoundarySignal::zeros(grid);
  std::size_t mark_cursor = 0;
  for (long n = 1; n <= K_avg; ++n) {
    const BoundarySignal a = op.oracle().apply(h);
    const BoundarySignal b =
        op.oracle().apply(time_reverse(time_filter(h, op.convention().variant)));
    res.queries += 2;
    BoundarySignal kh = op.combine(a, b);
    apply_mask_in_place(kh, mask);

    BoundarySignal h_next = h;
    h_next *= (1.0 - alpha / omega);
    axpy(-1.0 / omega, kh, h_next);
    h_next += F;
    h = std::move(h_next);
    ++res.steps;

    sum += h;
    while (mark_cursor < marks.size() && marks[mark_cursor] == n) {
      BoundarySignal avg = sum;
      avg *= 1.0 / static_cast<double>(n);
      res.checkpoints.emplace_back(n, std::move(avg));
      ++mark_cursor;
    }
  }
  sum *= 1.0 / static_cast<double>(K_avg);
  res.average = std::move(sum);
  return res;
}

}  // namespace ptrlab
