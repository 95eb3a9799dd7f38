#ifndef PTRLAB_PTR_HPP
#define PTRLAB_PTR_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ptrlab/connecting.hpp"

namespace ptrlab {

struct IterationConfig {
  double alpha = 1e-2;  // Tikhonov weight, in (0, 1)
  double omega = 0.0;   // 0 = auto: 2.2 * (1 + ||PKP||_est)
  long n_max = 0;       // 0 = auto: ceil(10 * omega / alpha)
  double tol_fp = 1e-6; // relative iterate change
  int omega_power_iters = 12;
  std::uint64_t seed = 1;
  bool verify_residual = true;  // 2 extra queries at the end
};

struct IterationResult {
  BoundarySignal h;
  std::vector<double> step_change;  // ||h_{n+1} - h_n|| per step
  long steps = 0;
  long queries = 0;      // oracle queries consumed by this run
  double omega = 0.0;    // resolved relaxation constant
  bool converged = false;
  double residual_rel = -1.0;  // ||(PKP + a)h - PKf|| / ||PKf||
  double observed_rate = 0.0;  // geometric mean of successive change ratios
};

/// Processed time reversal iteration: per step the two measurements
/// a_n = Lambda h_n, b_n = Lambda(R J h_n) are post-processed into
///   h_{n+1} = (1 - alpha/omega) h_n - (1/omega) P K h_n + F,
/// F = (1/omega) P K f, with P K h_n = sign * (P R b_n - P J a_n).
/// Exactly 2 oracle queries per step.  The fixed point solves
/// (P K P + alpha) h = P K f and satisfies h = P h exactly.
/// Non-convergence within n_max returns the last iterate, converged = false.
IterationResult ptr_iterate(const ConnectingOperator& op,
                            const BoundarySignal& f,
                            const std::vector<std::uint8_t>& mask,
                            const IterationConfig& config,
                            const BoundarySignal* warm_start = nullptr);

IterationResult ptr_iterate(const ConnectingOperator& op,
                            const BoundarySignal& f, const ProjectorSpec& B,
                            const IterationConfig& config);

struct CgResult {
  BoundarySignal h;
  long steps = 0;
  long queries = 0;
  double residual_rel = 0.0;
  bool converged = false;
};

/// Conjugate-gradient solve of (PKP + alpha) h = PKf with connecting_apply as
/// the matrix-vector product (2 queries per step); independent cross-check of
/// the fixed point.  Restarts on stagnation; throws std::runtime_error on
/// negative curvature beyond round-off (wrong sign convention).
CgResult cg_solve(const ConnectingOperator& op, const BoundarySignal& f,
                  const std::vector<std::uint8_t>& mask, double alpha,
                  double tol = 1e-10, long max_steps = 0);

struct ControlPoint {
  double alpha = 0.0;
  IterationResult iteration;
  double e_alpha = -1.0;  // ||u^{h(a)}(T) - chi_N u^f(T)|| / ||u^f(T)||
};

/// Regularization path of Theorem-1 type: runs ptr_iterate per alpha (warm
/// started along the schedule) and validates each control against the target
/// chi_N u^f(T) with N = union of M(Gamma_j, T_j).  The validation fields are
/// computed by the forward solver directly on (grid, medium), outside the
/// oracle black box.
std::vector<ControlPoint> control_limit(const ConnectingOperator& op,
                                        const DomainGrid& grid,
                                        const Medium& medium,
                                        const BoundarySignal& f,
                                        const ProjectorSpec& B,
                                        const std::vector<double>& alphas,
                                        IterationConfig config);

struct NoisyAverageResult {
  BoundarySignal average;  // (1/K) sum of iterates h~_1..h~_K
  std::vector<std::pair<long, BoundarySignal>> checkpoints;
  long steps = 0;
  long queries = 0;
  double omega = 0.0;
};

/// Noisy recursion h~_{n+1} = S h~_n + F + N_n where each step queries the
/// noisy oracle twice (N_n = (1/omega)(P J eps1_n - P R eps2_n)); returns the
/// running average of the first K iterates plus requested partial averages.
NoisyAverageResult averaged_noisy_iterate(const ConnectingOperator& op,
                                          const BoundarySignal& f,
                                          const std::vector<std::uint8_t>& mask,
                                          const IterationConfig& config,
                                          long K_avg,
                                          const std::vector<long>& checkpoints = {});

}  // namespace ptrlab

#endif  // PTRLAB_PTR_HPP
