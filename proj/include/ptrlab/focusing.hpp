#ifndef PTRLAB_FOCUSING_HPP
#define PTRLAB_FOCUSING_HPP

#include <vector>

#include "ptrlab/ptr.hpp"

namespace ptrlab {

/// Focusing experiment: concentrate u^{h~}(T) near x_hat = gamma_{z,nu}(T_hat)
/// by differencing two controls whose influence domains differ by the slab
/// M(Gamma_j, T_hat) \ M(dM, T0).
struct FocusSpec {
  int z_pos = 0;        // boundary-chain position of z_hat
  double T_hat = 0.0;   // 0 < T0 < T_hat < T
  double T0 = 0.0;
  int j_max = 0;        // nested patches Gamma_j, radius r0 * 2^{-j}, j=0..j_max
  double r0 = 0.0;      // base patch radius (chain arclength); 0 = |dM|/8
  std::vector<double> alphas;  // decreasing; iterations run at the smallest
};

void validate_focus_spec(const DomainGrid& grid, const FocusSpec& spec);

/// Patch Gamma_j of the spec's shrinking schedule.
std::vector<int> focus_patch(const DomainGrid& grid, const FocusSpec& spec,
                             int j);

struct FocusingSource {
  BoundarySignal h_tilde;      // h(alpha; B) - h(alpha; B')
  IterationResult run_b;       // B  = Gamma_j x [T-T_hat, T]  u  dM x [T-T0, T]
  IterationResult run_bprime;  // B' = dM x [T-T0, T]
};

/// Two ptr_iterate runs at the schedule endpoints (finest j, smallest alpha)
/// combined into the focusing source.
FocusingSource focusing_source(const ConnectingOperator& op,
                               const BoundarySignal& f, const FocusSpec& spec,
                               const IterationConfig& config, int j = -1,
                               double alpha = -1.0);

struct ConcentrationReport {
  std::vector<double> radii;          // travel-time radii (2h, 4h, 8h)
  std::vector<double> mass_fraction;  // L2(dV) mass within each radius of x_hat
  double slab_fraction = 0.0;         // mass inside the slab indicator
  double total_mass = 0.0;            // ||u^{h~}(T)||_{L2(dV)}
  double scale_factor = 0.0;          // (T_hat - T0)^{-(m+1)/2}
  GeodesicPoint x_hat;
};

/// Evaluates u^{h~}(., T) through the validation solver and measures its
/// concentration around x_hat.
ConcentrationReport focusing_profile(const DomainGrid& grid,
                                     const Medium& medium,
                                     const BoundarySignal& h_tilde,
                                     const FocusSpec& spec);

struct PointValueEstimate {
  double value = 0.0;        // estimate of u^f(x_hat, T)
  double spread = 0.0;       // relative spread across the schedule
  bool reliable = false;     // spread <= 50 %
  std::vector<double> schedule_values;
  double c0 = 0.0;           // normalization constant used
};

/// Corollary-2 style point-value recovery: pairs the focusing source against
/// a probe g with u^g(T) ~= 1 near x_hat and normalizes by
/// C0(x_hat) / (T_hat - T0)^{(m+1)/2}; only blago_inner_product (boundary
/// data) touches the oracle.  The slab-thickness schedule supplies the error
/// bar.  grid geometry is used for C0 and the probe only.
PointValueEstimate point_value_recover(const ConnectingOperator& op,
                                       const DomainGrid& grid,
                                       const Medium& medium,
                                       const BoundarySignal& f,
                                       const FocusSpec& spec,
                                       const BoundarySignal& probe,
                                       const IterationConfig& config,
                                       const std::vector<double>& thicknesses = {});

/// Analytic plateau probe for the homogeneous 1D medium: a unit-mass bump
/// timed so that u^g(., T) == 1 on [0, x_max] with no reflected contribution.
/// Throws std::invalid_argument outside its domain of validity.
BoundarySignal plateau_probe_1d(const DomainGrid& grid, const Medium& medium,
                                double x_max);

}  // namespace ptrlab

#endif  // PTRLAB_FOCUSING_HPP
