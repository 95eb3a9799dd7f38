#ifndef PTRLAB_DISTANCE_HPP
#define PTRLAB_DISTANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ptrlab/ptr.hpp"

namespace ptrlab {

/// Query for d(x, y) with x = gamma_{z,nu}(T1), z and y boundary points.
struct DistanceQuery {
  int z_pos = 0;
  int y_pos = 0;
  double T1 = 0.0;          // T1 <= tau(z)
  double theta = 1e-3;      // decision threshold, relative to <Kf, f>
  int j_levels = 4;         // patch radii r0 * 2^{-j}, j = 0..j_levels-1
  double r0 = 0.0;          // 0 = |dM|/8
  std::vector<double> eps_list;  // epsilon schedule; empty = {4h, 2h}
  double alpha = 1e-3;      // smallest schedule value used for decisions
};

void validate_distance_query(const DomainGrid& grid, const Medium& medium,
                             const DistanceQuery& query);

enum class ConditionOutcome { kFalse, kTrue, kIndeterminate };

struct ConditionResult {
  ConditionOutcome outcome = ConditionOutcome::kFalse;
  double value = 0.0;   // <K p, p>
  double scale = 0.0;   // <K f, f>
  long queries = 0;
};

/// The four-projector interior test: runs the iteration with
///   B~1 = B1_j u B3_e,  B~2 = B2_j u B3_e,  B~3 = B1_j u B2_j u B3_e,
///   B~4 = B3_e,
/// where B1_j = Gamma_j x [T-T1, T], B2_j = Sigma_j x [T-tau, T],
/// B3_e = dM x [T-(T1-eps), T], forms p = h1 + h2 - h3 - h4 and decides by
/// |<Kp, p>| > theta * <Kf, f>.  Outcome is indeterminate when the value
/// falls in [0.5, 2] * theta * scale.
ConditionResult condition_test(const ConnectingOperator& op,
                               const BoundarySignal& f,
                               const DistanceQuery& query, double tau, int j,
                               double eps, const IterationConfig& config);

struct DistanceEstimate {
  double value = 0.0;  // midpoint of the final bracket
  double lo = 0.0;
  double hi = 0.0;
  bool ok = false;
  long queries = 0;
  struct TracePoint {
    double tau;
    double value;
    int outcome;  // ConditionOutcome as int
  };
  std::vector<TracePoint> trace;
};

/// d(x, y) = inf{tau : condition holds}: bisection over tau in [0, T] at the
/// finest (j, eps) schedule point, resolved to 2*dt.  Fails if the condition
/// is indeterminate across the whole bracket.
DistanceEstimate boundary_distance(const ConnectingOperator& op,
                                   const BoundarySignal& f,
                                   const DistanceQuery& query,
                                   const IterationConfig& config);

struct BoundaryDistanceFunction {
  int z_pos = 0;
  double T1 = 0.0;
  std::vector<int> sample_positions;
  std::vector<double> r;        // r_x(z_i); NaN where the query failed
  std::vector<bool> valid;
};

BoundaryDistanceFunction boundary_distance_function(
    const ConnectingOperator& op, const BoundarySignal& f, int z_pos,
    double T1, const std::vector<int>& boundary_sample, DistanceQuery proto,
    const IterationConfig& config);

struct ArrivalMap {
  std::vector<int> sources;     // boundary-chain positions queried
  std::vector<double> d;        // row-major sources x n_boundary, symmetrized
  std::vector<std::uint8_t> flagged;  // arrival beyond 2T
  long queries = 0;
};

/// First-arrival picking on impulsive probes: per source node, the earliest
/// time each receiver trace exceeds 5 % of its maximum.  The map is
/// symmetrized over queried pairs.
ArrivalMap arrival_time_map(const MeasurementOracle& oracle,
                            int source_stride = 1);

struct BoundarySpeed {
  std::vector<double> c;        // per boundary-chain position
  std::vector<std::uint8_t> near_corner;  // separation window wraps a corner
};

/// Short-distance limit c(z) ~ |z+ - z-| / d(z+, z-) over chain neighbours at
/// the given separation (in nodes), smoothed over 3 nodes.
BoundarySpeed boundary_wavespeed(const ArrivalMap& map, const DomainGrid& grid,
                                 int separation = 0);

}  // namespace ptrlab

#endif  // PTRLAB_DISTANCE_HPP
