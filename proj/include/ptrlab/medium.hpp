#ifndef PTRLAB_MEDIUM_HPP
#define PTRLAB_MEDIUM_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ptrlab/grid.hpp"

namespace ptrlab {

/// The hidden ground truth: wave speed c(x) > 0 and potential q(x) on grid
/// nodes, boundary impedance eta(z) on boundary-chain positions.  The volume
/// density factor is fixed to mu == 1, so dV = c^{-m} dx^m and the boundary
/// measure is dS_g = c^{1-m} dS_euclid.
struct Medium {
  std::vector<double> c;    // size n_nodes
  std::vector<double> q;    // size n_nodes
  std::vector<double> eta;  // size n_boundary (chain order)
  double c_min = 0.0;
  double c_max = 0.0;
};

Medium make_medium(const DomainGrid& grid,
                   const std::function<double(double, double)>& c_of,
                   const std::function<double(double, double)>& q_of,
                   const std::function<double(double, double)>& eta_of);

/// Rescales grid.boundary_weight to the metric surface measure
/// dS_g = c^{1-m} dS_euclid (a no-op in 1D).
void attach_boundary_metric(DomainGrid& grid, const Medium& medium);

/// Travel-time distance d(x, S) from a source set, in time units.
struct DistanceField {
  std::vector<double> d;  // size n_nodes
};

/// d(x, S) for a set of source nodes (boundary or interior).  Exact slowness
/// integration in 1D; first-order fast marching (4-neighbour upwind) in 2D.
DistanceField travel_time_distance(const DomainGrid& grid, const Medium& medium,
                                   const std::vector<int>& source_nodes);

/// d(x, p) from an off-lattice interior point p; the four enclosing nodes are
/// seeded with their Euclidean-slowness distance to p.
DistanceField travel_time_from_point(const DomainGrid& grid,
                                     const Medium& medium, double px,
                                     double py);

/// Node-wise indicator of the domain of influence M(Gamma, t) = {d(x,Gamma) <= t}.
/// gamma holds boundary-chain positions.
std::vector<std::uint8_t> domain_of_influence(const DomainGrid& grid,
                                              const Medium& medium,
                                              const std::vector<int>& gamma,
                                              double t);

struct GeodesicPoint {
  double x = 0.0;
  double y = 0.0;
  bool minimizing = false;  // true iff d(point, boundary) == s within 2h
};

/// Point gamma_{z,nu}(s) reached from boundary-chain position z after
/// travel-time arclength s along the inward normal geodesic, plus a flag for
/// s < tau(z) (the normal geodesic still being a shortest path to the
/// boundary).  Throws std::runtime_error if the geodesic exits the domain
/// before arclength s.
GeodesicPoint normal_geodesic_point(const DomainGrid& grid,
                                    const Medium& medium, int z_pos, double s);

/// vol_g of the slab M({z}, T_hat) \ M(boundary, T0), measured with
/// dV = c^{-m} h^m and trapezoid cell factors.
double slab_volume(const DomainGrid& grid, const Medium& medium, int z_pos,
                   double T_hat, double T0);

struct C0Estimate {
  double value = 0.0;   // Richardson-extrapolated limit
  double spread = 0.0;  // relative disagreement of the two extrapolants
  double ratios[3] = {0.0, 0.0, 0.0};  // raw ratios at delta, delta/2, delta/4
};

/// C0(x_hat) = lim_{T0 -> T_hat} (T_hat - T0)^{(m+1)/2} / vol_g(slab),
/// extrapolated from slab thicknesses {delta, delta/2, delta/4}.
/// Throws std::runtime_error if the slab is already empty at delta
/// (indicating T_hat >= tau(z)).
C0Estimate c0_constant(const DomainGrid& grid, const Medium& medium, int z_pos,
                       double T_hat, double delta);

/// Intrinsic boundary distance between chain positions (shortest arc along
/// the boundary, metric length ds_g = ds_euclid / c).  2D only; in 1D the two
/// boundary points are disconnected and the result is +infinity.
double boundary_chain_distance(const DomainGrid& grid, const Medium& medium,
                               int pos_a, int pos_b);

}  // namespace ptrlab

#endif  // PTRLAB_MEDIUM_HPP
