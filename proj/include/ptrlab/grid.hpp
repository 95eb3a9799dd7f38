#ifndef PTRLAB_GRID_HPP
#define PTRLAB_GRID_HPP

#include <cstdint>
#include <vector>

namespace ptrlab {

/// Rectilinear computational domain: an interval (1D) or a rectangle (2D),
/// with uniform node spacing h and a uniform time lattice covering [0, 2T].
///
/// Time samples sit at cell midpoints t_k = (k + 1/2) dt, k = 0..n_time-1,
/// with n_time even and n_time * dt == 2T.  The midpoint convention makes the
/// time reversal t -> 2T - t an exact permutation of the lattice and keeps
/// every quadrature weight uniform, which the operator algebra relies on.
struct DomainGrid {
  int dim = 1;
  int nx = 0;
  int ny = 1;  // 1 in 1D
  double extent_x = 0.0;
  double extent_y = 0.0;
  double h = 0.0;

  double dt = 0.0;
  int n_time = 0;    // midpoint samples over [0, 2T]
  double horizon = 0.0;  // 2T

  // Boundary nodes as flat node indices, chain-ordered: {0, nx-1} in 1D,
  // counterclockwise around the perimeter starting at (0,0) in 2D.
  std::vector<int> boundary_nodes;
  // Surface weight dS_g per boundary node.  Euclidean by default (1 per
  // endpoint in 1D, h per perimeter node in 2D); rescaled by c^{1-m} when a
  // medium's boundary metric is attached.
  std::vector<double> boundary_weight;
  // Flat node index -> position in boundary chain, or -1 for interior nodes.
  std::vector<int> boundary_pos;

  int n_nodes() const { return nx * ny; }
  int n_boundary() const { return static_cast<int>(boundary_nodes.size()); }
  int node(int i, int j = 0) const { return j * nx + i; }
  double x_of(int flat) const { return h * (flat % nx); }
  double y_of(int flat) const { return dim == 1 ? 0.0 : h * (flat / nx); }
  bool is_boundary(int flat) const { return boundary_pos[flat] >= 0; }

  double T() const { return 0.5 * horizon; }
  double time_at(int k) const { return (k + 0.5) * dt; }

  /// Trapezoid cell factor for volume quadrature: 1 interior, 1/2 on faces,
  /// 1/4 at 2D corners.
  double cell_factor(int flat) const;

  /// Sum of boundary_weight (total boundary measure).
  double boundary_measure() const;
};

/// Builds the grid for given axis extents, nodes per axis and time horizon T.
/// dt is set from the CFL rule dt <= (0.9/sqrt(m)) * h / c_max, then reduced
/// so that 2T is an even integer multiple of dt.
///
/// Throws std::invalid_argument for non-positive extents, resolutions below
/// 16 nodes per axis, mismatched axis spacing, or a non-positive horizon.
DomainGrid build_grid(const std::vector<double>& extents,
                      const std::vector<int>& resolution, double horizon_T,
                      double c_max = 1.0);

}  // namespace ptrlab

#endif  // PTRLAB_GRID_HPP
