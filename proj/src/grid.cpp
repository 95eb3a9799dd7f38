#include "ptrlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptrlab {

double DomainGrid::cell_factor(int flat) const {
  if (dim == 1) {
    int i = flat % nx;
    return (i == 0 || i == nx - 1) ? 0.5 : 1.0;
  }
  int i = flat % nx;
  int j = flat / nx;
  double f = 1.0;
  if (i == 0 || i == nx - 1) f *= 0.5;
  if (j == 0 || j == ny - 1) f *= 0.5;
  return f;
}

double DomainGrid::boundary_measure() const {
  double s = 0.0;
  for (double w : boundary_weight) s += w;
  return s;
}

namespace {

void build_boundary_chain(DomainGrid& g) {
  g.boundary_nodes.clear();
  g.boundary_weight.clear();
  g.boundary_pos.assign(g.n_nodes(), -1);
  if (g.dim == 1) {
    g.boundary_nodes = {0, g.nx - 1};
    // A 0-dimensional boundary point carries unit measure.
    g.boundary_weight = {1.0, 1.0};
  } else {
    // Counterclockwise perimeter starting at (0,0).  Every node owns h of
    // boundary length (corners: two half-edges).
    for (int i = 0; i < g.nx; ++i) g.boundary_nodes.push_back(g.node(i, 0));
    for (int j = 1; j < g.ny; ++j)
      g.boundary_nodes.push_back(g.node(g.nx - 1, j));
    for (int i = g.nx - 2; i >= 0; --i)
      g.boundary_nodes.push_back(g.node(i, g.ny - 1));
    for (int j = g.ny - 2; j >= 1; --j) g.boundary_nodes.push_back(g.node(0, j));
    g.boundary_weight.assign(g.boundary_nodes.size(), g.h);
  }
  for (int p = 0; p < g.n_boundary(); ++p) g.boundary_pos[g.boundary_nodes[p]] = p;
}

}  // namespace

DomainGrid build_grid(const std::vector<double>& extents,
                      const std::vector<int>& resolution, double horizon_T,
                      double c_max) {
  if (extents.empty() || extents.size() > 2 || extents.size() != resolution.size())
    throw std::invalid_argument("build_grid: need 1 or 2 matching extents/resolutions");
  for (double e : extents)
    if (!(e > 0.0)) throw std::invalid_argument("build_grid: extents must be positive");
  for (int r : resolution)
    if (r < 16)
      throw std::invalid_argument("build_grid: at least 16 nodes per axis required");
  if (!(horizon_T > 0.0)) throw std::invalid_argument("build_grid: horizon must be positive");
  if (!(c_max > 0.0)) throw std::invalid_argument("build_grid: c_max must be positive");

  DomainGrid g;
  g.dim = static_cast<int>(extents.size());
  g.nx = resolution[0];
  g.extent_x = extents[0];
  g.h = extents[0] / (resolution[0] - 1);
  if (g.dim == 2) {
    g.ny = resolution[1];
    g.extent_y = extents[1];
    double hy = extents[1] / (resolution[1] - 1);
    if (std::abs(hy - g.h) > 1e-12 * g.h)
      throw std::invalid_argument(
          "build_grid: extents/resolutions must give equal spacing on both axes");
  }

  // CFL bound dt <= (0.9/sqrt(m)) h / c_max, then dt reduced so that
  // n_time = 2T/dt is an even integer (even keeps T itself off the midpoint
  // lattice symmetrically).
  const double cfl = 0.9 / std::sqrt(static_cast<double>(g.dim));
  const double dt_max = cfl * g.h / c_max;
  g.horizon = 2.0 * horizon_T;
  long steps = static_cast<long>(std::ceil(g.horizon / dt_max));
  if (steps % 2 != 0) ++steps;
  g.n_time = static_cast<int>(steps);
  g.dt = g.horizon / steps;

  build_boundary_chain(g);
  return g;
}

}  // namespace ptrlab
