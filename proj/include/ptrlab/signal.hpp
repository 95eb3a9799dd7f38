#ifndef PTRLAB_SIGNAL_HPP
#define PTRLAB_SIGNAL_HPP

#include <cstddef>
#include <vector>

#include "ptrlab/grid.hpp"

namespace ptrlab {

/// A discretized element of L2(dM x [0,2T]): one value per boundary node and
/// midpoint time sample.  Storage is node-major so each node's time series is
/// contiguous.
struct BoundarySignal {
  int n_boundary = 0;
  int n_time = 0;
  double dt = 0.0;
  std::vector<double> v;

  static BoundarySignal zeros(const DomainGrid& grid) {
    BoundarySignal s;
    s.n_boundary = grid.n_boundary();
    s.n_time = grid.n_time;
    s.dt = grid.dt;
    s.v.assign(static_cast<std::size_t>(s.n_boundary) * s.n_time, 0.0);
    return s;
  }

  double& at(int b, int k) { return v[static_cast<std::size_t>(b) * n_time + k]; }
  double at(int b, int k) const {
    return v[static_cast<std::size_t>(b) * n_time + k];
  }
  bool same_lattice(const BoundarySignal& o) const {
    return n_boundary == o.n_boundary && n_time == o.n_time;
  }

  BoundarySignal& operator+=(const BoundarySignal& o);
  BoundarySignal& operator-=(const BoundarySignal& o);
  BoundarySignal& operator*=(double a);
};

BoundarySignal operator+(BoundarySignal a, const BoundarySignal& b);
BoundarySignal operator-(BoundarySignal a, const BoundarySignal& b);
BoundarySignal operator*(double a, BoundarySignal s);

/// y += a * x
void axpy(double a, const BoundarySignal& x, BoundarySignal& y);

/// Discrete L2(dM x [0,2T], dS_g dt) inner product: sum f*h*dS_g*dt over all
/// samples (uniform time weights on the midpoint lattice).
double inner_product_boundary(const DomainGrid& grid, const BoundarySignal& f,
                              const BoundarySignal& h);

double boundary_norm(const DomainGrid& grid, const BoundarySignal& f);

/// Asserts finite values and lattice compatibility with the grid.
void validate_signal(const DomainGrid& grid, const BoundarySignal& f);

}  // namespace ptrlab

#endif  // PTRLAB_SIGNAL_HPP
