#include "ptrlab/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace ptrlab {

BoundarySignal& BoundarySignal::operator+=(const BoundarySignal& o) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

BoundarySignal& BoundarySignal::operator-=(const BoundarySignal& o) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}

BoundarySignal& BoundarySignal::operator*=(double a) {
  for (double& x : v) x *= a;
  return *this;
}

BoundarySignal operator+(BoundarySignal a, const BoundarySignal& b) {
  a += b;
  return a;
}

BoundarySignal operator-(BoundarySignal a, const BoundarySignal& b) {
  a -= b;
  return a;
}

BoundarySignal operator*(double a, BoundarySignal s) {
  s *= a;
  return s;
}

void axpy(double a, const BoundarySignal& x, BoundarySignal& y) {
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
}

double inner_product_boundary(const DomainGrid& grid, const BoundarySignal& f,
                              const BoundarySignal& h) {
  if (!f.same_lattice(h) || f.n_boundary != grid.n_boundary() ||
      f.n_time != grid.n_time)
    throw std::invalid_argument("inner_product_boundary: lattice mismatch");
  double sum = 0.0;
  for (int b = 0; b < f.n_boundary; ++b) {
    const double* fp = f.v.data() + static_cast<std::size_t>(b) * f.n_time;
    const double* hp = h.v.data() + static_cast<std::size_t>(b) * h.n_time;
    double s = 0.0;
    for (int k = 0; k < f.n_time; ++k) s += fp[k] * hp[k];
    sum += s * grid.boundary_weight[b];
  }
  return sum * grid.dt;
}

double boundary_norm(const DomainGrid& grid, const BoundarySignal& f) {
  return std::sqrt(inner_product_boundary(grid, f, f));
}

void validate_signal(const DomainGrid& grid, const BoundarySignal& f) {
  if (f.n_boundary != grid.n_boundary() || f.n_time != grid.n_time)
    throw std::invalid_argument("signal does not match the grid lattice");
  for (double x : f.v)
    if (!std::isfinite(x))
      throw std::invalid_argument("signal contains non-finite values");
}

}  // namespace ptrlab
