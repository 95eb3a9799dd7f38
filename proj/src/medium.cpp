#include "ptrlab/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ptrlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cumulative slowness integral along the 1D axis (trapezoid, exact to O(h^2)).
std::vector<double> cumulative_slowness(const DomainGrid& grid,
                                        const Medium& medium) {
  std::vector<double> cum(grid.nx, 0.0);
  for (int i = 1; i < grid.nx; ++i) {
    double s_avg = 0.5 * (1.0 / medium.c[i - 1] + 1.0 / medium.c[i]);
    cum[i] = cum[i - 1] + grid.h * s_avg;
  }
  return cum;
}

// First-order fast marching on the 2D grid, 4-neighbour upwind update.
void fast_march(const DomainGrid& grid, const Medium& medium,
                std::vector<double>& d) {
  const int nx = grid.nx, ny = grid.ny;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<std::uint8_t> known(grid.n_nodes(), 0);
  for (int n = 0; n < grid.n_nodes(); ++n)
    if (d[n] < kInf) heap.emplace(d[n], n);

  auto update = [&](int i, int j) -> double {
    const int n = grid.node(i, j);
    double a = kInf, b = kInf;
    if (i > 0) a = std::min(a, d[grid.node(i - 1, j)]);
    if (i < nx - 1) a = std::min(a, d[grid.node(i + 1, j)]);
    if (j > 0) b = std::min(b, d[grid.node(i, j - 1)]);
    if (j < ny - 1) b = std::min(b, d[grid.node(i, j + 1)]);
    const double hs = grid.h / medium.c[n];
    if (a > b) std::swap(a, b);
    if (b - a >= hs || b == kInf) return a + hs;
    const double disc = 2.0 * hs * hs - (a - b) * (a - b);
    return 0.5 * (a + b + std::sqrt(disc));
  };

  while (!heap.empty()) {
    auto [dist, n] = heap.top();
    heap.pop();
    if (known[n] || dist > d[n]) continue;  // stale heap entry
    known[n] = 1;
    const int i = n % nx, j = n / nx;
    const int di[4] = {-1, 1, 0, 0};
    const int dj[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const int ii = i + di[k], jj = j + dj[k];
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      const int m = grid.node(ii, jj);
      if (known[m]) continue;
      const double cand = update(ii, jj);
      if (cand < d[m]) {
        d[m] = cand;
        heap.emplace(cand, m);
      }
    }
  }
}

DistanceField distance_from_seeds(const DomainGrid& grid, const Medium& medium,
                                  std::vector<double> seed_values) {
  DistanceField field;
  if (grid.dim == 1) {
    const auto cum = cumulative_slowness(grid, medium);
    field.d.assign(grid.n_nodes(), kInf);
    for (int s = 0; s < grid.nx; ++s) {
      if (seed_values[s] == kInf) continue;
      for (int i = 0; i < grid.nx; ++i)
        field.d[i] =
            std::min(field.d[i], seed_values[s] + std::abs(cum[i] - cum[s]));
    }
  } else {
    field.d = std::move(seed_values);
    fast_march(grid, medium, field.d);
  }
  return field;
}

void check_source_nonempty(const std::vector<int>& src) {
  if (src.empty())
    throw std::invalid_argument("travel_time_distance: empty source set");
}

}  // namespace

Medium make_medium(const DomainGrid& grid,
                   const std::function<double(double, double)>& c_of,
                   const std::function<double(double, double)>& q_of,
                   const std::function<double(double, double)>& eta_of) {
  Medium m;
  m.c.resize(grid.n_nodes());
  m.q.resize(grid.n_nodes());
  m.c_min = kInf;
  m.c_max = 0.0;
  for (int n = 0; n < grid.n_nodes(); ++n) {
    m.c[n] = c_of(grid.x_of(n), grid.y_of(n));
    m.q[n] = q_of(grid.x_of(n), grid.y_of(n));
    if (!(m.c[n] > 0.0))
      throw std::invalid_argument("make_medium: wave speed must be positive");
    m.c_min = std::min(m.c_min, m.c[n]);
    m.c_max = std::max(m.c_max, m.c[n]);
  }
  m.eta.resize(grid.n_boundary());
  for (int p = 0; p < grid.n_boundary(); ++p) {
    int n = grid.boundary_nodes[p];
    m.eta[p] = eta_of(grid.x_of(n), grid.y_of(n));
  }
  return m;
}

void attach_boundary_metric(DomainGrid& grid, const Medium& medium) {
  if (grid.dim == 1) return;  // c^{1-m} == 1
  for (int p = 0; p < grid.n_boundary(); ++p)
    grid.boundary_weight[p] = grid.h / medium.c[grid.boundary_nodes[p]];
}

DistanceField travel_time_distance(const DomainGrid& grid,
                                   const Medium& medium,
                                   const std::vector<int>& source_nodes) {
  check_source_nonempty(source_nodes);
  std::vector<double> seeds(grid.n_nodes(), kInf);
  for (int s : source_nodes) {
    if (s < 0 || s >= grid.n_nodes())
      throw std::invalid_argument("travel_time_distance: source node out of range");
    seeds[s] = 0.0;
  }
  return distance_from_seeds(grid, medium, std::move(seeds));
}

DistanceField travel_time_from_point(const DomainGrid& grid,
                                     const Medium& medium, double px,
                                     double py) {
  std::vector<double> seeds(grid.n_nodes(), kInf);
  auto seed_node = [&](int n) {
    const double dx = grid.x_of(n) - px, dy = grid.y_of(n) - py;
    const double r = std::sqrt(dx * dx + dy * dy);
    seeds[n] = std::min(seeds[n], r / medium.c[n]);
  };
  if (grid.dim == 1) {
    int i0 = std::clamp(static_cast<int>(px / grid.h), 0, grid.nx - 2);
    seed_node(i0);
    seed_node(i0 + 1);
  } else {
    int i0 = std::clamp(static_cast<int>(px / grid.h), 0, grid.nx - 2);
    int j0 = std::clamp(static_cast<int>(py / grid.h), 0, grid.ny - 2);
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di) seed_node(grid.node(i0 + di, j0 + dj));
  }
  return distance_from_seeds(grid, medium, std::move(seeds));
}

std::vector<std::uint8_t> domain_of_influence(const DomainGrid& grid,
                                              const Medium& medium,
                                              const std::vector<int>& gamma,
                                              double t) {
  if (t < 0.0) throw std::invalid_argument("domain_of_influence: t must be >= 0");
  std::vector<int> nodes;
  nodes.reserve(gamma.size());
  for (int p : gamma) {
    if (p < 0 || p >= grid.n_boundary())
      throw std::invalid_argument("domain_of_influence: boundary position out of range");
    nodes.push_back(grid.boundary_nodes[p]);
  }
  const DistanceField field = travel_time_distance(grid, medium, nodes);
  std::vector<std::uint8_t> ind(grid.n_nodes(), 0);
  for (int n = 0; n < grid.n_nodes(); ++n) ind[n] = field.d[n] <= t ? 1 : 0;
  return ind;
}

namespace {

// Bilinear interpolation of c and its cell-wise gradient.
struct SpeedSampler {
  const DomainGrid& grid;
  const Medium& medium;

  double value(double x, double y) const {
    if (grid.dim == 1) {
      int i = std::clamp(static_cast<int>(x / grid.h), 0, grid.nx - 2);
      double u = x / grid.h - i;
      return (1 - u) * medium.c[i] + u * medium.c[i + 1];
    }
    int i = std::clamp(static_cast<int>(x / grid.h), 0, grid.nx - 2);
    int j = std::clamp(static_cast<int>(y / grid.h), 0, grid.ny - 2);
    double u = x / grid.h - i, v = y / grid.h - j;
    const double c00 = medium.c[grid.node(i, j)];
    const double c10 = medium.c[grid.node(i + 1, j)];
    const double c01 = medium.c[grid.node(i, j + 1)];
    const double c11 = medium.c[grid.node(i + 1, j + 1)];
    return (1 - u) * (1 - v) * c00 + u * (1 - v) * c10 + (1 - u) * v * c01 +
           u * v * c11;
  }

  void gradient(double x, double y, double& gx, double& gy) const {
    int i = std::clamp(static_cast<int>(x / grid.h), 0, grid.nx - 2);
    int j = std::clamp(static_cast<int>(y / grid.h), 0, grid.ny - 2);
    double u = x / grid.h - i, v = y / grid.h - j;
    const double c00 = medium.c[grid.node(i, j)];
    const double c10 = medium.c[grid.node(i + 1, j)];
    const double c01 = medium.c[grid.node(i, j + 1)];
    const double c11 = medium.c[grid.node(i + 1, j + 1)];
    gx = ((1 - v) * (c10 - c00) + v * (c11 - c01)) / grid.h;
    gy = ((1 - u) * (c01 - c00) + u * (c11 - c10)) / grid.h;
  }
};

}  // namespace

GeodesicPoint normal_geodesic_point(const DomainGrid& grid,
                                    const Medium& medium, int z_pos,
                                    double s) {
  if (z_pos < 0 || z_pos >= grid.n_boundary())
    throw std::invalid_argument("normal_geodesic_point: bad boundary position");
  if (s < 0.0) throw std::invalid_argument("normal_geodesic_point: s must be >= 0");

  GeodesicPoint result;
  if (grid.dim == 1) {
    const auto cum = cumulative_slowness(grid, medium);
    const double total = cum.back();
    double target = (z_pos == 0) ? s : total - s;
    if (s > total + 1e-12)
      throw std::runtime_error("normal_geodesic_point: geodesic exits the domain");
    target = std::clamp(target, 0.0, total);
    // Invert the monotone cumulative integral by linear interpolation.
    int i = 0;
    while (i < grid.nx - 2 && cum[i + 1] < target) ++i;
    const double seg = cum[i + 1] - cum[i];
    const double frac = seg > 0 ? (target - cum[i]) / seg : 0.0;
    result.x = grid.h * (i + frac);
    result.y = 0.0;
  } else {
    const int znode = grid.boundary_nodes[z_pos];
    const int zi = znode % grid.nx, zj = znode / grid.nx;
    double nx_dir = 0.0, ny_dir = 0.0;
    const bool on_left = zi == 0, on_right = zi == grid.nx - 1;
    const bool on_bottom = zj == 0, on_top = zj == grid.ny - 1;
    if ((on_left || on_right) && (on_bottom || on_top))
      throw std::invalid_argument(
          "normal_geodesic_point: normal undefined at a corner node");
    if (on_left) nx_dir = 1.0;
    else if (on_right) nx_dir = -1.0;
    else if (on_bottom) ny_dir = 1.0;
    else ny_dir = -1.0;

    const SpeedSampler cs{grid, medium};
    double x = grid.x_of(znode), y = grid.y_of(znode);
    if (medium.c_max - medium.c_min < 1e-12 * medium.c_max) {
      // Constant speed: straight segment of Euclidean length c*s.
      x += nx_dir * medium.c[znode] * s;
      y += ny_dir * medium.c[znode] * s;
      if (x < -1e-9 || x > grid.extent_x + 1e-9 || y < -1e-9 ||
          y > grid.extent_y + 1e-9)
        throw std::runtime_error("normal_geodesic_point: geodesic exits the domain");
    } else {
      // Hamiltonian flow of H = c^2 |p|^2 / 2 in travel-time arclength:
      //   x' = c^2 p,  p' = -c grad(c) |p|^2.
      const double c0 = cs.value(x, y);
      double px = nx_dir / c0, py = ny_dir / c0;
      const double ds = grid.h / (4.0 * medium.c_max);
      double travelled = 0.0;
      auto rhs = [&cs](double X, double Y, double PX, double PY, double& dX,
                       double& dY, double& dPX, double& dPY) {
        const double c = cs.value(X, Y);
        double gx, gy;
        cs.gradient(X, Y, gx, gy);
        const double p2 = PX * PX + PY * PY;
        dX = c * c * PX;
        dY = c * c * PY;
        dPX = -c * gx * p2;
        dPY = -c * gy * p2;
      };
      while (travelled < s) {
        const double step = std::min(ds, s - travelled);
        double k1x, k1y, k1px, k1py, k2x, k2y, k2px, k2py;
        double k3x, k3y, k3px, k3py, k4x, k4y, k4px, k4py;
        rhs(x, y, px, py, k1x, k1y, k1px, k1py);
        rhs(x + 0.5 * step * k1x, y + 0.5 * step * k1y, px + 0.5 * step * k1px,
            py + 0.5 * step * k1py, k2x, k2y, k2px, k2py);
        rhs(x + 0.5 * step * k2x, y + 0.5 * step * k2y, px + 0.5 * step * k2px,
            py + 0.5 * step * k2py, k3x, k3y, k3px, k3py);
        rhs(x + step * k3x, y + step * k3y, px + step * k3px, py + step * k3py,
            k4x, k4y, k4px, k4py);
        x += step / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        y += step / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        px += step / 6.0 * (k1px + 2 * k2px + 2 * k3px + k4px);
        py += step / 6.0 * (k1py + 2 * k2py + 2 * k3py + k4py);
        travelled += step;
        if (travelled < s &&
            (x < 0.0 || x > grid.extent_x || y < 0.0 || y > grid.extent_y))
          throw std::runtime_error(
              "normal_geodesic_point: geodesic exits the domain");
      }
      x = std::clamp(x, 0.0, grid.extent_x);
      y = std::clamp(y, 0.0, grid.extent_y);
    }
    result.x = x;
    result.y = y;
  }

  // tau(z) detection: the normal geodesic is still minimizing iff the
  // eikonal distance back to the boundary equals s within 2h.
  std::vector<int> whole(grid.n_boundary());
  for (int p = 0; p < grid.n_boundary(); ++p) whole[p] = p;
  DistanceField to_boundary = travel_time_distance(
      grid, medium,
      [&] {
        std::vector<int> nodes;
        for (int p : whole) nodes.push_back(grid.boundary_nodes[p]);
        return nodes;
      }());
  // Bilinear sample of d(., dM) at the end point.
  double d_b;
  if (grid.dim == 1) {
    int i = std::clamp(static_cast<int>(result.x / grid.h), 0, grid.nx - 2);
    double u = result.x / grid.h - i;
    d_b = (1 - u) * to_boundary.d[i] + u * to_boundary.d[i + 1];
  } else {
    int i = std::clamp(static_cast<int>(result.x / grid.h), 0, grid.nx - 2);
    int j = std::clamp(static_cast<int>(result.y / grid.h), 0, grid.ny - 2);
    double u = result.x / grid.h - i, v = result.y / grid.h - j;
    d_b = (1 - u) * (1 - v) * to_boundary.d[grid.node(i, j)] +
          u * (1 - v) * to_boundary.d[grid.node(i + 1, j)] +
          (1 - u) * v * to_boundary.d[grid.node(i, j + 1)] +
          u * v * to_boundary.d[grid.node(i + 1, j + 1)];
  }
  result.minimizing = std::abs(d_b - s) <= 2.0 * grid.h;
  return result;
}

double slab_volume(const DomainGrid& grid, const Medium& medium, int z_pos,
                   double T_hat, double T0) {
  if (!(T0 >= 0.0 && T0 <= T_hat))
    throw std::invalid_argument("slab_volume: need 0 <= T0 <= T_hat");
  const DistanceField from_z =
      travel_time_distance(grid, medium, {grid.boundary_nodes[z_pos]});
  std::vector<int> all_bnodes = grid.boundary_nodes;
  const DistanceField from_boundary =
      travel_time_distance(grid, medium, all_bnodes);
  const double hm = std::pow(grid.h, grid.dim);
  double vol = 0.0;
  for (int n = 0; n < grid.n_nodes(); ++n) {
    if (from_z.d[n] <= T_hat && from_boundary.d[n] > T0)
      vol += hm * grid.cell_factor(n) * std::pow(medium.c[n], -grid.dim);
  }
  return vol;
}

C0Estimate c0_constant(const DomainGrid& grid, const Medium& medium, int z_pos,
                       double T_hat, double delta) {
  C0Estimate est;
  const double expo = 0.5 * (grid.dim + 1);
  double deltas[3] = {delta, 0.5 * delta, 0.25 * delta};
  for (int k = 0; k < 3; ++k) {
    const double vol = slab_volume(grid, medium, z_pos, T_hat, T_hat - deltas[k]);
    if (vol <= 0.0)
      throw std::runtime_error(
          "c0_constant: empty slab at requested thickness (T_hat >= tau(z)?)");
    est.ratios[k] = std::pow(deltas[k], expo) / vol;
  }
  // First-order Richardson on the two finest pairs.
  const double e1 = 2.0 * est.ratios[1] - est.ratios[0];
  const double e2 = 2.0 * est.ratios[2] - est.ratios[1];
  est.value = e2;
  est.spread = std::abs(e2 - e1) / std::max(std::abs(e2), 1e-300);
  return est;
}

double boundary_chain_distance(const DomainGrid& grid, const Medium& medium,
                               int pos_a, int pos_b) {
  if (grid.dim == 1)
    return pos_a == pos_b ? 0.0 : kInf;
  const int nb = grid.n_boundary();
  // g-lengths of chain edges (cyclic).
  double total = 0.0;
  std::vector<double> edge(nb);
  for (int p = 0; p < nb; ++p) {
    const int a = grid.boundary_nodes[p];
    const int b = grid.boundary_nodes[(p + 1) % nb];
    edge[p] = grid.h * 0.5 * (1.0 / medium.c[a] + 1.0 / medium.c[b]);
    total += edge[p];
  }
  int lo = std::min(pos_a, pos_b), hi = std::max(pos_a, pos_b);
  double arc = 0.0;
  for (int p = lo; p < hi; ++p) arc += edge[p];
  return std::min(arc, total - arc);
}

}  // namespace ptrlab
