#ifndef PTRLAB_TESTS_TESTUTIL_HPP
#define PTRLAB_TESTS_TESTUTIL_HPP

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ptrlab/medium.hpp"

namespace ptrlab::testutil {

// Independent travel-time oracle: Dijkstra on the 8-connected grid graph with
// edge weight = Euclidean edge length x mean slowness of the endpoints.
// First-order accurate like the fast-marching solver but entirely separate
// machinery.
inline std::vector<double> dijkstra_8connected(const DomainGrid& grid,
                                               const Medium& medium,
                                               const std::vector<int>& sources) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(grid.n_nodes(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int s : sources) {
    d[s] = 0.0;
    heap.emplace(0.0, s);
  }
  const int di[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
  const int dj[8] = {0, 0, -1, 1, -1, 1, -1, 1};
  while (!heap.empty()) {
    auto [dist, n] = heap.top();
    heap.pop();
    if (dist > d[n]) continue;
    const int i = n % grid.nx, j = n / grid.nx;
    const int n_dirs = grid.dim == 1 ? 2 : 8;
    for (int k = 0; k < n_dirs; ++k) {
      const int ii = i + di[k], jj = grid.dim == 1 ? 0 : j + dj[k];
      if (ii < 0 || ii >= grid.nx || jj < 0 || jj >= grid.ny) continue;
      if (grid.dim == 1 && dj[k] != 0) continue;
      const int m = grid.node(ii, jj);
      const double len = grid.h * std::sqrt(static_cast<double>(
                                      (ii - i) * (ii - i) + (jj - j) * (jj - j)));
      const double w = len * 0.5 * (1.0 / medium.c[n] + 1.0 / medium.c[m]);
      if (d[n] + w < d[m]) {
        d[m] = d[n] + w;
        heap.emplace(d[m], m);
      }
    }
  }
  return d;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ptrlab::testutil

#endif
