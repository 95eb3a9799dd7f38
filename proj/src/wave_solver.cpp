#include "ptrlab/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ptrlab {

namespace {

// Assembled coefficient tables for the semi-discrete system
//   M u_tt = -(K + Q + E) u + B f,
// where M is the lumped c^{-m} h^m mass (trapezoid cell factors), K the
// symmetric stiffness of the Dirichlet form  integral c^{2-m} grad u . grad v,
// Q the potential term and E the Robin impedance term.  All four share the
// same quadrature, so the system is exactly self-adjoint on the lattice; this
// is what makes the discrete response operator satisfy Lambda* = R Lambda R
// to round-off.
struct SolverTables {
  std::vector<double> inv_mass;     // 1 / M_i
  std::vector<double> qe;           // Q_i + E_i (diagonal)
  std::vector<double> load;         // B_i = dS_g at boundary nodes, else 0
  std::vector<double> cond_x;       // 1D: edge conductance c_{i+1/2}/h
  std::vector<double> wx, wy;       // 2D: edge weights (1 or 1/2)
};

SolverTables build_tables(const DomainGrid& grid, const Medium& medium) {
  SolverTables t;
  const int n = grid.n_nodes();
  t.inv_mass.resize(n);
  t.qe.assign(n, 0.0);
  t.load.assign(n, 0.0);
  const double hm = std::pow(grid.h, grid.dim);
  for (int i = 0; i < n; ++i) {
    const double mass =
        hm * grid.cell_factor(i) * std::pow(medium.c[i], -grid.dim);
    t.inv_mass[i] = 1.0 / mass;
    t.qe[i] = medium.q[i] * mass;
  }
  for (int p = 0; p < grid.n_boundary(); ++p) {
    const int nd = grid.boundary_nodes[p];
    t.load[nd] = grid.boundary_weight[p];
    t.qe[nd] += medium.eta[p] * grid.boundary_weight[p];
  }
  if (grid.dim == 1) {
    t.cond_x.resize(grid.nx - 1);
    for (int i = 0; i + 1 < grid.nx; ++i)
      t.cond_x[i] = 0.5 * (medium.c[i] + medium.c[i + 1]) / grid.h;
  } else {
    // Horizontal edge (i,j)-(i+1,j): dual strip is half a cell on the j==0
    // and j==ny-1 rows.  c^{2-m} == 1 in 2D.
    t.wx.assign(static_cast<std::size_t>(grid.nx - 1) * grid.ny, 1.0);
    t.wy.assign(static_cast<std::size_t>(grid.nx) * (grid.ny - 1), 1.0);
    for (int i = 0; i + 1 < grid.nx; ++i) {
      t.wx[i] = 0.5;
      t.wx[static_cast<std::size_t>(grid.ny - 1) * (grid.nx - 1) + i] = 0.5;
    }
    for (int j = 0; j + 1 < grid.ny; ++j) {
      t.wy[static_cast<std::size_t>(j) * grid.nx] = 0.5;
      t.wy[static_cast<std::size_t>(j) * grid.nx + grid.nx - 1] = 0.5;
    }
  }
  return t;
}

// y = (K + Q + E) u
void apply_stiffness(const DomainGrid& grid, const SolverTables& t,
                     const std::vector<double>& u, std::vector<double>& y) {
  const int n = grid.n_nodes();
  for (int i = 0; i < n; ++i) y[i] = t.qe[i] * u[i];
  if (grid.dim == 1) {
    for (int i = 0; i + 1 < grid.nx; ++i) {
      const double flux = t.cond_x[i] * (u[i] - u[i + 1]);
      y[i] += flux;
      y[i + 1] -= flux;
    }
  } else {
    const int nx = grid.nx, ny = grid.ny;
    for (int j = 0; j < ny; ++j) {
      const double* uj = u.data() + static_cast<std::size_t>(j) * nx;
      double* yj = y.data() + static_cast<std::size_t>(j) * nx;
      const double* wxj = t.wx.data() + static_cast<std::size_t>(j) * (nx - 1);
      for (int i = 0; i + 1 < nx; ++i) {
        const double flux = wxj[i] * (uj[i] - uj[i + 1]);
        yj[i] += flux;
        yj[i + 1] -= flux;
      }
    }
    for (int j = 0; j + 1 < ny; ++j) {
      const double* uj = u.data() + static_cast<std::size_t>(j) * nx;
      const double* uj1 = u.data() + static_cast<std::size_t>(j + 1) * nx;
      double* yj = y.data() + static_cast<std::size_t>(j) * nx;
      double* yj1 = y.data() + static_cast<std::size_t>(j + 1) * nx;
      const double* wyj = t.wy.data() + static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i) {
        const double flux = wyj[i] * (uj[i] - uj1[i]);
        yj[i] += flux;
        yj1[i] -= flux;
      }
    }
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ForwardSolution solve_forward(const DomainGrid& grid, const Medium& medium,
                              const BoundarySignal& f,
                              const std::vector<double>& snapshot_times) {
  validate_signal(grid, f);
  const int n = grid.n_nodes();
  const int nt = grid.n_time;
  const double dt = grid.dt;

  // Snapshot times must lie on the solver's integer lattice {m * dt}.
  std::vector<std::pair<int, int>> snap_steps;  // (step, output slot)
  for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
    const double ratio = snapshot_times[s] / dt;
    const int step = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - step) > 1e-6 || step < 0 || step > nt)
      throw std::invalid_argument(
          "solve_forward: snapshot time not on the solver time lattice");
    snap_steps.emplace_back(step, static_cast<int>(s));
  }
  std::sort(snap_steps.begin(), snap_steps.end());

  const SolverTables tables = build_tables(grid, medium);

  ForwardSolution sol;
  sol.trace = BoundarySignal::zeros(grid);
  sol.snapshots.resize(snapshot_times.size());
  for (std::size_t s = 0; s < snapshot_times.size(); ++s)
    sol.snapshots[s].time = snapshot_times[s];

  std::vector<double> u_prev(n, 0.0), u(n, 0.0), u_next(n, 0.0), work(n, 0.0);
  const double f_max = max_abs(f.v);
  const double blowup = 1e6 * std::max(1.0, f_max);
  const double dt2 = dt * dt;

  std::size_t snap_cursor = 0;
  auto capture = [&](int step, const std::vector<double>& field) {
    while (snap_cursor < snap_steps.size() &&
           snap_steps[snap_cursor].first == step) {
      sol.snapshots[snap_steps[snap_cursor].second].u = field;
      ++snap_cursor;
    }
  };
  capture(0, u);

  for (int step = 0; step < nt; ++step) {
    apply_stiffness(grid, tables, u, work);
    // Source at integer time step*dt: average of the adjacent midpoint
    // samples (the transpose of the trace extraction below).
    for (int p = 0; p < grid.n_boundary(); ++p) {
      const int nd = grid.boundary_nodes[p];
      double fg = 0.0;
      if (step - 1 >= 0) fg += 0.5 * f.at(p, step - 1);
      if (step < nt) fg += 0.5 * f.at(p, step);
      work[nd] -= tables.load[nd] * fg;
    }
    for (int i = 0; i < n; ++i)
      u_next[i] = 2.0 * u[i] - u_prev[i] - dt2 * tables.inv_mass[i] * work[i];

    // Trace sample k = step sits at the midpoint between steps step, step+1.
    for (int p = 0; p < grid.n_boundary(); ++p) {
      const int nd = grid.boundary_nodes[p];
      sol.trace.at(p, step) = 0.5 * (u[nd] + u_next[nd]);
    }

    std::swap(u_prev, u);
    std::swap(u, u_next);
    capture(step + 1, u);

    if ((step & 63) == 0 || step == nt - 1) {
      if (max_abs(u) > blowup)
        throw std::runtime_error(
            "solve_forward: field norm exceeded 1e6 x source norm at t=" +
            std::to_string((step + 1) * dt) +
            " (unstable time step; check the CFL bound dt <= 0.9 h / "
            "(sqrt(m) c_max))");
    }
  }
  return sol;
}

double inner_product_volume(const DomainGrid& grid, const Medium& medium,
                            const std::vector<double>& w1,
                            const std::vector<double>& w2) {
  if (w1.size() != static_cast<std::size_t>(grid.n_nodes()) ||
      w2.size() != w1.size())
    throw std::invalid_argument("inner_product_volume: field size mismatch");
  const double hm = std::pow(grid.h, grid.dim);
  double sum = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i)
    sum += w1[i] * w2[i] * grid.cell_factor(i) *
           std::pow(medium.c[i], -grid.dim);
  return sum * hm;
}

double volume_norm(const DomainGrid& grid, const Medium& medium,
                   const std::vector<double>& w) {
  return std::sqrt(inner_product_volume(grid, medium, w, w));
}

BoundarySignal second_time_derivative(const BoundarySignal& f) {
  BoundarySignal g = f;
  const double inv_dt2 = 1.0 / (f.dt * f.dt);
  for (int b = 0; b < f.n_boundary; ++b) {
    for (int k = 0; k < f.n_time; ++k) {
      const double prev = k > 0 ? f.at(b, k - 1) : 0.0;
      const double next = k + 1 < f.n_time ? f.at(b, k + 1) : 0.0;
      g.at(b, k) = (next - 2.0 * f.at(b, k) + prev) * inv_dt2;
    }
  }
  return g;
}

ForwardSolution solve_source_timederiv(const DomainGrid& grid,
                                       const Medium& medium,
                                       const BoundarySignal& f,
                                       const std::vector<double>& snapshot_times) {
  return solve_forward(grid, medium, second_time_derivative(f), snapshot_times);
}

std::vector<double> apply_operator_a(const DomainGrid& grid,
                                     const Medium& medium,
                                     const std::vector<double>& u) {
  const SolverTables tables = build_tables(grid, medium);
  std::vector<double> y(grid.n_nodes());
  apply_stiffness(grid, tables, u, y);
  for (int i = 0; i < grid.n_nodes(); ++i) y[i] *= tables.inv_mass[i];
  return y;
}

double discrete_energy(const DomainGrid& grid, const Medium& medium,
                       const std::vector<double>& u_prev,
                       const std::vector<double>& u_next, double dt) {
  const SolverTables tables = build_tables(grid, medium);
  const int n = grid.n_nodes();
  std::vector<double> ku(n);
  apply_stiffness(grid, tables, u_next, ku);
  double kinetic = 0.0, potential = 0.0;
  for (int i = 0; i < n; ++i) {
    const double vel = (u_next[i] - u_prev[i]) / dt;
    kinetic += 0.5 * vel * vel / tables.inv_mass[i];
    potential += 0.5 * ku[i] * u_prev[i];
  }
  return kinetic + potential;
}

}  // namespace ptrlab
