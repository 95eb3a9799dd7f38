#include "ptrlab/random.hpp"

#include <cmath>

namespace ptrlab {

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; platform-stable given the splitmix64 stream.
  double u1 = uniform(), u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SmoothSignalParams random_smooth_params(const DomainGrid& grid,
                                        std::uint64_t seed, int bumps_per_node,
                                        double t_lo, double t_hi,
                                        double min_width) {
  if (t_hi < 0.0) t_hi = grid.horizon;
  if (min_width < 0.0) min_width = std::max(8.0 * grid.dt, 0.02 * grid.horizon);
  Rng rng(seed);
  SmoothSignalParams params;
  const double span = t_hi - t_lo;
  for (int b = 0; b < grid.n_boundary(); ++b) {
    for (int i = 0; i < bumps_per_node; ++i) {
      SmoothSignalParams::Bump bump;
      bump.b = b;
      bump.center = t_lo + span * rng.uniform(0.1, 0.9);
      bump.width = rng.uniform(min_width, std::max(2.0 * min_width, 0.08 * span));
      bump.amplitude = rng.normal();
      params.bumps.push_back(bump);
    }
  }
  return params;
}

BoundarySignal evaluate_signal(const SmoothSignalParams& params,
                               const DomainGrid& grid) {
  BoundarySignal f = BoundarySignal::zeros(grid);
  for (const auto& bump : params.bumps) {
    if (bump.b >= f.n_boundary) continue;
    for (int k = 0; k < f.n_time; ++k) {
      const double t = grid.time_at(k);
      const double z = (t - bump.center) / bump.width;
      f.at(bump.b, k) += bump.amplitude * std::exp(-0.5 * z * z);
    }
  }
  return f;
}

BoundarySignal random_smooth_signal(const DomainGrid& grid, std::uint64_t seed,
                                    int bumps_per_node, double t_lo,
                                    double t_hi) {
  return evaluate_signal(
      random_smooth_params(grid, seed, bumps_per_node, t_lo, t_hi), grid);
}

}  // namespace ptrlab
