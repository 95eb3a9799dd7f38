#ifndef PTRLAB_RANDOM_HPP
#define PTRLAB_RANDOM_HPP

#include <cstdint>
#include <vector>

#include "ptrlab/signal.hpp"

namespace ptrlab {

/// Deterministic, platform-stable generator (splitmix64 core with explicit
/// Box-Muller normals); reruns with the same seed are bit-identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);
  double normal();                      // N(0, 1)

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t salt);

/// A smooth boundary source described analytically (sum of Gaussian bumps in
/// time per boundary node), so the same draw can be evaluated on any lattice.
struct SmoothSignalParams {
  struct Bump {
    int b = 0;          // boundary-chain position
    double center = 0;  // time
    double width = 0;   // gaussian sigma, time units
    double amplitude = 0;
  };
  std::vector<Bump> bumps;
};

/// Random smooth params: bumps_per_node Gaussian bumps per boundary node with
/// centers in [0.1, 0.9] * (t_hi - t_lo) + t_lo and widths >= min_width.
SmoothSignalParams random_smooth_params(const DomainGrid& grid,
                                        std::uint64_t seed,
                                        int bumps_per_node = 3,
                                        double t_lo = 0.0, double t_hi = -1.0,
                                        double min_width = -1.0);

BoundarySignal evaluate_signal(const SmoothSignalParams& params,
                               const DomainGrid& grid);

BoundarySignal random_smooth_signal(const DomainGrid& grid, std::uint64_t seed,
                                    int bumps_per_node = 3, double t_lo = 0.0,
                                    double t_hi = -1.0);

}  // namespace ptrlab

#endif  // PTRLAB_RANDOM_HPP
