#ifndef PTRLAB_BOUNDARY_OPS_HPP
#define PTRLAB_BOUNDARY_OPS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ptrlab/signal.hpp"

namespace ptrlab {

/// The time filter J appears in the source text in two variants that are
/// adjoint to each other; which one pairs with which sign of the connecting
/// operator is resolved empirically (see connecting.hpp).
///   kIntro:    Jf(t) = 1/2 * integral_0^{min(t, 2T-t)} f(s) ds
///   kSection2: Jf(t) = 1/2 * integral over {s > t, s + t <= 2T} of f(s) ds
enum class FilterVariant { kIntro, kSection2 };

std::string to_string(FilterVariant v);
FilterVariant filter_variant_from_string(const std::string& s);

/// Rf(x,t) = f(x, 2T-t).  Exact involution on the midpoint lattice.
BoundarySignal time_reverse(const BoundarySignal& f);

/// Jf per variant.  Midpoint-rule quadrature in s with half weight on the
/// cells cut by the integration limits; linear in f and second order.
BoundarySignal time_filter(const BoundarySignal& f, FilterVariant variant);

/// B = union of Gamma_j x [T - T_j, T]; Gamma_j as boundary-chain positions.
struct ProjectorSpec {
  struct Patch {
    std::vector<int> gamma;  // nonempty boundary-chain positions
    double T_j = 0.0;        // 0 <= T_j <= T
  };
  std::vector<Patch> patches;
};

/// Validates patch invariants against the grid; throws std::invalid_argument.
void validate_projector(const DomainGrid& grid, const ProjectorSpec& spec);

/// 0/1 mask over (boundary node, time sample) realizing chi_B.
std::vector<std::uint8_t> projector_mask(const DomainGrid& grid,
                                         const ProjectorSpec& spec);

/// P_B f = chi_B f.  Idempotent and self-adjoint by construction.
BoundarySignal project(const BoundarySignal& f,
                       const std::vector<std::uint8_t>& mask);
BoundarySignal project(const DomainGrid& grid, const BoundarySignal& f,
                       const ProjectorSpec& spec);

void apply_mask_in_place(BoundarySignal& f,
                         const std::vector<std::uint8_t>& mask);

bool mask_empty(const std::vector<std::uint8_t>& mask);

/// Single-sample impulse at (boundary-chain position, time index), mollified
/// by a 3-sample triangular kernel to avoid grid dispersion artifacts.
BoundarySignal make_impulse(const DomainGrid& grid, int b_pos, int k_src,
                            double amplitude = 1.0);

/// Full-boundary patch helper (all chain positions).
std::vector<int> whole_boundary(const DomainGrid& grid);

/// Contiguous boundary patch of chain-arclength radius around a center
/// position (cyclic in 2D, clipped in 1D to the single endpoint).
std::vector<int> boundary_patch(const DomainGrid& grid, int center_pos,
                                double radius);

}  // namespace ptrlab

#endif  // PTRLAB_BOUNDARY_OPS_HPP
