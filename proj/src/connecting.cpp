#include "ptrlab/connecting.hpp"

#include <cmath>
#include <stdexcept>

#include "ptrlab/random.hpp"

namespace ptrlab {

std::string to_string(const Convention& c) {
  return to_string(c.variant) + (c.sign > 0 ? "/+1" : "/-1");
}

ConnectingOperator::ConnectingOperator(const MeasurementOracle& oracle,
                                       Convention convention)
    : oracle_(oracle), conv_(convention) {
  if (conv_.sign != 1 && conv_.sign != -1)
    throw std::invalid_argument("ConnectingOperator: sign must be +1 or -1");
}

BoundarySignal ConnectingOperator::apply(const BoundarySignal& f) const {
  const BoundarySignal a = oracle_.apply(f);                      // Lambda f
  const BoundarySignal jf = time_filter(f, conv_.variant);
  const BoundarySignal b = oracle_.apply(time_reverse(jf));       // Lambda R J f
  return combine(a, b);
}

BoundarySignal ConnectingOperator::combine(const BoundarySignal& a,
                                           const BoundarySignal& b) const {
  // K h = sign * (R b - J a) with a = Lambda h, b = Lambda(R J h).
  BoundarySignal k = time_reverse(b);
  k -= time_filter(a, conv_.variant);
  if (conv_.sign < 0) k *= -1.0;
  return k;
}

double ConnectingOperator::blago_inner_product(const BoundarySignal& f,
                                               const BoundarySignal& h) const {
  return inner_product_boundary(grid(), apply(f), h);
}

Convention resolve_convention(const MeasurementOracle& oracle,
                              FilterVariant variant, std::uint64_t seed) {
  ConnectingOperator probe(oracle, Convention{variant, +1});
  const DomainGrid& grid = oracle.grid();
  double gram_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const BoundarySignal f =
        random_smooth_signal(grid, hash_combine(seed, i), 2);
    gram_sum += probe.blago_inner_product(f, f);
  }
  // <Kf, f> = ||u^f(T)||^2 >= 0 under the correct pairing; a consistently
  // negative Gram form means the other sign belongs to this filter variant.
  return Convention{variant, gram_sum >= 0.0 ? +1 : -1};
}

NormEstimate estimate_pkp_norm(const ConnectingOperator& op,
                               const std::vector<std::uint8_t>& mask,
                               int n_iter, std::uint64_t seed) {
  if (n_iter < 8)
    throw std::invalid_argument("estimate_pkp_norm: need n_iter >= 8");
  NormEstimate est;
  if (mask_empty(mask)) return est;

  const DomainGrid& grid = op.grid();
  BoundarySignal v = random_smooth_signal(grid, seed, 2);
  apply_mask_in_place(v, mask);
  double vn = boundary_norm(grid, v);
  if (vn == 0.0) {
    // Smooth start missed the mask support; fall back to the indicator.
    for (std::size_t i = 0; i < v.v.size(); ++i) v.v[i] = mask[i] ? 1.0 : 0.0;
    vn = boundary_norm(grid, v);
  }
  v *= 1.0 / vn;

  double rayleigh = 0.0;
  for (int it = 0; it < n_iter; ++it) {
    BoundarySignal kv = op.apply(v);  // 2 queries
    est.queries += 2;
    apply_mask_in_place(kv, mask);
    const double next = std::abs(inner_product_boundary(grid, kv, v));
    est.last_rel_change =
        std::abs(next - rayleigh) / std::max(std::abs(next), 1e-300);
    rayleigh = next;
    const double kn = boundary_norm(grid, kv);
    if (kn < 1e-300) break;  // P K P annihilates the start vector
    kv *= 1.0 / kn;
    v = std::move(kv);
    ++est.iterations;
  }
  est.value = rayleigh;
  return est;
}

}  // namespace ptrlab
