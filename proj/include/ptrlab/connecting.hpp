#ifndef PTRLAB_CONNECTING_HPP
#define PTRLAB_CONNECTING_HPP

#include <cstdint>
#include <string>

#include "ptrlab/boundary_ops.hpp"
#include "ptrlab/oracle.hpp"

namespace ptrlab {

/// The (filter variant, sign) pair fixing K.  With the kIntro filter the
/// connecting operator is K = R Lambda R J - J Lambda (sign +1); with
/// kSection2 the same operator is J Lambda - R Lambda R J (sign -1).  Both
/// satisfy <Kf, h>_dM = <u^f(T), u^h(T)>_M; the sign is resolved per medium
/// by the positivity probe below and frozen afterwards.
struct Convention {
  FilterVariant variant = FilterVariant::kIntro;
  int sign = +1;
};

std::string to_string(const Convention& c);

/// Connecting operator K built from the black-box oracle and the boundary
/// operators R and J.  Every apply costs exactly 2 oracle queries.
class ConnectingOperator {
 public:
  ConnectingOperator(const MeasurementOracle& oracle, Convention convention);

  const DomainGrid& grid() const { return oracle_.grid(); }
  const MeasurementOracle& oracle() const { return oracle_; }
  const Convention& convention() const { return conv_; }

  /// Kf = sign * (R Lambda (R J f) - J Lambda f); 2 queries.
  BoundarySignal apply(const BoundarySignal& f) const;

  /// Kh from the two raw measurements of the iteration step,
  /// a = Lambda h and b = Lambda(R J h):  Kh = sign * (R b - J a).
  BoundarySignal combine(const BoundarySignal& a, const BoundarySignal& b) const;

  /// Blagovestchenskii inner product <u^f(T), u^h(T)>_M = <Kf, h>_dM,
  /// evaluated from boundary data only; 2 queries.
  double blago_inner_product(const BoundarySignal& f,
                             const BoundarySignal& h) const;

 private:
  const MeasurementOracle& oracle_;
  Convention conv_;
};

/// Resolves the sign for a given filter variant by probing <Kf, f> on a few
/// seeded smooth sources: the sign making the Gram form nonnegative is kept.
Convention resolve_convention(const MeasurementOracle& oracle,
                              FilterVariant variant, std::uint64_t seed = 7u);

struct NormEstimate {
  double value = 0.0;
  double last_rel_change = 0.0;
  int iterations = 0;
  long queries = 0;
};

/// Power-method estimate of ||P K P|| in L2(dS_g dt); 2 queries per step.
/// Returns 0 for an empty projector.
NormEstimate estimate_pkp_norm(const ConnectingOperator& op,
                               const std::vector<std::uint8_t>& mask,
                               int n_iter, std::uint64_t seed = 11u);

}  // namespace ptrlab

#endif  // PTRLAB_CONNECTING_HPP
