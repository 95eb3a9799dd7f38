#ifndef PTRLAB_ORACLE_HPP
#define PTRLAB_ORACLE_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptrlab/medium.hpp"
#include "ptrlab/signal.hpp"
#include "ptrlab/wave_solver.hpp"

namespace ptrlab {

/// Optional per-query log: (query index, input norm, output norm), written as
/// appendable CSV rows.
class QueryLog {
 public:
  explicit QueryLog(std::string path);
  void record(long index, double in_norm, double out_norm);

 private:
  std::string path_;
  std::mutex mu_;
};

/// Black-box response operator Lambda_{2T}.  Implementations expose boundary
/// traces only; interior fields are reachable solely through the separate
/// validation path (wave_solver called directly on grid + medium).
class MeasurementOracle {
 public:
  virtual ~MeasurementOracle() = default;

  BoundarySignal apply(const BoundarySignal& f) const;

  long query_count() const { return queries_; }
  void reset_query_count() const { queries_ = 0; }
  void set_query_log(std::shared_ptr<QueryLog> log) { log_ = std::move(log); }

  virtual const DomainGrid& grid() const = 0;

 protected:
  MeasurementOracle() = default;
  MeasurementOracle(const MeasurementOracle& o)
      : queries_(o.queries_.load()), log_(o.log_) {}
  MeasurementOracle& operator=(const MeasurementOracle& o) {
    queries_ = o.queries_.load();
    log_ = o.log_;
    return *this;
  }

  virtual BoundarySignal apply_impl(const BoundarySignal& f) const = 0;

 private:
  mutable std::atomic<long> queries_{0};
  std::shared_ptr<QueryLog> log_;
};

/// Solver-backed oracle: each query is a fresh forward solve over [0, 2T].
class IdealOracle : public MeasurementOracle {
 public:
  IdealOracle(DomainGrid grid, Medium medium);
  const DomainGrid& grid() const override { return grid_; }

 protected:
  BoundarySignal apply_impl(const BoundarySignal& f) const override;

 private:
  DomainGrid grid_;
  Medium medium_;
};

/// Dense operator assembled column-by-column from unit impulses; agrees with
/// the wrapped oracle to round-off and enables exact linear-algebra oracles.
class CachedOracle : public MeasurementOracle {
 public:
  CachedOracle(DomainGrid grid, Eigen::MatrixXd op);
  const DomainGrid& grid() const override { return grid_; }
  const Eigen::MatrixXd& matrix() const { return op_; }

 protected:
  BoundarySignal apply_impl(const BoundarySignal& f) const override;

 private:
  DomainGrid grid_;
  Eigen::MatrixXd op_;
};

/// Assembles the dense operator (boundary x time)^2 by querying unit impulses
/// per lattice site.  Rejects lattices above 8192 degrees of freedom.
CachedOracle assemble_cached(const MeasurementOracle& oracle);

/// Flat binary persistence: header (magic "PTRK", version, dims, dt, dS
/// weights) followed by row-major 64-bit floats.
void save_cached(const CachedOracle& oracle, const std::string& path);
CachedOracle load_cached(const std::string& path, const DomainGrid& grid);

/// Gaussian noise with separable correlation: amplitude sigma (pointwise
/// standard deviation), correlation lengths ell_t (time) and ell_x (boundary
/// arclength).  Compactness of the covariance requires ell_t, ell_x > 0.
struct NoiseCovarianceSpec {
  double sigma = 0.0;
  double ell_t = 0.0;
  double ell_x = 0.0;
};

void validate_noise_spec(const NoiseCovarianceSpec& spec);

/// Wraps an oracle and adds a fresh, independent correlated Gaussian draw per
/// query.  Queries are serialized to advance the draw counter; the noise
/// sequence is a pure function of (seed, query ordinal), so a rerun with the
/// same seed is bit-identical regardless of thread schedule.
class NoisyOracle : public MeasurementOracle {
 public:
  NoisyOracle(const MeasurementOracle& inner, NoiseCovarianceSpec spec,
              std::uint64_t seed);
  const DomainGrid& grid() const override { return inner_.grid(); }

  /// One correlated noise field (used by apply_impl; exposed for tests).
  BoundarySignal noise_draw(std::uint64_t ordinal) const;

 protected:
  BoundarySignal apply_impl(const BoundarySignal& f) const override;

 private:
  const MeasurementOracle& inner_;
  NoiseCovarianceSpec spec_;
  std::uint64_t seed_;
  mutable std::uint64_t draw_counter_ = 0;
  mutable std::mutex draw_mu_;
};

}  // namespace ptrlab

#endif  // PTRLAB_ORACLE_HPP
