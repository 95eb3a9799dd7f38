#include "ptrlab/oracle.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ptrlab/random.hpp"

namespace ptrlab {

QueryLog::QueryLog(std::string path) : path_(std::move(path)) {
  std::ifstream probe(path_);
  const bool empty = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  probe.close();
  if (empty) {
    std::ofstream out(path_, std::ios::app);
    out << "query_index,input_norm,output_norm\n";
  }
}

void QueryLog::record(long index, double in_norm, double out_norm) {
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app);
  out << index << ',' << in_norm << ',' << out_norm << '\n';
}

BoundarySignal MeasurementOracle::apply(const BoundarySignal& f) const {
  BoundarySignal out = apply_impl(f);
  long index;
  {
    std::lock_guard<std::mutex> lock(count_mu_);
    index = ++queries_;
  }
  if (log_)
    log_->record(index, boundary_norm(grid(), f), boundary_norm(grid(), out));
  return out;
}

IdealOracle::IdealOracle(DomainGrid grid, Medium medium)
    : grid_(std::move(grid)), medium_(std::move(medium)) {}

BoundarySignal IdealOracle::apply_impl(const BoundarySignal& f) const {
  return solve_forward(grid_, medium_, f).trace;
}

CachedOracle::CachedOracle(DomainGrid grid, Eigen::MatrixXd op)
    : grid_(std::move(grid)), op_(std::move(op)) {
  const long dof =
      static_cast<long>(grid_.n_boundary()) * grid_.n_time;
  if (op_.rows() != dof || op_.cols() != dof)
    throw std::invalid_argument("CachedOracle: operator shape mismatch");
}

BoundarySignal CachedOracle::apply_impl(const BoundarySignal& f) const {
  Eigen::Map<const Eigen::VectorXd> x(f.v.data(),
                                      static_cast<long>(f.v.size()));
  BoundarySignal out = f;
  Eigen::Map<Eigen::VectorXd> y(out.v.data(), static_cast<long>(out.v.size()));
  y.noalias() = op_ * x;
  return out;
}

CachedOracle assemble_cached(const MeasurementOracle& oracle) {
  const DomainGrid& grid = oracle.grid();
  const long dof = static_cast<long>(grid.n_boundary()) * grid.n_time;
  if (dof > 8192)
    throw std::invalid_argument(
        "assemble_cached: lattice above the 8192 degree-of-freedom cap");
  Eigen::MatrixXd op(dof, dof);
  BoundarySignal e = BoundarySignal::zeros(grid);
  for (long i = 0; i < dof; ++i) {
    e.v[i] = 1.0;
    const BoundarySignal col = oracle.apply(e);
    for (long r = 0; r < dof; ++r) op(r, i) = col.v[r];
    e.v[i] = 0.0;
  }
  return CachedOracle(grid, std::move(op));
}

namespace {
constexpr char kMagic[4] = {'P', 'T', 'R', 'K'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void save_cached(const CachedOracle& oracle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_cached: cannot open " + path);
  const DomainGrid& g = oracle.grid();
  out.write(kMagic, 4);
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::int32_t>(g.dim));
  write_pod(out, static_cast<std::int32_t>(g.n_boundary()));
  write_pod(out, static_cast<std::int32_t>(g.n_time));
  write_pod(out, g.dt);
  write_pod(out, g.horizon);
  for (double w : g.boundary_weight) write_pod(out, w);
  const Eigen::MatrixXd& m = oracle.matrix();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) write_pod(out, m(r, c));
}

CachedOracle load_cached(const std::string& path, const DomainGrid& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_cached: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_cached: bad magic");
  std::uint32_t version;
  read_pod(in, version);
  if (version != kFormatVersion)
    throw std::runtime_error("load_cached: unsupported version");
  std::int32_t dim, nb, nt;
  double dt, horizon;
  read_pod(in, dim);
  read_pod(in, nb);
  read_pod(in, nt);
  read_pod(in, dt);
  read_pod(in, horizon);
  if (dim != grid.dim || nb != grid.n_boundary() || nt != grid.n_time ||
      std::abs(dt - grid.dt) > 1e-12 * grid.dt)
    throw std::runtime_error("load_cached: lattice does not match the grid");
  std::vector<double> weights(nb);
  for (auto& w : weights) read_pod(in, w);
  const long dof = static_cast<long>(nb) * nt;
  Eigen::MatrixXd m(dof, dof);
  for (long r = 0; r < dof; ++r)
    for (long c = 0; c < dof; ++c) read_pod(in, m(r, c));
  if (!in) throw std::runtime_error("load_cached: truncated file");
  return CachedOracle(grid, std::move(m));
}

void validate_noise_spec(const NoiseCovarianceSpec& spec) {
  if (spec.sigma < 0.0)
    throw std::invalid_argument("noise: sigma must be >= 0");
  if (!(spec.ell_t > 0.0) || !(spec.ell_x > 0.0))
    throw std::invalid_argument(
        "noise: correlation lengths must be positive (white noise has a "
        "non-compact covariance and is excluded)");
}

NoisyOracle::NoisyOracle(const MeasurementOracle& inner,
                         NoiseCovarianceSpec spec, std::uint64_t seed)
    : inner_(inner), spec_(spec), seed_(seed) {
  validate_noise_spec(spec_);
}

BoundarySignal NoisyOracle::noise_draw(std::uint64_t ordinal) const {
  const DomainGrid& g = inner_.grid();
  const int nb = g.n_boundary(), nt = g.n_time;
  Rng rng(hash_combine(hash_combine(seed_, 0xA5C3u), ordinal));
  std::vector<double> white(static_cast<std::size_t>(nb) * nt);
  for (double& x : white) x = rng.normal();

  // Variance-preserving separable Gaussian smoothing: time axis per node
  // (truncated at the ends), then cyclically along the boundary chain in 2D.
  BoundarySignal noise = BoundarySignal::zeros(g);
  const int rt = std::max(1, static_cast<int>(std::ceil(3.0 * spec_.ell_t / g.dt)));
  std::vector<double> kt(2 * rt + 1);
  for (int j = -rt; j <= rt; ++j)
    kt[j + rt] = std::exp(-0.5 * (j * g.dt / spec_.ell_t) * (j * g.dt / spec_.ell_t));
  for (int b = 0; b < nb; ++b) {
    for (int k = 0; k < nt; ++k) {
      double acc = 0.0, norm2 = 0.0;
      for (int j = -rt; j <= rt; ++j) {
        const int kk = k + j;
        if (kk < 0 || kk >= nt) continue;
        const double w = kt[j + rt];
        acc += w * white[static_cast<std::size_t>(b) * nt + kk];
        norm2 += w * w;
      }
      noise.at(b, k) = acc / std::sqrt(norm2);
    }
  }
  if (g.dim == 2) {
    const int rx = std::max(1, static_cast<int>(std::ceil(3.0 * spec_.ell_x / g.h)));
    std::vector<double> kx(2 * rx + 1);
    double norm2 = 0.0;
    for (int j = -rx; j <= rx; ++j) {
      kx[j + rx] = std::exp(-0.5 * (j * g.h / spec_.ell_x) * (j * g.h / spec_.ell_x));
      norm2 += kx[j + rx] * kx[j + rx];
    }
    const double inv_norm = 1.0 / std::sqrt(norm2);
    BoundarySignal smoothed = BoundarySignal::zeros(g);
    for (int k = 0; k < nt; ++k) {
      for (int b = 0; b < nb; ++b) {
        double acc = 0.0;
        for (int j = -rx; j <= rx; ++j) {
          const int bb = ((b + j) % nb + nb) % nb;
          acc += kx[j + rx] * noise.at(bb, k);
        }
        smoothed.at(b, k) = acc * inv_norm;
      }
    }
    noise = std::move(smoothed);
  }
  noise *= spec_.sigma;
  return noise;
}

BoundarySignal NoisyOracle::apply_impl(const BoundarySignal& f) const {
  std::uint64_t ordinal;
  {
    std::lock_guard<std::mutex> lock(draw_mu_);
    ordinal = draw_counter_++;
  }
  BoundarySignal out = inner_.apply(f);
  out += noise_draw(ordinal);
  return out;
}

}  // namespace ptrlab
