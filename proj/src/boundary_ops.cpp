#include "ptrlab/boundary_ops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ptrlab {

std::string to_string(FilterVariant v) {
  return v == FilterVariant::kIntro ? "intro" : "section2";
}

FilterVariant filter_variant_from_string(const std::string& s) {
  if (s == "intro") return FilterVariant::kIntro;
  if (s == "section2") return FilterVariant::kSection2;
  throw std::invalid_argument("unknown filter variant: " + s);
}

BoundarySignal time_reverse(const BoundarySignal& f) {
  BoundarySignal r = f;
  for (int b = 0; b < f.n_boundary; ++b) {
    const double* src = f.v.data() + static_cast<std::size_t>(b) * f.n_time;
    double* dst = r.v.data() + static_cast<std::size_t>(b) * f.n_time;
    for (int k = 0; k < f.n_time; ++k) dst[k] = src[f.n_time - 1 - k];
  }
  return r;
}

BoundarySignal time_filter(const BoundarySignal& f, FilterVariant variant) {
  BoundarySignal out = f;
  const int nt = f.n_time;
  const double half_dt = 0.5 * f.dt;
  std::vector<double> prefix(nt + 1, 0.0);  // prefix[j] = sum of f[0..j-1]
  for (int b = 0; b < f.n_boundary; ++b) {
    const double* src = f.v.data() + static_cast<std::size_t>(b) * nt;
    double* dst = out.v.data() + static_cast<std::size_t>(b) * nt;
    for (int j = 0; j < nt; ++j) prefix[j + 1] = prefix[j] + src[j];
    if (variant == FilterVariant::kIntro) {
      // Jf(t) = 1/2 int_0^{min(t, 2T-t)} f: full cells below the cut sample
      // m = min(k, nt-1-k) plus half of the cut cell.
      for (int k = 0; k < nt; ++k) {
        const int m = std::min(k, nt - 1 - k);
        dst[k] = half_dt * (prefix[m] + 0.5 * src[m]);
      }
    } else {
      // Jf(t) = 1/2 int over {s > t, s + t <= 2T}: the transpose kernel,
      // half weight on both cut cells; vanishes for t >= T.
      for (int k = 0; k < nt; ++k) {
        const int m = nt - 1 - k;
        if (k >= m) {
          dst[k] = 0.0;
          continue;
        }
        dst[k] = half_dt * (0.5 * src[k] + (prefix[m] - prefix[k + 1]) +
                            0.5 * src[m]);
      }
    }
  }
  return out;
}

void validate_projector(const DomainGrid& grid, const ProjectorSpec& spec) {
  for (const auto& patch : spec.patches) {
    if (patch.gamma.empty())
      throw std::invalid_argument("projector: empty boundary patch Gamma");
    for (int p : patch.gamma)
      if (p < 0 || p >= grid.n_boundary())
        throw std::invalid_argument("projector: boundary position out of range");
    if (!(patch.T_j >= 0.0 && patch.T_j <= grid.T() + 1e-12))
      throw std::invalid_argument("projector: need 0 <= T_j <= T");
  }
}

std::vector<std::uint8_t> projector_mask(const DomainGrid& grid,
                                         const ProjectorSpec& spec) {
  validate_projector(grid, spec);
  const int nt = grid.n_time;
  std::vector<std::uint8_t> mask(
      static_cast<std::size_t>(grid.n_boundary()) * nt, 0);
  const int k_hi = nt / 2 - 1;  // last midpoint sample with t <= T
  for (const auto& patch : spec.patches) {
    // samples with T - T_j <= t_k <= T
    const double lo = (grid.T() - patch.T_j) / grid.dt - 0.5;
    int k_lo = static_cast<int>(std::ceil(lo - 1e-9));
    if (k_lo < 0) k_lo = 0;
    if (k_lo > k_hi) continue;  // window narrower than one sample
    for (int p : patch.gamma)
      for (int k = k_lo; k <= k_hi; ++k)
        mask[static_cast<std::size_t>(p) * nt + k] = 1;
  }
  return mask;
}

BoundarySignal project(const BoundarySignal& f,
                       const std::vector<std::uint8_t>& mask) {
  BoundarySignal out = f;
  apply_mask_in_place(out, mask);
  return out;
}

BoundarySignal project(const DomainGrid& grid, const BoundarySignal& f,
                       const ProjectorSpec& spec) {
  return project(f, projector_mask(grid, spec));
}

void apply_mask_in_place(BoundarySignal& f,
                         const std::vector<std::uint8_t>& mask) {
  if (mask.size() != f.v.size())
    throw std::invalid_argument("projector mask does not match the lattice");
  for (std::size_t i = 0; i < f.v.size(); ++i)
    if (!mask[i]) f.v[i] = 0.0;
}

bool mask_empty(const std::vector<std::uint8_t>& mask) {
  return std::all_of(mask.begin(), mask.end(), [](std::uint8_t m) { return !m; });
}

BoundarySignal make_impulse(const DomainGrid& grid, int b_pos, int k_src,
                            double amplitude) {
  if (b_pos < 0 || b_pos >= grid.n_boundary())
    throw std::invalid_argument("make_impulse: boundary position out of range");
  if (k_src < 0 || k_src >= grid.n_time)
    throw std::invalid_argument("make_impulse: time index out of range");
  BoundarySignal f = BoundarySignal::zeros(grid);
  // Unit-integral impulse, 3-sample triangular mollification.
  const double scale = amplitude / grid.dt;
  const int ks[3] = {k_src - 1, k_src, k_src + 1};
  const double w[3] = {0.25, 0.5, 0.25};
  for (int i = 0; i < 3; ++i)
    if (ks[i] >= 0 && ks[i] < grid.n_time) f.at(b_pos, ks[i]) += w[i] * scale;
  return f;
}

std::vector<int> whole_boundary(const DomainGrid& grid) {
  std::vector<int> all(grid.n_boundary());
  for (int p = 0; p < grid.n_boundary(); ++p) all[p] = p;
  return all;
}

std::vector<int> boundary_patch(const DomainGrid& grid, int center_pos,
                                double radius) {
  if (center_pos < 0 || center_pos >= grid.n_boundary())
    throw std::invalid_argument("boundary_patch: center out of range");
  if (grid.dim == 1) return {center_pos};
  const int nb = grid.n_boundary();
  const int span = static_cast<int>(std::floor(radius / grid.h + 1e-9));
  std::set<int> positions;
  for (int o = -span; o <= span; ++o)
    positions.insert(((center_pos + o) % nb + nb) % nb);
  return {positions.begin(), positions.end()};
}

}  // namespace ptrlab
