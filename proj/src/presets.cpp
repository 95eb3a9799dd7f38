#include "ptrlab/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace ptrlab {

namespace {

std::vector<Preset> build_catalog() {
  auto zero = [](double, double) { return 0.0; };
  std::vector<Preset> cat;

  {
    Preset p;
    p.name = "1d-homog";
    p.description = "unit interval, c = 1, q = 0, eta = 0";
    p.dim = 1;
    p.default_resolution = 256;
    p.recommended_T = 1.5;
    p.c_min = p.c_max = 1.0;
    p.c = [](double, double) { return 1.0; };
    p.q = zero;
    p.eta = zero;
    cat.push_back(p);
  }
  {
    Preset p;
    p.name = "1d-fast";
    p.description = "unit interval, c = 2, q = 0, eta = 0";
    p.dim = 1;
    p.default_resolution = 256;
    p.recommended_T = 1.0;
    p.c_min = p.c_max = 2.0;
    p.c = [](double, double) { return 2.0; };
    p.q = zero;
    p.eta = zero;
    cat.push_back(p);
  }
  {
    Preset p;
    p.name = "1d-sine";
    p.description = "unit interval, c = 1 + 0.3 sin(pi x)";
    p.dim = 1;
    p.default_resolution = 256;
    p.recommended_T = 1.5;
    p.c_min = 1.0;
    p.c_max = 1.3;
    p.c = [](double x, double) { return 1.0 + 0.3 * std::sin(M_PI * x); };
    p.q = zero;
    p.eta = zero;
    cat.push_back(p);
  }
  {
    Preset p;
    p.name = "2d-homog";
    p.description = "unit square, c = 1, q = 0, eta = 0";
    p.dim = 2;
    p.default_resolution = 64;
    p.recommended_T = 1.6;
    p.c_min = p.c_max = 1.0;
    p.c = [](double, double) { return 1.0; };
    p.q = zero;
    p.eta = zero;
    cat.push_back(p);
  }
  {
    Preset p;
    p.name = "2d-gradient";
    p.description = "unit square, c = 1 + 0.3 x";
    p.dim = 2;
    p.default_resolution = 64;
    p.recommended_T = 1.6;
    p.c_min = 1.0;
    p.c_max = 1.3;
    p.c = [](double x, double) { return 1.0 + 0.3 * x; };
    p.q = zero;
    p.eta = zero;
    cat.push_back(p);
  }
  {
    Preset p;
    p.name = "2d-lens";
    p.description = "unit square, slow Gaussian lens: c = 1.05 - 0.35 exp(-r^2/0.045)";
    p.dim = 2;
    p.default_resolution = 64;
    p.recommended_T = 2.0;
    p.c_min = 0.7;
    p.c_max = 1.05;
    p.c = [](double x, double y) {
      const double dx = x - 0.5, dy = y - 0.5;
      return 1.05 - 0.35 * std::exp(-(dx * dx + dy * dy) / 0.045);
    };
    p.q = zero;
    p.eta = zero;
    cat.push_back(p);
  }
  return cat;
}

}  // namespace

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = build_catalog();
  return catalog;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : preset_catalog())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset: " + name);
}

PresetInstance instantiate_preset(const Preset& preset, int resolution,
                                  double T) {
  if (resolution <= 0) resolution = preset.default_resolution;
  if (T <= 0.0) T = preset.recommended_T;
  std::vector<double> extents{preset.extent_x};
  std::vector<int> res{resolution};
  if (preset.dim == 2) {
    extents.push_back(preset.extent_y);
    res.push_back(resolution);
  }
  PresetInstance inst;
  inst.grid = build_grid(extents, res, T, preset.c_max);
  inst.medium = make_medium(inst.grid, preset.c, preset.q, preset.eta);
  attach_boundary_metric(inst.grid, inst.medium);
  return inst;
}

}  // namespace ptrlab
